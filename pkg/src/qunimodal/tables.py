"""Published margins ``(L(m, d), U(m, d))`` used as defaults by ``prove``."""

PUBLISHED_MARGINS = {
    (3, 1): (1, 3), (4, 1): (1, 2), (5, 1): (1, 0), (6, 1): (1, 0), (7, 1): (1, 0),
    (3, 2): (7, 6), (4, 2): (5, 2), (5, 2): (3, 0), (6, 2): (3, 0), (7, 2): (3, 0),
    (3, 3): (13, 9), (4, 3): (7, 2), (5, 3): (5, 0), (6, 3): (5, 0), (7, 3): (5, 0),
    (3, 4): (19, 12), (4, 4): (9, 2), (5, 4): (7, 0), (6, 4): (7, 0), (7, 4): (7, 0),
    (3, 5): (25, 15), (4, 5): (11, 2), (5, 5): (7, 0), (6, 5): (7, 0), (7, 5): (7, 0),
}


def published_margins(m: int, d: int) -> tuple[int, int] | None:
    """Margins for ``(m, d)`` if published, else ``None``."""
    return PUBLISHED_MARGINS.get((m, d))
