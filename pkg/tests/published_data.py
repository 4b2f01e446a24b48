"""Published reference values used by the golden tests.

Every entry is transcribed from the published tables; nothing here is computed.
"""

# d-strict margins (L, U) by (d, m)
MARGINS = {
    (1, 3): (1, 3), (1, 4): (1, 2), (1, 5): (1, 0), (1, 6): (1, 0), (1, 7): (1, 0),
    (2, 3): (7, 6), (2, 4): (5, 2), (2, 5): (3, 0), (2, 6): (3, 0), (2, 7): (3, 0),
    (3, 3): (13, 9), (3, 4): (7, 2), (3, 5): (5, 0), (3, 6): (5, 0), (3, 7): (5, 0),
    (4, 3): (19, 12), (4, 4): (9, 2), (4, 5): (7, 0), (4, 6): (7, 0), (4, 7): (7, 0),
    (5, 3): (25, 15), (5, 4): (11, 2), (5, 5): (7, 0), (5, 6): (7, 0), (5, 7): (7, 0),
}


def _r(a, b):
    return set(range(a, b + 1))


# exceptional l-values by (d, m)
EXCEPTIONS = {
    (1, 3): set(), (1, 4): {4}, (1, 5): _r(1, 4) | {6, 10, 14},
    (1, 6): _r(1, 7) | {9, 11, 13}, (1, 7): _r(1, 4) | {6, 10},
    (2, 3): set(), (2, 4): _r(5, 8) | {10}, (2, 5): _r(1, 10) | {14},
    (2, 6): _r(1, 9) | {11, 13, 15, 17}, (2, 7): _r(1, 6) | {10},
    (3, 3): set(), (3, 4): _r(5, 14) | {16}, (3, 5): _r(1, 12) | {14, 18, 22, 26},
    (3, 6): _r(1, 11) | {13, 15, 17, 19}, (3, 7): _r(1, 4) | {6, 10},
    (4, 3): set(), (4, 4): _r(6, 20) | {22}, (4, 5): _r(1, 15) | {18, 22, 26, 30},
    (4, 6): _r(1, 11) | set(range(13, 22, 2)), (4, 7): _r(1, 8) | {10},
    (5, 3): set(), (5, 4): _r(7, 26) | {28}, (5, 5): _r(1, 18) | {22, 26, 30, 34},
    (5, 6): _r(1, 13) | set(range(15, 24, 2)), (5, 7): _r(1, 10) | {14},
}


# KOH with l=8, m=5: cumulative layer values at k = 0..40, bottom layer first (Figure 1)
KOH_8_5_LAYERS = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 4, 6, 8, 9, 10, 10, 11, 10, 10, 9, 8, 6, 4, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 4, 6, 10, 13, 18, 22, 27, 30, 34, 35, 37, 35, 34, 30, 27, 22, 18, 13, 10, 6, 4, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 2, 5, 8, 13, 17, 23, 27, 33, 37, 42, 45, 49, 50, 52, 50, 49, 45, 42, 37, 33, 27, 23, 17, 13, 8, 5, 2, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 2, 4, 6, 10, 14, 20, 25, 32, 37, 44, 49, 55, 58, 62, 63, 65, 63, 62, 58, 55, 49, 44, 37, 32, 25, 20, 14, 10, 6, 4, 2, 1, 0, 0, 0, 0],
    [0, 0, 1, 2, 4, 6, 9, 12, 17, 21, 27, 32, 39, 44, 51, 56, 62, 65, 69, 70, 72, 70, 69, 65, 62, 56, 51, 44, 39, 32, 27, 21, 17, 12, 9, 6, 4, 2, 1, 0, 0],
    [1, 1, 2, 3, 5, 7, 10, 13, 18, 22, 28, 33, 40, 45, 52, 57, 63, 66, 70, 71, 73, 71, 70, 66, 63, 57, 52, 45, 40, 33, 28, 22, 18, 13, 10, 7, 5, 3, 2, 1, 1],
]


# Stanley-Zanello m = 6: interior exceptions (l, b, k) with k < 60, k != 0
SZ6_TRIPLES = {
    (2, 3, 2), (3, 4, 4), (3, 1, 6), (3, 2, 6), (3, 3, 6), (3, 4, 6),
    (5, 7, 6), (5, 6, 10), (5, 7, 10), (5, 6, 12), (5, 7, 12), (5, 4, 12),
    (5, 5, 12), (7, 7, 18), (7, 8, 18), (7, 9, 18), (7, 10, 18), (9, 13, 24),
}

# exceptions at k = 3l - 1: l -> set of b ("a, b, ..., c" means a, then b..c)
SZ6_TOP = {
    1: {0}, 3: {0, 2, 3, 4}, 5: {0} | _r(2, 7), 7: {0} | _r(2, 10), 9: {0} | _r(2, 13),
    11: {0} | _r(2, 16), 13: {0} | _r(2, 19), 15: {6} | _r(8, 22), 17: {6} | _r(8, 25),
    19: {12} | _r(14, 28), 21: {18} | _r(20, 31), 23: {24} | _r(26, 34), 25: {36}, 27: set(),
}

# Stanley-Zanello m = 7: exceptional (l, k) by b1, besides b = (7l - 2)/5 at k = 0
SZ7_PAIRS = {
    0: {(6, 12), (6, 16), (6, 18), (6, 20), (8, 26)},
    2: {(2, 6), (4, 12), (10, 34)},
    4: {(6, 20)},
    6: {(10, 34)},
}

# strict unimodality fails for these l, m >= 5 (l <= m)
STRICT_EXCEPTIONS = {(5, 6), (5, 10), (5, 14), (6, 6), (6, 7), (6, 9), (6, 11), (6, 13), (7, 10)}

# L(d) table
L_OF_D = {0: 0, 1: 1, 2: 3, 3: 5, 5: 7, 8: 8, 9: 9, 13: 10, 15: 11, 22: 12}

# (11 choose 3)_q, first coefficients
GAUSS_8_3_PREFIX = [1, 1, 2, 3, 4, 5, 7, 8, 10, 11, 12, 12, 13, 12, 12]
