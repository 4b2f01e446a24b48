"""Brute-force ground truth for Gaussian polynomial coefficients.

Everything here works on dense lists of Python integers and never touches the
symbolic pipeline, so it can be used to cross-check it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients ``p_k(l, m)`` of ``[l+m choose m]_q`` for ``k = 0..l*m``."""

    l: int
    m: int
    coeffs: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def half(self) -> int:
        """``floor(l*m/2)``, the index of the (first) peak."""
        return self.l * self.m // 2


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)


# --------------------------------------------------------------------------
# dense integer polynomial helpers (lists, index = exponent)

def poly_add(a: Sequence[int], b: Sequence[int], shift: int = 0, sign: int = 1) -> list[int]:
    """Return ``a + sign * q^shift * b``."""
    n = max(len(a), len(b) + shift)
    out = list(a) + [0] * (n - len(a))
    for i, c in enumerate(b):
        out[i + shift] += sign * c
    return _trim(out)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_divexact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials; ``b`` must have leading coefficient +-1."""
    a = list(a)
    b = _trim(list(b))
    lead = b[-1]
    if lead not in (1, -1):
        raise ValueError("divisor must have unit leading coefficient")
    if len(a) < len(b):
        if any(a):
            raise ArithmeticError("division is not exact")
        return []
    quot = [0] * (len(a) - len(b) + 1)
    for i in range(len(quot) - 1, -1, -1):
        c = a[i + len(b) - 1] * lead
        quot[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    if any(a):
        raise ArithmeticError("division is not exact")
    return _trim(quot)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


# --------------------------------------------------------------------------
# Gaussian polynomials

@lru_cache(maxsize=4096)
def _gaussian(n: int, k: int) -> tuple[int, ...]:
    # [n choose k] = [n-1 choose k-1] + q^k [n-1 choose k]
    if k < 0 or k > n or n < 0:
        return ()
    if k == 0 or k == n:
        return (1,)
    # iterate on n with fixed window of k to stay out of deep recursion
    rows: list[list[int]] = [[1]]  # rows[j] = [n0 choose j] for current n0
    for n0 in range(1, n + 1):
        new = []
        for j in range(0, min(n0, k) + 1):
            if j == 0 or j == n0:
                new.append([1])
                continue
            left = rows[j - 1]
            right = rows[j] if j < len(rows) else []
            new.append(poly_add(left, right, shift=j))
        rows = new
    return tuple(rows[k])


def qbinomial(n: int, k: int) -> list[int]:
    """Coefficient list of ``[n choose k]_q``; empty (zero) outside ``0 <= k <= n``."""
    return list(_gaussian(n, k))


def gaussian_coefficients(l: int, m: int) -> CoefficientTable:
    """``p_k(l, m)`` for all ``k`` via the q-Pascal recurrence."""
    if l < 0 or m < 0:
        raise ValueError("l and m must be nonnegative")
    return CoefficientTable(l, m, _gaussian(l + m, m))


def gaussian_by_product(l: int, m: int) -> list[int]:
    """Same polynomial as :func:`gaussian_coefficients`, from
    ``(q^{l+1};q)_m / (q;q)_m`` by exact division."""
    num = [1]
    den = [1]
    for i in range(1, m + 1):
        num = poly_mul(num, [1] + [0] * (l + i - 1) + [-1])
        den = poly_mul(den, [1] + [0] * (i - 1) + [-1])
    return poly_divexact(num, den)


# --------------------------------------------------------------------------
# partitions

def partition_numbers(up_to: int) -> list[int]:
    """``p(0), ..., p(up_to)`` by the standard coin-change recurrence."""
    if up_to < 0:
        raise ValueError("up_to must be >= 0")
    p = [1] + [0] * up_to
    for part in range(1, up_to + 1):
        for n in range(part, up_to + 1):
            p[n] += p[n - part]
    return p


def L_of_d(d: int) -> int:
    """Smallest ``N >= 0`` with ``p(N+1) - p(N) >= d``."""
    if d < 0:
        raise ValueError("d must be >= 0")
    size = 16
    while True:
        p = partition_numbers(size)
        for n in range(size):
            if p[n + 1] - p[n] >= d:
                return n
        size *= 2


def partitions(n: int) -> Iterator[Partition]:
    """Partitions of ``n`` in reverse lexicographic order, ``(n)`` first."""
    def rec(rest: int, cap: int, acc: tuple[int, ...]):
        if rest == 0:
            yield Partition(acc)
            return
        for part in range(min(rest, cap), 0, -1):
            yield from rec(rest - part, part, acc + (part,))

    yield from rec(n, n, ())


# --------------------------------------------------------------------------
# unimodality scans

def scan_d_strict(table: CoefficientTable | Sequence[int], d: int, k_low: int, k_high: int) -> list[int]:
    """All ``k`` in ``[k_low, k_high]`` with ``a_{k+1} - a_k < d``."""
    a = table.coeffs if isinstance(table, CoefficientTable) else table
    n = len(a)
    out = []
    for k in range(k_low, k_high + 1):
        x = a[k] if 0 <= k < n else 0
        y = a[k + 1] if 0 <= k + 1 < n else 0
        if y - x < d:
            out.append(k)
    return out


def d_strict_violations(l: int, m: int, d: int, low_margin: int, high_margin: int) -> list[int]:
    """Violations of ``p_{k+1} - p_k >= d`` on the window
    ``low_margin <= k <= floor(l*m/2) - 1 - high_margin``."""
    t = gaussian_coefficients(l, m)
    return scan_d_strict(t, d, low_margin, t.half - 1 - high_margin)


def is_unimodal(a: Sequence[int]) -> bool:
    i = 0
    n = len(a)
    while i + 1 < n and a[i] <= a[i + 1]:
        i += 1
    while i + 1 < n and a[i] >= a[i + 1]:
        i += 1
    return i >= n - 1


def support(a: Sequence[int]) -> tuple[int, int] | None:
    nz = [i for i, c in enumerate(a) if c]
    if not nz:
        return None
    return nz[0], nz[-1]


def strict_exceptional_pairs(max_size: int, min_size: int = 2) -> list[tuple[int, int]]:
    """Pairs ``min_size <= l <= m <= max_size`` whose Gaussian polynomial is not
    strictly increasing on ``1 <= k <= floor(l*m/2) - 1``."""
    out = []
    for m in range(min_size, max_size + 1):
        for l in range(min_size, m + 1):
            if d_strict_violations(l, m, 1, 1, 0):
                out.append((l, m))
    return out


# --------------------------------------------------------------------------
# KOH

def koh_summand(l: int, partition: Partition | Sequence[int]) -> list[int]:
    """The summand of Zeilberger's KOH identity attached to one partition of ``m``."""
    parts = tuple(partition.parts if isinstance(partition, Partition) else partition)
    m = sum(parts)
    r = len(parts)
    Y = [0] * (r + 2)
    for j in range(1, r + 1):
        Y[j] = Y[j - 1] + parts[j - 1]
    Y[r + 1] = m
    ext = parts + (0,)
    shift = 2 * sum(p * (p - 1) // 2 for p in parts)
    poly = [0] * shift + [1]
    for j in range(1, r + 1):
        top = j * (l + 2) - Y[j - 1] - Y[j + 1]
        bottom = ext[j - 1] - ext[j]
        factor = qbinomial(top, bottom)
        if not factor:
            return []
        poly = poly_mul(poly, factor)
    return poly


def koh_decomposition(l: int, m: int) -> list[tuple[Partition, list[int]]]:
    """KOH summands for every partition of ``m``, in reverse lexicographic order."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return [(p, koh_summand(l, p)) for p in partitions(m)]


def koh_layers(l: int, m: int) -> list[list[int]]:
    """Cumulative partial sums of the KOH summands, padded to length ``l*m + 1``."""
    n = l * m + 1
    acc = [0] * n
    layers = []
    for _, summand in koh_decomposition(l, m):
        for i, c in enumerate(summand):
            acc[i] += c
        layers.append(list(acc))
    return layers


# --------------------------------------------------------------------------
# differences of q-binomials

def sz_difference(l: int, m: int, b: int) -> list[int]:
    """Coefficients of ``[l+m choose m] - q^{m(l-b)/2 + b} [b+m-2 choose m-2]``."""
    if (m * b - l * m) % 2:
        raise ValueError("need m*b = l*m (mod 2) so that the shift m(l-b)/2 + b is an integer")
    if b < 0:
        raise ValueError("b must be >= 0")
    shift = m * (l - b) // 2 + b
    second = qbinomial(b + m - 2, m - 2)
    if shift < 0 and second:
        raise ValueError("negative q-shift: b exceeds l*m/(m-2)")
    return poly_add(qbinomial(l + m, m), second, shift=max(shift, 0), sign=-1)


def rs_difference_lower(l: int, m: int) -> list[int]:
    """``[l+m choose m] - [l+m choose m-1]``."""
    return poly_add(qbinomial(l + m, m), qbinomial(l + m, m - 1), sign=-1)


def rs_difference_shifted(l: int, m: int) -> list[int]:
    """``[l+m choose m] - q^l [l+m-2 choose m-2]``."""
    return poly_add(qbinomial(l + m, m), qbinomial(l + m - 2, m - 2), shift=l, sign=-1)


def unimodality_violations(a: Sequence[int], k_high: int | None = None, k_low: int = 0) -> list[int]:
    """``k`` with ``a_{k+1} < a_k`` on ``k_low <= k <= k_high`` (default: first half)."""
    if k_high is None:
        k_high = (len(a) - 1) // 2 - 1
    return scan_d_strict(a, 0, k_low, k_high)
