"""Exact arithmetic in the cyclotomic field Q(w) = Q[x]/(Phi_L(x)).

Elements are stored densely: ``phi(L)`` integer numerators over one positive
common denominator.  Every operation reduces eagerly modulo ``Phi_L`` so that
equality is a plain comparison of the stored tuples.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = _lcm(out, v)
    return out


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`."""
    return Fraction(text.strip())


def format_rational(x: Scalar) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# integer polynomial helpers (low-to-high coefficient lists)

def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mul_naive(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _mul_kronecker(a: Sequence[int], b: Sequence[int]) -> list[int]:
    # pack into one big integer, multiply, unpack with signed digits
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    bits = (ma * mb * min(len(a), len(b))).bit_length() + 2
    A = 0
    for x in reversed(a):
        A = (A << bits) + x
    B = 0
    for x in reversed(b):
        B = (B << bits) + x
    C = A * B
    n = len(a) + len(b) - 1
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    out = [0] * n
    for i in range(n):
        r = C & mask
        if r >= half:
            r -= 1 << bits
        out[i] = r
        C = (C - r) >> bits
    return out


def int_poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    if min(len(a), len(b)) < 24 or not any(a) or not any(b):
        return _mul_naive(a, b)
    return _mul_kronecker(a, b)


@dataclass(frozen=True)
class CyclotomicPolynomial:
    order: int
    coeffs: tuple[int, ...]  # low to high, monic

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def _divides_exactly(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dl = len(den)
    q = [0] * (len(num) - dl + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + dl - 1]  # den monic
        q[i] = c
        if c:
            for j, y in enumerate(den):
                num[i + j] -= c * y
    if any(num):
        raise ArithmeticError("inexact division while building cyclotomic polynomial")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(L: int) -> CyclotomicPolynomial:
    """``Phi_L`` by dividing ``x^L - 1`` by ``Phi_d`` for every proper divisor ``d``."""
    if L < 1:
        raise ValueError("order must be a positive integer")
    poly = [-1] + [0] * (L - 1) + [1]
    for d in range(1, L):
        if L % d == 0:
            poly = _divides_exactly(poly, cyclotomic_polynomial(d).coeffs)
    return CyclotomicPolynomial(L, tuple(poly))


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    return cyclotomic_polynomial(n).degree


def _reduce_ints(poly: list[int], L: int) -> list[int]:
    """Reduce an integer polynomial modulo the monic ``Phi_L``."""
    phi = cyclotomic_polynomial(L).coeffs
    n = len(phi) - 1
    poly = list(poly)
    if len(poly) <= n:
        return poly + [0] * (n - len(poly))
    nz = [(j, c) for j, c in enumerate(phi[:-1]) if c]
    for i in range(len(poly) - 1, n - 1, -1):
        c = poly[i]
        if c:
            base = i - n
            for j, y in nz:
                poly[base + j] -= c * y
    return poly[:n]


@lru_cache(maxsize=None)
def omega_power_table(L: int) -> tuple[tuple[int, ...], ...]:
    """Row ``e`` holds ``w^e`` reduced modulo ``Phi_L`` (integer coordinates)."""
    n = totient(L)
    rows = []
    for e in range(L):
        rows.append(tuple(_reduce_ints([0] * e + [1], L)) if e >= n else
                    tuple(1 if i == e else 0 for i in range(n)))
    return tuple(rows)


class CyclotomicNumber:
    """Immutable element of ``Q(w)``, ``w = exp(2 pi i / L)``."""

    __slots__ = ("order", "_num", "_den", "_hash")

    def __init__(self, order: int, coeffs: Sequence[Scalar] = (), *, _raw=None):
        if _raw is not None:
            self.order = order
            self._num, self._den = _raw
            self._hash = None
            return
        if order < 1:
            raise ValueError("order must be positive")
        fr = [Fraction(c) for c in coeffs]
        den = lcm_all(f.denominator for f in fr) if fr else 1
        ints = [f.numerator * (den // f.denominator) for f in fr]
        ints = _reduce_ints(ints, order)
        self.order = order
        self._num, self._den = _normalize(ints, den)
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_ints(cls, order: int, nums: Sequence[int], den: int = 1) -> "CyclotomicNumber":
        """Build from an integer polynomial of any length (reduced here) over ``den``."""
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            nums = [-x for x in nums]
            den = -den
        ints = _reduce_ints(list(nums), order)
        return cls(order, _raw=_normalize(ints, den))

    @classmethod
    def rational(cls, order: int, value: Scalar) -> "CyclotomicNumber":
        v = Fraction(value)
        n = totient(order)
        return cls(order, _raw=_normalize([v.numerator] + [0] * (n - 1), v.denominator))

    @classmethod
    def zero(cls, order: int) -> "CyclotomicNumber":
        return cls.rational(order, 0)

    @classmethod
    def one(cls, order: int) -> "CyclotomicNumber":
        return cls.rational(order, 1)

    # -- accessors --------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._den) for x in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise ValueError(f"order mismatch: {self.order} vs {other.order}")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.rational(self.order, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._den == o._den:
            nums = [x + y for x, y in zip(self._num, o._num)]
            return CyclotomicNumber(self.order, _raw=_normalize(nums, self._den))
        a, b = self._den, o._den
        nums = [x * b + y * a for x, y in zip(self._num, o._num)]
        return CyclotomicNumber(self.order, _raw=_normalize(nums, a * b))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, _raw=(tuple(-x for x in self._num), self._den))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            nums = [x * f.numerator for x in self._num]
            return CyclotomicNumber(self.order, _raw=_normalize(nums, self._den * f.denominator))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prod = int_poly_mul(self._num, o._num)
        nums = _reduce_ints(prod, self.order)
        return CyclotomicNumber(self.order, _raw=_normalize(nums, self._den * o._den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def times_omega_power(self, e: int) -> "CyclotomicNumber":
        """``self * w^e`` using the precomputed power table."""
        L = self.order
        e %= L
        if e == 0:
            return self
        table = omega_power_table(L)
        n = len(self._num)
        acc = [0] * n
        for i, c in enumerate(self._num):
            if c:
                row = table[(i + e) % L]
                for j in range(n):
                    if row[j]:
                        acc[j] += c * row[j]
        return CyclotomicNumber(L, _raw=_normalize(acc, self._den))

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse.

        Small fields use the extended Euclidean algorithm against ``Phi_L``.
        Larger ones use the fraction-free identity ``a^-1 = prod_{j != 1}
        sigma_j(a) / N(a)`` over the Galois conjugates, which avoids the
        rational coefficient blow-up of Euclid at ``phi(L)`` near 100.
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        if self.is_rational():
            return CyclotomicNumber.rational(self.order, 1 / self.to_rational())
        L = self.order
        if totient(L) <= 16:
            phi = [Fraction(c) for c in cyclotomic_polynomial(L).coeffs]
            a = _trim([Fraction(x) for x in self._num])
            s = _ext_gcd_inverse(a, phi)
            return CyclotomicNumber(L, [c * self._den for c in s])
        acc: list[int] = [1]
        for j in range(2, L):
            if gcd(j, L) == 1:
                acc = _reduce_ints(int_poly_mul(acc, _conjugate_ints(self._num, j, L)), L)
                g = 0
                for x in acc:
                    g = gcd(g, x)
                if g > 1:
                    acc = [x // g for x in acc]
        norm = _reduce_ints(int_poly_mul(acc, list(self._num)), L)
        if any(norm[1:]) or norm[0] == 0:
            raise ArithmeticError("norm computation failed")
        # self^-1 = den * acc / norm[0]
        return CyclotomicNumber.from_ints(L, [x * self._den for x in acc], norm[0])

    def conjugate(self, j: int) -> "CyclotomicNumber":
        """Galois image under ``w -> w^j`` (``gcd(j, L) = 1``)."""
        L = self.order
        if gcd(j, L) != 1:
            raise ValueError("exponent must be coprime to the order")
        table = omega_power_table(L)
        n = len(self._num)
        acc = [0] * n
        for i, c in enumerate(self._num):
            if c:
                row = table[(i * j) % L]
                for t in range(n):
                    if row[t]:
                        acc[t] += c * row[t]
        return CyclotomicNumber(L, _raw=_normalize(acc, self._den))

    def to_complex(self) -> complex:
        import cmath
        w = cmath.exp(2j * cmath.pi / self.order)
        return sum(complex(c) * w ** i for i, c in enumerate(self.coeffs))

    # -- comparison / hashing --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.order == other.order and self._den == other._den and self._num == other._num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.order, self._num, self._den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CyclotomicNumber({self.order}, {self})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    # -- serialization ----------------------------------------------------
    def to_text(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_text(cls, order: int, items: Sequence[str]) -> "CyclotomicNumber":
        return cls(order, [parse_rational(s) for s in items])


def _conjugate_ints(nums: Sequence[int], j: int, L: int) -> list[int]:
    spread = [0] * L
    for i, c in enumerate(nums):
        if c:
            spread[(i * j) % L] += c
    return _reduce_ints(_trim(spread), L)


def _normalize(nums: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    g = den
    for x in nums:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g != 1:
        nums = [x // g for x in nums]
        den //= g
    return tuple(nums), den


def _poly_divmod_q(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return q, _trim(a[: len(b) - 1])


def _poly_sub_mul(a: list[Fraction], q: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    prod = [Fraction(0)] * (len(q) + len(b) - 1) if q and b else []
    for i, x in enumerate(q):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    n = max(len(a), len(prod))
    out = [(a[i] if i < len(a) else 0) - (prod[i] if i < len(prod) else 0) for i in range(n)]
    return _trim(out)


def _ext_gcd_inverse(a: list[Fraction], m: list[Fraction]) -> list[Fraction]:
    # find s with s*a = 1 mod m
    r0, r1 = list(m), list(a)
    s0, s1 = [], [Fraction(1)]
    while r1 and len(r1) > 1:
        q, r = _poly_divmod_q(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub_mul(s0, q, s1)
    if not r1:
        raise ZeroDivisionError("element is not invertible (not coprime to Phi_L)")
    c = r1[0]
    return [x / c for x in s1]


# --------------------------------------------------------------------------
# module-level operations

def power_of_omega(e: int, L: int) -> CyclotomicNumber:
    """``w^(e mod L)`` reduced modulo ``Phi_L``."""
    row = omega_power_table(L)[e % L]
    return CyclotomicNumber(L, _raw=_normalize(row, 1))


def omega(L: int) -> CyclotomicNumber:
    return power_of_omega(1, L)


def cyc_add(a: CyclotomicNumber, b: CyclotomicNumber) -> CyclotomicNumber:
    return a + b


def cyc_mul(a: CyclotomicNumber, b: CyclotomicNumber) -> CyclotomicNumber:
    return a * b


def cyc_neg(a: CyclotomicNumber) -> CyclotomicNumber:
    return -a


def cyc_inverse(a: CyclotomicNumber) -> CyclotomicNumber:
    return a.inverse()


class SingularMatrixError(ArithmeticError):
    def __init__(self, column: int):
        super().__init__(f"matrix is singular: no nonzero pivot in column {column}")
        self.column = column


def solve_linear_system(A: Sequence[Sequence[CyclotomicNumber]],
                        b: Sequence[CyclotomicNumber]) -> list[CyclotomicNumber]:
    """Solve ``A x = b`` over ``Q(w)`` by Gaussian elimination.

    Pivots are chosen as the first nonzero entry of each column; the pivot is
    inverted exactly, so no fraction-free tricks are needed.
    """
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("A must be square and match the length of b")
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not M[r][col].is_zero()), None)
        if piv is None:
            raise SingularMatrixError(col)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inverse()
        prow = [x * inv if j > col else x for j, x in enumerate(M[col])]
        prow[col] = CyclotomicNumber.one(prow[col].order)
        M[col] = prow
        for r in range(n):
            if r == col:
                continue
            f = M[r][col]
            if f.is_zero():
                continue
            row = M[r]
            for j in range(col + 1, n + 1):
                if not prow[j].is_zero():
                    row[j] = row[j] - f * prow[j]
            row[col] = CyclotomicNumber.zero(f.order)
    return [M[i][n] for i in range(n)]
