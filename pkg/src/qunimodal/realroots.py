"""Exact real root isolation for univariate integer polynomials.

Polynomials are lists of integers, highest degree first (the same layout as
sympy's dense ``dup`` format, so the two can be mixed freely).  Isolation uses
the Descartes rule of signs with bisection on ``(0, 1)`` after an affine map,
and rational roots met at bisection points are deflated exactly.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy.polys.domains import ZZ
from sympy.polys.sqfreetools import dup_sqf_part



def strip(f: Sequence[int]) -> list[int]:
    i = 0
    while i < len(f) and f[i] == 0:
        i += 1
    return [int(x) for x in f[i:]]


def degree(f: Sequence[int]) -> int:
    return len(strip(f)) - 1


def primitive(f: Sequence[int]) -> list[int]:
    f = strip(f)
    if not f:
        return f
    g = 0
    for c in f:
        g = gcd(g, c)
    s = -1 if f[0] < 0 else 1
    return [s * (c // g) for c in f]


def sqf_part(f: Sequence[int]) -> list[int]:
    f = strip(f)
    if len(f) <= 2:
        return primitive(f)
    return primitive([int(c) for c in dup_sqf_part([ZZ(c) for c in f], ZZ)])


def evaluate(f: Sequence[int], x: Fraction | int) -> Fraction:
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    n = len(f) - 1
    acc = 0
    for i, c in enumerate(f):
        acc += c * p ** (n - i) * q ** i
    return Fraction(acc, q ** n) if n >= 0 else Fraction(0)


def sign_at(f: Sequence[int], x: Fraction | int) -> int:
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    n = len(f) - 1
    acc = 0
    for i, c in enumerate(f):
        acc += c * p ** (n - i) * q ** i
    return (acc > 0) - (acc < 0)


def _taylor_shift1(f: list[int]) -> list[int]:
    # f(x + 1), Horner-style synthetic shifts
    g = list(f)
    n = len(g)
    for i in range(n - 1):
        for j in range(1, n - i):
            g[j] += g[j - 1]
    return g


def _variations(f: Sequence[int]) -> int:
    v = 0
    last = 0
    for c in f:
        if c:
            if last and (c > 0) != (last > 0):
                v += 1
            last = c
    return v


def _descartes01(g: list[int]) -> int:
    # sign variations of (x+1)^n g(1/(x+1)): bound on the roots of g in (0, 1)
    return _variations(_taylor_shift1(list(reversed(g))))


def _compose_affine(f: Sequence[int], a: Fraction, w: Fraction) -> list[int]:
    """Integer multiple of ``f(a + w x)``, highest degree first."""
    n = len(f) - 1
    # Horner over rationals in low-first order
    res = [Fraction(0)]
    for c in f:
        # res = res * (a + w x) + c
        new = [Fraction(0)] * (len(res) + 1)
        for i, r in enumerate(res):
            new[i] += r * a
            new[i + 1] += r * w
        new[0] += c
        res = new
    res = res[: n + 1]
    den = 1
    for r in res:
        den = den * r.denominator // gcd(den, r.denominator)
    ints = [int(r * den) for r in res]
    return primitive(list(reversed(ints)))


class RealRoot:
    """A real root of a square-free integer polynomial.

    Either ``exact`` is a rational, or ``(lo, hi)`` is an open interval with
    non-root rational endpoints containing exactly this root.
    """

    __slots__ = ("poly", "lo", "hi", "exact")

    def __init__(self, poly: Sequence[int], lo: Fraction, hi: Fraction, exact: Fraction | None = None):
        self.poly = tuple(poly)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self.exact = None if exact is None else Fraction(exact)

    @classmethod
    def rational(cls, value) -> "RealRoot":
        v = Fraction(value)
        return cls((v.denominator, -v.numerator), v, v, v)

    @property
    def is_rational_known(self) -> bool:
        return self.exact is not None

    def refine(self) -> None:
        """Halve the isolating interval (or find the root exactly)."""
        if self.exact is not None:
            return
        m = (self.lo + self.hi) / 2
        s = sign_at(self.poly, m)
        if s == 0:
            self.exact = m
            self.lo = self.hi = m
            return
        if s == sign_at(self.poly, self.lo):
            self.lo = m
        else:
            self.hi = m

    def refine_to(self, width: Fraction) -> None:
        while self.exact is None and self.hi - self.lo > width:
            self.refine()

    def compare(self, q) -> int:
        """Sign of ``self - q`` for a rational ``q``."""
        q = Fraction(q)
        if self.exact is not None:
            return (self.exact > q) - (self.exact < q)
        while True:
            if q <= self.lo:
                return 1
            if q >= self.hi:
                return -1
            s = sign_at(self.poly, q)
            if s == 0:
                self.exact = q
                self.lo = self.hi = q
                return 0
            if s == sign_at(self.poly, self.lo):
                return 1
            return -1

    def floor(self) -> int:
        from math import floor
        while self.exact is None:
            a = floor(self.lo)
            if a + 1 >= self.hi:
                return a
            self.refine()
        return floor(self.exact)

    def ceil(self) -> int:
        from math import ceil
        while self.exact is None:
            b = ceil(self.hi)
            if b - 1 <= self.lo:
                return b
            self.refine()
        return ceil(self.exact)

    def approx(self) -> float:
        return float(self.exact) if self.exact is not None else float((self.lo + self.hi) / 2)

    def __lt__(self, other: "RealRoot") -> bool:
        return compare_roots(self, other) < 0

    def __repr__(self):
        if self.exact is not None:
            return f"RealRoot({self.exact})"
        return f"RealRoot(in ({self.lo}, {self.hi}) of {list(self.poly)})"


def compare_roots(a: RealRoot, b: RealRoot) -> int:
    if a.exact is not None:
        return -b.compare(a.exact)
    if b.exact is not None:
        return a.compare(b.exact)
    if a.poly == b.poly:
        # distinct roots of one polynomial have disjoint isolating intervals
        while not (a.hi <= b.lo or b.hi <= a.lo):
            if a.lo == b.lo and a.hi == b.hi:
                return 0
            a.refine()
            b.refine()
            if a.exact is not None or b.exact is not None:
                return compare_roots(a, b)
        return -1 if a.hi <= b.lo else 1
    for _ in range(200):
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        a.refine()
        b.refine()
        if a.exact is not None or b.exact is not None:
            return compare_roots(a, b)
    # overlapping for a long time: decide equality via a common factor
    from sympy.polys.euclidtools import dup_gcd
    g = strip([int(c) for c in dup_gcd([ZZ(c) for c in a.poly], [ZZ(c) for c in b.poly], ZZ)])
    if len(g) > 1:
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        if lo < hi and count_roots_open(g, lo, hi) == 1 and count_roots_open(a.poly, lo, hi) == 1 \
                and count_roots_open(b.poly, lo, hi) == 1:
            return 0
    while True:
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        a.refine()
        b.refine()


def _cauchy_bound_pow2(f: Sequence[int]) -> Fraction:
    lead = abs(f[0])
    m = max((abs(c) for c in f[1:]), default=0)
    # all roots satisfy |x| < 1 + m / lead
    b = Fraction(1) + Fraction(m, lead)
    p = Fraction(1)
    while p <= b:
        p *= 2
    return p


def _isolate_unit(g: list[int], a: Fraction, b: Fraction, out_int: list, out_exact: list) -> None:
    """Isolate roots of ``g`` (mapped from ``(a, b)`` to ``(0, 1)``) in the open interval."""
    stack = [(g, a, b)]
    while stack:
        g, a, b = stack.pop()
        v = _descartes01(g)
        if v == 0:
            continue
        if v == 1:
            out_int.append((a, b))
            continue
        n = len(g) - 1
        left = [c * 2 ** i for i, c in enumerate(g)]  # 2^n g(x/2), coefficient of x^(n-i) scaled by 2^i
        m = (a + b) / 2
        if sum(left) == 0:  # g(1/2) == 0
            out_exact.append(m)
        right = _taylor_shift1(left)
        stack.append((right, m, b))
        stack.append((left, a, m))


def _taylor_shift(f: list[int], a: int) -> list[int]:
    g = list(f)
    n = len(g)
    for i in range(n - 1):
        for j in range(1, n - i):
            g[j] += a * g[j - 1]
    return g


def _full_range(f: list[int], B: int) -> list[int]:
    # integer multiple of f(B (2x - 1)), mapping (-B, B) onto (0, 1)
    n = len(f) - 1
    p = [c * B ** (n - i) for i, c in enumerate(f)]
    q = _taylor_shift(p, -1)
    r = [c * 2 ** (n - i) for i, c in enumerate(q)]
    return primitive(r)


def _isolate_sqf(f: list[int], lo: Fraction, hi: Fraction) -> tuple[list[Fraction], list[tuple[Fraction, Fraction]]]:
    if len(f) <= 1:
        return [], []
    if lo == -hi and hi.denominator == 1:
        g = _full_range(f, int(hi))
    else:
        g = _compose_affine(f, lo, hi - lo)
    ints: list = []
    exact: list = []
    _isolate_unit(g, lo, hi, ints, exact)
    return exact, ints


def _deflate(f: list[int], r: Fraction) -> list[int]:
    # exact division by (q x - p)
    p, q = r.numerator, r.denominator
    out = []
    rem = 0
    acc = list(f)
    n = len(acc)
    quot = []
    cur = Fraction(0)
    for i in range(n - 1):
        coef = Fraction(acc[i]) + cur * p
        qi = coef / q
        quot.append(qi)
        cur = qi
    rem = Fraction(acc[-1]) + cur * p
    if rem != 0:
        raise ArithmeticError("deflation by a non-root")
    den = 1
    for c in quot:
        den = den * c.denominator // gcd(den, c.denominator)
    return primitive([int(c * den) for c in quot])


def isolate_real_roots(f: Sequence[int], lo: Fraction | None = None, hi: Fraction | None = None,
                       squarefree: bool = False) -> list[RealRoot]:
    """All real roots of ``f`` (in ``(lo, hi)`` if given), sorted, as :class:`RealRoot`.

    Rational roots met during bisection are reported exactly; the rest get
    isolating intervals whose endpoints are not roots of ``f``.
    """
    f = strip(f)
    if not f:
        raise ValueError("zero polynomial has no isolated roots")
    base = f if squarefree else sqf_part(f)
    if len(base) <= 1:
        return []
    if len(base) == 2:
        r = Fraction(-base[1], base[0])
        inside = (lo is None or r > lo) and (hi is None or r < hi)
        return [RealRoot(base, r, r, r)] if inside else []
    if lo is None or hi is None:
        B = _cauchy_bound_pow2(base)
        lo_, hi_ = (-B if lo is None else Fraction(lo)), (B if hi is None else Fraction(hi))
    else:
        lo_, hi_ = Fraction(lo), Fraction(hi)
    exact_all: list[Fraction] = []
    work = base
    while True:
        exact, ints = _isolate_sqf(work, lo_, hi_)
        if not exact:
            break
        for r in exact:
            work = _deflate(work, r)
        exact_all.extend(exact)
        if len(work) <= 1:
            ints = []
            break
    roots = [RealRoot(base, r, r, r) for r in exact_all]
    for a, b in ints:
        rr = RealRoot(work, a, b)
        # push endpoints off the deflated rational roots (and the range ends)
        while sign_at(work, rr.lo) == 0 or sign_at(work, rr.hi) == 0 or \
                any(rr.lo <= e <= rr.hi for e in exact_all):
            if rr.exact is not None:
                break
            m = (rr.lo + rr.hi) / 2
            s = sign_at(work, m)
            if s == 0:
                rr.exact = m
                rr.lo = rr.hi = m
                break
            # decide side by counting roots in (lo, m)
            if count_roots_open(work, rr.lo, m) == 1:
                rr.hi = m
            else:
                rr.lo = m
        roots.append(rr)
    roots.sort(key=_sort_key)
    _order_check(roots)
    return roots


def _sort_key(r: RealRoot):
    return r.exact if r.exact is not None else r.lo


def _order_check(roots: list[RealRoot]) -> None:
    # make neighbouring intervals disjoint so the sort above is a true order
    changed = True
    while changed:
        changed = False
        for i in range(len(roots) - 1):
            a, b = roots[i], roots[i + 1]
            if compare_roots(a, b) > 0:
                roots[i], roots[i + 1] = b, a
                changed = True


def count_roots_open(f: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of ``f`` in the open interval ``(lo, hi)``."""
    f = sqf_part(strip(f))
    if len(f) <= 1 or lo >= hi:
        return 0
    exact, ints = _isolate_sqf(f, Fraction(lo), Fraction(hi))
    return len(exact) + len(ints)


def sturm_count(f: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    """Independent count of distinct roots in ``(lo, hi]`` via a Sturm sequence (test oracle)."""
    from sympy import Poly, symbols
    x = symbols("x")
    p = Poly(list(strip(f)), x)
    return int(p.count_roots(lo, hi)) - (1 if p.eval(lo) == 0 else 0)
