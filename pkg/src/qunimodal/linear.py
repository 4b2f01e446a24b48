"""Integer-linear forms, conjunctive regions and exact rational feasibility.

A :class:`Region` is a conjunction of constraints ``form >= 0`` (or ``> 0``)
over a fixed tuple of named variables.  Feasibility over the rationals is
decided by Fourier-Motzkin elimination, which is exact and more than fast
enough for the two or three variables used here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor, gcd
from typing import Iterable, Iterator, Sequence


def _gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


@dataclass(frozen=True, order=True)
class LinearForm:
    """``sum coeffs[i] * x_i + const`` with integer data."""

    coeffs: tuple[int, ...]
    const: int = 0

    def __call__(self, point: Sequence) -> int | Fraction:
        return sum(c * x for c, x in zip(self.coeffs, point)) + self.const

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.const + other.const)

    def __neg__(self) -> "LinearForm":
        return LinearForm(tuple(-a for a in self.coeffs), -self.const)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def scale(self, c: int) -> "LinearForm":
        return LinearForm(tuple(c * a for a in self.coeffs), c * self.const)

    def shift(self, c: int) -> "LinearForm":
        return LinearForm(self.coeffs, self.const + c)

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def is_constant(self) -> bool:
        return not any(self.coeffs)

    @classmethod
    def variable(cls, index: int, nvars: int, coefficient: int = 1) -> "LinearForm":
        return cls(tuple(coefficient if i == index else 0 for i in range(nvars)), 0)

    @classmethod
    def constant(cls, value: int, nvars: int) -> "LinearForm":
        return cls((0,) * nvars, value)

    def format(self, names: Sequence[str]) -> str:
        parts = []
        for c, n in zip(self.coeffs, names):
            if c == 1:
                parts.append(f"+{n}")
            elif c == -1:
                parts.append(f"-{n}")
            elif c:
                parts.append(f"{c:+d}*{n}")
        if self.const or not parts:
            parts.append(f"{self.const:+d}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True, order=True)
class Constraint:
    """``form >= 0`` (``strict=False``) or ``form > 0`` (``strict=True``)."""

    form: LinearForm
    strict: bool = False

    def holds(self, point: Sequence) -> bool:
        v = self.form(point)
        return v > 0 if self.strict else v >= 0

    def normalized(self) -> "Constraint":
        g = _gcd_all(self.form.coeffs + (self.form.const,))
        if g > 1:
            f = LinearForm(tuple(c // g for c in self.form.coeffs), self.form.const // g)
            return Constraint(f, self.strict)
        return self

    def tightened(self) -> "Constraint":
        """Integer tightening: same integer points, non-strict, coefficient gcd 1."""
        f = self.form
        const = f.const - 1 if self.strict else f.const
        g = _gcd_all(f.coeffs)
        if g == 0:
            return Constraint(LinearForm(f.coeffs, 0 if const >= 0 else -1))
        return Constraint(LinearForm(tuple(c // g for c in f.coeffs), const // g))

    def negated(self) -> "Constraint":
        return Constraint(-self.form, not self.strict)

    def format(self, names: Sequence[str]) -> str:
        return f"{self.form.format(names)} {'>' if self.strict else '>='} 0"


def ge(form: LinearForm) -> Constraint:
    return Constraint(form, False)


def gt(form: LinearForm) -> Constraint:
    return Constraint(form, True)


class Region:
    """Conjunction of linear constraints over named variables."""

    __slots__ = ("names", "constraints")

    def __init__(self, names: Sequence[str], constraints: Iterable[Constraint] = ()):
        self.names = tuple(names)
        seen = set()
        out = []
        for c in constraints:
            if len(c.form.coeffs) != len(self.names):
                raise ValueError("constraint arity does not match region variables")
            c = c.normalized()
            if c.form.is_constant():
                if c.holds(()):
                    continue
            if c not in seen:
                seen.add(c)
                out.append(c)
        self.constraints = tuple(sorted(out))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __and__(self, other: "Region | Constraint | Iterable[Constraint]") -> "Region":
        if isinstance(other, Region):
            if other.names != self.names:
                raise ValueError("variable mismatch")
            extra = other.constraints
        elif isinstance(other, Constraint):
            extra = (other,)
        else:
            extra = tuple(other)
        return Region(self.names, self.constraints + tuple(extra))

    def contains(self, point: Sequence) -> bool:
        return all(c.holds(point) for c in self.constraints)

    def is_feasible(self) -> bool:
        return fm_feasible([(c.form.coeffs, c.form.const, c.strict) for c in self.constraints],
                           self.nvars)

    def implies(self, c: Constraint) -> bool:
        return not (self & c.negated()).is_feasible()

    def simplified(self) -> "Region":
        """Drop constraints implied by the others (same rational point set)."""
        cons = list(self.constraints)
        i = 0
        while i < len(cons):
            rest = Region(self.names, cons[:i] + cons[i + 1:])
            if rest.is_feasible() and rest.implies(cons[i]):
                cons.pop(i)
            else:
                i += 1
        return Region(self.names, cons)

    def tightened(self) -> "Region":
        return Region(self.names, (c.tightened() for c in self.constraints))

    def substitute(self, new_names: Sequence[str], images: Sequence[LinearForm]) -> "Region":
        """Rewrite with ``x_i = images[i](new variables)``."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        n = len(new_names)
        out = []
        for c in self.constraints:
            coeffs = [0] * n
            const = c.form.const
            for a, img in zip(c.form.coeffs, images):
                if a:
                    for j in range(n):
                        coeffs[j] += a * img.coeffs[j]
                    const += a * img.const
            out.append(Constraint(LinearForm(tuple(coeffs), const), c.strict))
        return Region(new_names, out)

    def bounds(self, index: int) -> tuple[Fraction | None, Fraction | None]:
        """Exact rational range of variable ``index`` over the region (None = unbounded)."""
        lo = _fm_extreme(self, index, -1)
        hi = _fm_extreme(self, index, +1)
        return lo, hi

    def integer_points(self, box: Sequence[tuple[int, int]]) -> Iterator[tuple[int, ...]]:
        """Integer points of the region inside a finite box (inclusive ranges)."""
        for pt in product(*(range(a, b + 1) for a, b in box)):
            if self.contains(pt):
                yield pt

    def format(self) -> str:
        if not self.constraints:
            return "true"
        return " and ".join(c.format(self.names) for c in self.constraints)

    def __repr__(self):
        return f"Region({self.format()})"

    def __eq__(self, other):
        return isinstance(other, Region) and self.names == other.names and \
            self.constraints == other.constraints

    def __hash__(self):
        return hash((self.names, self.constraints))

    # serialization
    def to_json(self) -> dict:
        return {"names": list(self.names),
                "constraints": [[list(c.form.coeffs), c.form.const, c.strict] for c in self.constraints]}

    @classmethod
    def from_json(cls, data: dict) -> "Region":
        return cls(data["names"], [Constraint(LinearForm(tuple(a), b), bool(s))
                                   for a, b, s in data["constraints"]])


def fm_feasible(rows: Sequence[tuple[Sequence, int | Fraction, bool]], nvars: int) -> bool:
    """Rational feasibility of ``{a.x + c >= 0 (> 0 if strict)}`` by Fourier-Motzkin."""
    cur = []
    for a, c, s in rows:
        cur.append((tuple(Fraction(x) for x in a), Fraction(c), bool(s)))
    for v in range(nvars):
        pos, neg, rest = [], [], []
        for row in cur:
            a = row[0][v]
            (pos if a > 0 else neg if a < 0 else rest).append(row)
        new = list(rest)
        for ap, cp, sp in pos:
            for an, cn, sn in neg:
                # ap[v] x + ... >= 0, an[v] x + ... >= 0, combine to cancel x
                f1, f2 = -an[v], ap[v]
                a = tuple(f1 * x + f2 * y for x, y in zip(ap, an))
                new.append((a, f1 * cp + f2 * cn, sp or sn))
        cur = _dedupe(new)
    for _, c, s in cur:
        if c < 0 or (s and c == 0):
            return False
    return True


def _dedupe(rows):
    out = {}
    for a, c, s in rows:
        if not any(a):
            if c < 0 or (s and c == 0):
                return [(a, c, s)]
            continue
        # scale to first nonzero = +-1
        piv = next(abs(x) for x in a if x)
        a = tuple(x / piv for x in a)
        c = c / piv
        key = a
        old = out.get(key)
        # keep the tighter of parallel constraints
        if old is None or c < old[0] or (c == old[0] and s and not old[1]):
            out[key] = (c, s)
    return [(a, c, s) for a, (c, s) in out.items()]


def _fm_extreme(region: Region, index: int, direction: int) -> Fraction | None:
    # eliminate every variable except `index`, then read off its bound
    n = region.nvars
    order = [v for v in range(n) if v != index]
    rows = [(tuple(Fraction(x) for x in c.form.coeffs), Fraction(c.form.const), c.strict)
            for c in region.constraints]
    for v in order:
        pos, neg, rest = [], [], []
        for row in rows:
            a = row[0][v]
            (pos if a > 0 else neg if a < 0 else rest).append(row)
        new = list(rest)
        for ap, cp, sp in pos:
            for an, cn, sn in neg:
                f1, f2 = -an[v], ap[v]
                a = tuple(f1 * x + f2 * y for x, y in zip(ap, an))
                new.append((a, f1 * cp + f2 * cn, sp or sn))
        rows = _dedupe(new)
    best = None
    for a, c, s in rows:
        x = a[index]
        if x == 0:
            continue
        bound = -c / x
        if direction > 0 and x < 0:
            best = bound if best is None else min(best, bound)
        elif direction < 0 and x > 0:
            best = bound if best is None else max(best, bound)
    return best


def integer_range(lo: Fraction | None, hi: Fraction | None) -> tuple[int | None, int | None]:
    return (None if lo is None else ceil(lo)), (None if hi is None else floor(hi))
