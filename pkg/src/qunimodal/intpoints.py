"""Integer points of the failing set of a query, from its open CAD.

Failing cells are turned into integer data in three ways:

* cells whose base interval is bounded: every integer base value in the
  closure is fixed and the lower-dimensional slice is solved recursively;
* in one variable an unbounded failing interval is itself a family;
* in two variables a failing strip above the last base root whose walls are
  parallel affine lines is split into residue lines ``x = P j + r``, on each of
  which the goal is a univariate polynomial in ``j``; beyond its last root the
  sign is constant, which yields either finitely many points or a family.

Anything else becomes an explicit unresolved record.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Sequence

from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd
from sympy.polys.factortools import dmp_factor_list

from .cad import (AffineEmbedding, QueryFormula, _from_dmp, _to_dmp, decide, implicit_equality,
                  is_constant, linear_poly, open_cad, poly_eval, substitute_affine, total_degree,
                  _interior_feasible)
from .linear import Constraint, LinearForm, Region
from .realroots import RealRoot, isolate_real_roots, sign_at, strip


@dataclass(frozen=True)
class IntFamily:
    """Integer points ``base + j * step`` for ``j >= 0``, in query coordinates."""

    base: tuple[int, ...]
    step: tuple[int, ...]

    def member(self, j: int) -> tuple[int, ...]:
        return tuple(b + j * s for b, s in zip(self.base, self.step))


@dataclass
class IntegerFailures:
    points: set = field(default_factory=set)
    families: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)

    def extend(self, other: "IntegerFailures", embed=None) -> None:
        f = embed or (lambda p: p)
        self.points |= {f(p) for p in other.points}
        for fam in other.families:
            b = f(fam.base)
            s = tuple(x - y for x, y in zip(f(tuple(bb + ss for bb, ss in zip(fam.base, fam.step))), b))
            self.families.append(IntFamily(b, s))
        self.unresolved.extend(other.unresolved)

    @property
    def empty(self) -> bool:
        return not (self.points or self.families or self.unresolved)


# ---------------------------------------------------------------------------
# integer reparametrisation along an equality

def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def lattice_parametrization(a: Sequence[int], c: int):
    """Integer solutions of ``a . x + c = 0`` as ``x = x0 + N y`` (``y`` in Z^(n-1)).

    Returns ``(rows, keep)`` where ``rows[i] = (coeffs over y, const)``, or
    ``None`` if there is no integer solution.  When some ``|a_i| = 1`` that
    variable is solved for and the others are kept as they are.
    """
    n = len(a)
    units = [i for i in range(n) if abs(a[i]) == 1]
    if units:
        i = units[0]
        keep = [j for j in range(n) if j != i]
        rows = []
        for j in range(n):
            if j == i:
                rows.append((tuple(-a[t] * a[i] for t in keep), -c * a[i]))
            else:
                rows.append((tuple(1 if t == j else 0 for t in keep), 0))
        return rows, keep
    # unimodular column operations: a U = (g, 0, ..., 0)
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v = list(a)
    first = next(i for i in range(n) if v[i])
    if first:
        for row in U:
            row[0], row[first] = row[first], row[0]
        v[0], v[first] = v[first], v[0]
    for i in range(1, n):
        if v[i] == 0:
            continue
        g, s, t = _ext_gcd(v[0], v[i])
        p, q = v[0] // g, v[i] // g
        for row in U:
            c0, ci = row[0], row[i]
            row[0], row[i] = s * c0 + t * ci, -q * c0 + p * ci
        v[0], v[i] = g, 0
    g = v[0]
    if g < 0:
        g = -g
        for row in U:
            row[0] = -row[0]
    if c % g:
        return None
    y0 = -c // g
    rows = [(tuple(U[i][j] for j in range(1, n)), U[i][0] * y0) for i in range(n)]
    return rows, None


def _reduce_integer(q: QueryFormula, eq: Constraint):
    """Integer-preserving elimination of one variable; ``None`` if no lattice points."""
    res = lattice_parametrization(eq.form.coeffs, eq.form.const)
    if res is None:
        return None
    rows, keep = res
    n = q.nvars
    if keep is not None:
        names = tuple(q.variables[j] for j in keep)
    else:
        names = tuple(f"{q.variables[-1]}_{j}" for j in range(n - 1))
    m = n - 1
    images = [LinearForm(tuple(co), const) for co, const in rows]
    region = q.region.substitute(names, images)
    goal = substitute_affine(q.goal, rows, m)
    extra = tuple((substitute_affine(p, rows, m), s) for p, s in q.extra)
    emb = AffineEmbedding([(tuple(co), const) for co, const in rows])
    return QueryFormula(names, region, goal, extra), emb


def _fix_base(q: QueryFormula, value: int) -> QueryFormula:
    """Slice with the base (last) variable fixed to an integer."""
    n = q.nvars
    names = q.variables[:-1]
    images = [LinearForm(tuple(1 if j == i else 0 for j in range(n - 1)), 0) for i in range(n - 1)]
    images.append(LinearForm((0,) * (n - 1), value))
    region = q.region.substitute(names, images)
    rows = [(im.coeffs, im.const) for im in images]
    goal = substitute_affine(q.goal, rows, n - 1)
    extra = tuple((substitute_affine(p, rows, n - 1), s) for p, s in q.extra)
    return QueryFormula(names, region, goal, extra)


def _fails(q: QueryFormula, point) -> bool:
    return q.holds_at(point) and poly_eval(q.goal, point) < 0


# ---------------------------------------------------------------------------
# main entry

def integer_failures(q: QueryFormula, max_slices: int = 100000) -> IntegerFailures:
    """All integer points of the region where ``goal < 0``: points, families, unresolved."""
    out = IntegerFailures()
    region = q.region.tightened()
    q = QueryFormula(q.variables, region, q.goal, q.extra)
    if not region.is_feasible():
        return out
    if q.nvars == 0:
        if _fails(q, ()):
            out.points.add(())
        return out
    if not _interior_feasible(region):
        eq = implicit_equality(region)
        red = _reduce_integer(q, eq)
        if red is None:
            return out
        sub, emb = red
        inner = integer_failures(sub, max_slices)
        out.extend(inner, lambda p: tuple(int(x) for x in emb.apply(p)))
        return out
    cells, _ = open_cad(q)
    if not cells:
        return out
    n = q.nvars
    slices: set[int] = set()
    top_cells = []
    for cell in cells:
        lo, hi = cell.levels[0]
        if lo is None and hi is None:
            if n == 1:
                out.unresolved.append(f"whole line fails: {cell.format()}")
            else:
                out.unresolved.append(f"cell unbounded in both directions of the base: {cell.format()}")
            continue
        if lo is None:
            if n == 1:
                b = hi.root.ceil() - 1
                if hi.root.compare(b + 1) == 0:
                    slices.add(b + 1)
                out.families.append(IntFamily((b,), (-1,)))
            else:
                out.unresolved.append(f"cell unbounded below in the base: {cell.format()}")
            continue
        a = lo.root.floor()
        if lo.root.compare(a) == 0:
            slices.add(a)
        if hi is None:
            if n == 1:
                out.families.append(IntFamily((a + 1,), (1,)))
            else:
                top_cells.append(cell)
            continue
        b = hi.root.floor()
        if b - a > max_slices:
            out.unresolved.append(f"too many base values ({b - a}) in {cell.format()}")
            continue
        slices.update(range(a + 1, b + 1))
    for v in sorted(slices):
        if n == 1:
            if _fails(q, (v,)):
                out.points.add((v,))
        else:
            sub = integer_failures(_fix_base(q, v), max_slices)
            out.extend(sub, lambda p, v=v: p + (v,))
    if top_cells:
        if n == 2:
            _strip_families(q, top_cells, out)
        else:
            for cell in top_cells:
                out.unresolved.append(f"cell unbounded above in the base: {cell.format()}")
    _absorb(out)
    return out


# ---------------------------------------------------------------------------
# two-variable strips above the last base root

def _affine_wall(bound, x0: Fraction):
    """``(s, t)`` with wall ``y = s x + t`` if one source factor is affine, else ``None``.

    A factor in ``y`` alone gives a horizontal wall ``y = t`` whose height may be
    irrational; ``t`` is then the wall's ``RealRoot`` and ``s = 0``.
    """
    cands, level = [], []
    for p in bound.sources:
        facs = [(p, 1)] if total_degree(p) == 1 else dmp_factor_list(_to_dmp(p, 2), 1, ZZ)[1]
        for f, _ in facs:
            fd = p if f is p else _from_dmp(f, 2)
            if total_degree(fd) == 1:
                cands.append(fd)
            elif all(mono[1] == 0 for mono in fd):
                level.append(fd)
    for p in cands:
        a = p.get((1, 0), 0)
        if not a:
            continue
        s = Fraction(-p.get((0, 1), 0), a)
        t = Fraction(-p.get((0, 0), 0), a)
        if bound.root.compare(s * x0 + t) == 0:
            return s, t
    root = bound.root
    for p in level:
        u = [p.get((e, 0), 0) for e in range(max(m[0] for m in p), -1, -1)]
        if root.exact is not None:
            hit = sign_at(u, root.exact) == 0
        else:
            g = strip([int(c) for c in dup_gcd([ZZ(c) for c in u], [ZZ(c) for c in root.poly], ZZ)])
            hit = len(g) > 1 and sign_at(g, root.lo) * sign_at(g, root.hi) < 0
        if hit:
            return Fraction(0), root
    return None


def _offset(s: Fraction, r: int, t):
    return t if isinstance(t, RealRoot) else s * r + t


def _univariate_in_j(p, P: int, r: int, A: int, c: int) -> list[int]:
    # p(y, x) with y = A j + c, x = P j + r, as integers, highest degree first
    rows = [((A,), c), ((P,), r)]
    d = substitute_affine(p, rows, 1) if p else {}
    deg = max((m[0] for m in d), default=-1)
    return [d.get((e,), 0) for e in range(deg, -1, -1)]


def _strip_families(q: QueryFormula, cells, out: IntegerFailures) -> None:
    seen_lines = set()
    for cell in cells:
        blo = cell.levels[0][0].root
        xmin = blo.floor() + 1
        x0 = cell.sample[1]
        flo, fhi = cell.levels[1]
        if flo is None or fhi is None:
            out.unresolved.append(f"strip unbounded in the fiber: {cell.format()}")
            continue
        w1, w2 = _affine_wall(flo, x0), _affine_wall(fhi, x0)
        if w1 is None or w2 is None:
            out.unresolved.append(f"non-affine strip boundary: {cell.format()}")
            continue
        (s1, t1), (s2, t2) = w1, w2
        if s1 != s2:
            out.unresolved.append(f"widening wedge between slopes {s1} and {s2}: {cell.format()}")
            continue
        P = s1.denominator
        A = int(s1 * P)
        for r in range(P):
            o1, o2 = _offset(s1, r, t1), _offset(s1, r, t2)
            c_lo = o1.ceil() if isinstance(o1, RealRoot) else ceil(o1)
            c_hi = o2.floor() if isinstance(o2, RealRoot) else floor(o2)
            for c in range(c_lo, c_hi + 1):
                key = (P, r, A, c)
                if key in seen_lines:
                    continue
                seen_lines.add(key)
                _line(q, P, r, A, c, xmin, out)


def _line(q: QueryFormula, P: int, r: int, A: int, c: int, xmin: int, out: IntegerFailures) -> None:
    j0 = -((r - xmin) // P)  # smallest j with P j + r >= xmin
    polys = [q.goal] + [linear_poly(cn.form) for cn in q.region.constraints] + [p for p, _ in q.extra]
    last = j0
    for p in polys:
        u = _univariate_in_j(p, P, r, A, c)
        if len(u) > 1:
            rts = isolate_real_roots(u)
            if rts:
                last = max(last, rts[-1].floor() + 1)
    for j in range(j0, last):
        pt = (A * j + c, P * j + r)
        if _fails(q, pt):
            out.points.add(pt)
    pt = (A * last + c, P * last + r)
    if _fails(q, pt):
        out.families.append(IntFamily(pt, (A, P)))


def _absorb(out: IntegerFailures) -> None:
    """Extend families downward over listed points and drop points they cover."""
    fams = []
    for fam in out.families:
        base = fam.base
        while True:
            prev = tuple(b - s for b, s in zip(base, fam.step))
            if prev in out.points:
                base = prev
            else:
                break
        fams.append(IntFamily(base, fam.step))
    uniq = []
    for f in fams:
        if f not in uniq:
            uniq.append(f)
    out.families = uniq
    covered = set()
    for f in uniq:
        for p in out.points:
            if _on_family(p, f):
                covered.add(p)
    out.points -= covered


def _on_family(p, f: IntFamily) -> bool:
    j = None
    for x, b, s in zip(p, f.base, f.step):
        if s == 0:
            if x != b:
                return False
            continue
        if (x - b) % s:
            return False
        jj = (x - b) // s
        if j is None:
            j = jj
        elif jj != j:
            return False
    return j is None or j >= 0
