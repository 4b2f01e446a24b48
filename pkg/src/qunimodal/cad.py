"""Open cylindrical algebraic decomposition for sign conditions in 1-3 variables.

A :class:`QueryFormula` asks whether ``goal >= 0`` holds at every real point of
a region given by linear (and optionally polynomial) inequalities.  Because
``{goal < 0}`` is open, it meets the region if and only if it meets a
full-dimensional CAD cell inside the region's interior, so only sectors are
lifted (an *open* CAD).  Regions without interior are first reparametrised
along their implicit equalities.

Polynomials are dicts ``{monomial: int}`` whose monomial tuples list variable
exponents innermost first: index 0 is the variable eliminated first (``k'``),
the last index is the base variable (``l'`` or ``b'``).  This matches sympy's
dense recursive layout, whose resultant, discriminant, gcd and square-free
routines are used for the projection algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd
from typing import Sequence

from sympy.polys.densebasic import dmp_from_dict, dmp_to_dict, dmp_degree, dmp_zero_p, dmp_ground_p
from sympy.polys.densetools import dmp_ground_primitive
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dmp_discriminant, dmp_gcd, dmp_primitive, dmp_resultant
from sympy.polys.densearith import dmp_quo
from sympy.polys.sqfreetools import dmp_sqf_part

from .linear import Constraint, LinearForm, Region
from .realroots import RealRoot, compare_roots, isolate_real_roots, primitive, sign_at, strip

Mono = tuple[int, ...]
PolyDict = dict  # dict[Mono, int]


class CadError(RuntimeError):
    """Raised when a decomposition step cannot be carried out soundly."""


# ---------------------------------------------------------------------------
# polynomial helpers

def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def normalize_poly(d: dict) -> PolyDict:
    """Integer primitive multiple of ``d`` by a *positive* factor (signs preserved)."""
    d = {m: Fraction(c) for m, c in d.items() if c}
    if not d:
        return {}
    den = 1
    for c in d.values():
        den = _lcm(den, c.denominator)
    ints = {m: int(c * den) for m, c in d.items()}
    g = 0
    for c in ints.values():
        g = gcd(g, c)
    return {m: c // g for m, c in ints.items()}


def poly_eval(d: PolyDict, point: Sequence) -> Fraction:
    acc = Fraction(0)
    for m, c in d.items():
        v = Fraction(c)
        for x, e in zip(point, m):
            if e:
                v *= Fraction(x) ** e
        acc += v
    return acc


def poly_degree(d: PolyDict, index: int) -> int:
    return max((m[index] for m in d), default=-1)


def total_degree(d: PolyDict) -> int:
    return max((sum(m) for m in d), default=-1)


def is_constant(d: PolyDict) -> bool:
    return all(not any(m) for m in d)


def poly_sign(d: PolyDict, point: Sequence) -> int:
    """Sign of ``d`` at a rational point, in integer arithmetic."""
    if not d:
        return 0
    n = len(point)
    pts = [Fraction(x) for x in point]
    degs = [max(m[i] for m in d) for i in range(n)]
    acc = 0
    for m, c in d.items():
        v = c
        for x, e, D in zip(pts, m, degs):
            if D:
                v *= x.numerator ** e * x.denominator ** (D - e)
        acc += v
    return (acc > 0) - (acc < 0)


def fiber_polynomial(d: PolyDict, values: Sequence[Fraction]) -> list[int]:
    """Univariate polynomial in variable 0 after fixing variables ``1..`` to ``values``.

    Returned as integers, highest degree first, up to a positive factor.
    """
    vals = [Fraction(x) for x in values]
    nv = len(vals)
    degs = [max((m[i + 1] for m in d), default=0) for i in range(nv)]
    coeffs: dict[int, int] = {}
    for m, c in d.items():
        v = c
        for x, e, D in zip(vals, m[1:], degs):
            if D:
                v *= x.numerator ** e * x.denominator ** (D - e)
        coeffs[m[0]] = coeffs.get(m[0], 0) + v
    deg = max((e for e, c in coeffs.items() if c), default=-1)
    if deg < 0:
        return []
    return [coeffs.get(e, 0) for e in range(deg, -1, -1)]


def substitute_affine(d: PolyDict, images: Sequence[tuple[Sequence, object]], nnew: int) -> PolyDict:
    """Replace variable ``i`` by ``sum images[i][0][j] * y_j + images[i][1]`` (rationals).

    The result is normalized by a positive factor, so signs are preserved.
    """
    # powers of each image as dicts over the new variables
    cache: dict[tuple[int, int], dict] = {}

    def img_pow(i: int, e: int) -> dict:
        key = (i, e)
        if key in cache:
            return cache[key]
        if e == 0:
            res = {(0,) * nnew: Fraction(1)}
        else:
            prev = img_pow(i, e - 1)
            coeffs, const = images[i]
            res = {}
            for m, c in prev.items():
                if const:
                    res[m] = res.get(m, 0) + c * Fraction(const)
                for j, a in enumerate(coeffs):
                    if a:
                        mm = m[:j] + (m[j] + 1,) + m[j + 1:]
                        res[mm] = res.get(mm, 0) + c * Fraction(a)
        cache[key] = res
        return res

    out: dict = {}
    for m, c in d.items():
        term = {(0,) * nnew: Fraction(c)}
        for i, e in enumerate(m):
            if e:
                p = img_pow(i, e)
                new = {}
                for m1, c1 in term.items():
                    for m2, c2 in p.items():
                        mm = tuple(a + b for a, b in zip(m1, m2))
                        new[mm] = new.get(mm, 0) + c1 * c2
                term = new
        for mm, cc in term.items():
            out[mm] = out.get(mm, 0) + cc
    return normalize_poly(out)


def linear_poly(form: LinearForm) -> PolyDict:
    n = len(form.coeffs)
    d = {}
    for i, a in enumerate(form.coeffs):
        if a:
            d[tuple(1 if j == i else 0 for j in range(n))] = a
    if form.const:
        d[(0,) * n] = form.const
    return d


def _to_dmp(d: PolyDict, n: int):
    return dmp_from_dict({m: ZZ(c) for m, c in d.items()}, n - 1, ZZ)


def _from_dmp(f, n: int) -> PolyDict:
    if n == 0:
        return {(): int(f)} if f else {}
    return {tuple(int(e) for e in m): int(c) for m, c in dmp_to_dict(f, n - 1, ZZ).items() if c}


def _canonical(d: PolyDict) -> PolyDict:
    """Primitive with positive leading coefficient (leading = largest monomial)."""
    d = normalize_poly(d)
    if d:
        lead = d[max(d)]
        if lead < 0:
            d = {m: -c for m, c in d.items()}
    return d


def _key(d: PolyDict):
    return tuple(sorted(d.items()))


# ---------------------------------------------------------------------------
# projection

def _split_common(f: PolyDict, g: PolyDict, n: int) -> list[PolyDict]:
    """Replace two polynomials sharing a factor by their gcd and cofactors."""
    ff, gg = _to_dmp(f, n), _to_dmp(g, n)
    h = dmp_gcd(ff, gg, n - 1, ZZ)
    parts = [_from_dmp(h, n), _from_dmp(dmp_quo(ff, h, n - 1, ZZ), n), _from_dmp(dmp_quo(gg, h, n - 1, ZZ), n)]
    return [_canonical(p) for p in parts if p and not is_constant(p)]


def _resultant(f: PolyDict, g: PolyDict, n: int) -> PolyDict:
    """``res_0(f, g)`` up to a nonzero constant, as a polynomial in variables ``1..``."""
    for a, b in ((f, g), (g, f)):
        if total_degree(a) == 1 and poly_degree(a, 0) == 1:
            # a = c y + rest: substitute y = -rest / c into b
            c = a[(1,) + (0,) * (n - 1)]
            rows = [(tuple(Fraction(-a.get(tuple(1 if t == j else 0 for t in range(n)), 0), c)
                           for j in range(1, n)), Fraction(-a.get((0,) * n, 0), c))]
            rows += [(tuple(1 if t == j else 0 for t in range(1, n)), 0) for j in range(1, n)]
            return substitute_affine(b, rows, n - 1)
    return _from_dmp(dmp_resultant(_to_dmp(f, n), _to_dmp(g, n), n - 1, ZZ), n - 1)


def project(polys: Sequence[PolyDict], n: int, operator: str = "lazard") -> list[PolyDict]:
    """Projection set eliminating variable 0 from polynomials in ``n`` variables.

    ``operator="lazard"`` uses leading and trailing coefficients, discriminants
    and pairwise resultants (plus contents), which makes every input
    polynomial delineable over each open cell where the output is sign
    invariant.  ``operator="collins"`` also adds every coefficient.
    Polynomials sharing a factor are split by gcd first so that no resultant
    vanishes identically.
    """
    if n < 1:
        raise ValueError("nothing to project")
    u = n - 1
    out: list[PolyDict] = []
    F: dict = {}
    for p in polys:
        if not p or is_constant(p):
            continue
        if poly_degree(p, 0) <= 0:
            out.append({m[1:]: c for m, c in p.items()})
            continue
        if total_degree(p) == 1:
            prim = _canonical(p)
        else:
            cont, prim = dmp_primitive(_to_dmp(p, n), u, ZZ)
            if n > 1:
                cd = _from_dmp(cont, n - 1)
                if not is_constant(cd):
                    out.append(cd)
            prim = _canonical(_from_dmp(dmp_sqf_part(prim, u, ZZ), n))
        F[_key(prim)] = prim
    basis = [F[k] for k in sorted(F)]
    while True:
        resultants = []
        split = None
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                r = _resultant(basis[i], basis[j], n)
                if not r:
                    split = (i, j)
                    break
                resultants.append(r)
            if split:
                break
        if split is None:
            break
        i, j = split
        parts = _split_common(basis[i], basis[j], n)
        rest = [b for t, b in enumerate(basis) if t not in (i, j)]
        merged = {_key(b): b for b in rest + parts}
        basis = [merged[k] for k in sorted(merged)]
    for f in basis:
        if poly_degree(f, 0) <= 0:
            out.append({m[1:]: c for m, c in f.items()})
            continue
        fd = _to_dmp(f, n)
        deg = dmp_degree(fd, u)
        coeffs = list(fd)
        lc = coeffs[0]
        tc = next(c for c in reversed(coeffs) if not dmp_zero_p(c, u - 1))
        for c in ([lc, tc] if operator == "lazard" else coeffs):
            cd = _from_dmp(c, n - 1)
            if cd and not is_constant(cd):
                out.append(cd)
        if deg >= 2:
            disc = _from_dmp(dmp_discriminant(fd, u, ZZ), n - 1)
            if disc and not is_constant(disc):
                out.append(disc)
    out.extend(resultants)
    res = {}
    for p in out:
        c = _canonical(p)
        if c and not is_constant(c):
            res[_key(c)] = c
    return [res[k] for k in sorted(res)]


def projection_roots(polys: Sequence[PolyDict], n: int) -> list[RealRoot]:
    """Real roots of the full projection down to the base variable."""
    level = [p for p in polys]
    for t in range(n, 1, -1):
        level = project(level, t)
    uni = [[p.get((e,), 0) for e in range(poly_degree(p, 0), -1, -1)] for p in level]
    return _merged_roots(uni)[0]


# ---------------------------------------------------------------------------
# univariate root merging and sector samples

def _uni_basis(polys: Sequence[list[int]]) -> list[list[int]]:
    from sympy.polys.euclidtools import dup_gcd
    from sympy.polys.densearith import dup_quo
    from .realroots import sqf_part
    basis: list[list[int]] = []
    pending = [sqf_part(p) for p in polys if len(strip(p)) > 1]
    while pending:
        q = pending.pop()
        if len(q) <= 1:
            continue
        for i, b in enumerate(basis):
            g = strip([int(c) for c in dup_gcd([ZZ(c) for c in q], [ZZ(c) for c in b], ZZ)])
            if len(g) <= 1:
                continue
            g = primitive(g)
            if g == primitive(q) and g == b:
                q = []
                break
            basis.pop(i)
            for part in (g, dup_quo([ZZ(c) for c in b], [ZZ(c) for c in g], ZZ),
                         dup_quo([ZZ(c) for c in q], [ZZ(c) for c in g], ZZ)):
                part = primitive([int(c) for c in part])
                if len(part) > 1:
                    pending.append(part)
            q = []
            break
        if len(q) > 1:
            basis.append(primitive(q))
    return basis


def _merged_roots(polys: Sequence[list[int]]) -> tuple[list[RealRoot], list[list[int]]]:
    from .realroots import sqf_part
    rats = set()
    nonlin = []
    for p in polys:
        p = strip(p)
        if len(p) == 2:
            rats.add(Fraction(-p[1], p[0]))
        elif len(p) > 2:
            nonlin.append(p)
    basis = _uni_basis(nonlin) if len(nonlin) > 1 else [sqf_part(p) for p in nonlin]
    roots: list[RealRoot] = []
    for b in basis:
        roots.extend(isolate_real_roots(b, squarefree=True))
    for r in sorted(rats):
        if not any(rt.compare(r) == 0 for rt in roots):
            roots.append(RealRoot.rational(r))
    roots.sort(key=lambda r: _lower(r))
    # insertion sort with exact comparisons (lists are short)
    out: list[RealRoot] = []
    for r in roots:
        i = len(out)
        while i > 0 and compare_roots(out[i - 1], r) > 0:
            i -= 1
        out.insert(i, r)
    _separate(out)
    return out, basis


def _upper(r: RealRoot) -> Fraction:
    return r.exact if r.exact is not None else r.hi


def _lower(r: RealRoot) -> Fraction:
    return r.exact if r.exact is not None else r.lo


def _separate(roots: list[RealRoot]) -> None:
    # refine until consecutive isolating data are ordered: upper(a) <= lower(b)
    for a, b in zip(roots, roots[1:]):
        while _upper(a) > _lower(b) or (_upper(a) == _lower(b) and (a.exact is not None or b.exact is not None)):
            a.refine()
            b.refine()


def _simplest_closed(lo: Fraction, hi: Fraction) -> Fraction:
    # smallest-denominator rational in [lo, hi] via continued fractions
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_closed(-hi, -lo)
    fl = floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    return fl + 1 / _simplest_closed(1 / (hi - fl), 1 / (lo - fl))


def simplest_between(lo: Fraction | None, hi: Fraction | None, lo_open: bool = True, hi_open: bool = True) -> Fraction:
    """A rational of small height in the given interval (``None`` = unbounded).

    Integers are preferred (the one closest to zero); otherwise the simplest
    rational of the middle half of the interval is used.
    """
    if lo is not None and hi is not None:
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi or (lo == hi and (lo_open or hi_open)):
            raise ValueError("empty interval")
        if lo == hi:
            return lo
    # integer range [a, b] inside the interval
    if lo is None:
        a = None
    else:
        a = floor(lo) + 1 if (lo_open or lo.denominator != 1) else int(lo)
    if hi is None:
        b = None
    else:
        b = -floor(-hi) - 1 if (hi_open or hi.denominator != 1) else int(hi)
    if (a is None or b is None or a <= b):
        if (a is None or a <= 0) and (b is None or b >= 0):
            return Fraction(0)
        return Fraction(a if a is not None and a > 0 else b)
    w = (hi - lo) / 4
    return _simplest_closed(lo + w if lo_open else lo, hi - w if hi_open else hi)


def sector_samples(roots: Sequence[RealRoot]) -> list[Fraction]:
    """One rational sample in each open sector cut out by the sorted roots."""
    if not roots:
        return [Fraction(0)]
    out = [simplest_between(None, _lower(roots[0]), True, roots[0].exact is not None)]
    for a, b in zip(roots, roots[1:]):
        out.append(simplest_between(_upper(a), _lower(b), a.exact is not None, b.exact is not None))
    out.append(simplest_between(_upper(roots[-1]), None, roots[-1].exact is not None, True))
    return out


# ---------------------------------------------------------------------------
# queries and cells

@dataclass
class QueryFormula:
    """``assumptions => goal >= 0`` over real variables listed innermost first.

    ``region`` holds the linear assumptions; ``extra`` holds polynomial ones as
    ``(poly, strict)`` with meaning ``poly >= 0`` (``> 0`` if strict).
    """

    variables: tuple[str, ...]
    region: Region
    goal: PolyDict
    extra: tuple = ()

    @classmethod
    def build(cls, region: Region, goal, target=0, extra=()) -> "QueryFormula":
        """Query ``goal >= target``; ``goal`` is a dict or a ``QPoly``."""
        n = region.nvars
        g = goal.as_dict() if hasattr(goal, "as_dict") else dict(goal)
        g = {m: Fraction(c) for m, c in g.items()}
        z = (0,) * n
        if target:
            g[z] = g.get(z, Fraction(0)) - Fraction(target)
        return cls(region.names, region, normalize_poly(g), tuple(extra))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def goal_value(self, point) -> Fraction:
        return poly_eval(self.goal, point)

    def holds_at(self, point) -> bool:
        return self.region.contains(point) and all(
            (poly_eval(p, point) > 0 if s else poly_eval(p, point) >= 0) for p, s in self.extra)

    def format(self) -> str:
        from .residues import QPoly
        g = QPoly.from_dict(self.variables, self.goal).format()
        return f"{self.region.format()} ==> {g} >= 0"


class CellBound:
    """A cell wall: a real root of one level's polynomials at the cell's base sample.

    ``sources`` (computed on demand) lists the level polynomials vanishing there.
    """

    __slots__ = ("root", "_polys", "_unis", "_sources")

    def __init__(self, root: RealRoot, polys=(), unis=()):
        self.root = root
        self._polys = polys
        self._unis = unis
        self._sources = None

    @property
    def sources(self) -> list:
        if self._sources is None:
            self._sources = _sources(self._polys, self._unis, self.root)
        return self._sources

    def format(self) -> str:
        return repr(self.root)

    def __repr__(self):
        return f"CellBound({self.root!r})"


@dataclass
class CadCell:
    """A full-dimensional (sector) cell.

    ``levels`` lists ``(lower, upper)`` walls from the base variable inward;
    each wall is a :class:`CellBound` or ``None`` for an infinite side.  The
    sample is rational, listed in the query's variable order (innermost
    first).  ``embedding`` maps the cell's coordinates back to the query's
    variables when the region had to be reparametrised.
    """

    variables: tuple[str, ...]
    levels: list
    sample: tuple[Fraction, ...]
    fails: bool = True
    embedding: object = None

    def original_sample(self) -> tuple[Fraction, ...]:
        if self.embedding is None:
            return self.sample
        return self.embedding.apply(self.sample)

    def base_interval(self):
        return self.levels[0] if self.levels else (None, None)

    def format(self) -> str:
        parts = []
        names = list(reversed(self.variables))
        for name, (lo, hi) in zip(names, self.levels):
            a = "-oo" if lo is None else _fmt_root(lo.root)
            b = "+oo" if hi is None else _fmt_root(hi.root)
            parts.append(f"{a} < {name} < {b}")
        s = " and ".join(parts) if parts else "point"
        smp = ", ".join(f"{v}={x}" for v, x in zip(self.variables, self.sample))
        return f"[{s}] sample ({smp})"


def _fmt_root(r: RealRoot) -> str:
    if r.exact is not None:
        return str(r.exact)
    p = list(r.poly)
    if len(p) == 2:
        return str(Fraction(-p[1], p[0]))
    return f"root({p} in ({r.lo}, {r.hi}))"


@dataclass
class AffineEmbedding:
    """``x = A y + c`` with rational entries; ``A`` has one row per original variable."""

    rows: list  # list of (coeffs tuple, const)

    def apply(self, y: Sequence) -> tuple[Fraction, ...]:
        return tuple(sum((Fraction(a) * Fraction(v) for a, v in zip(co, y)), Fraction(0)) + Fraction(c)
                     for co, c in self.rows)

    def compose(self, inner: "AffineEmbedding") -> "AffineEmbedding":
        # self(inner(z))
        rows = []
        for co, c in self.rows:
            nco = [Fraction(0)] * len(inner.rows[0][0]) if inner.rows else []
            nc = Fraction(c)
            for a, (ico, ic) in zip(co, inner.rows):
                for j, x in enumerate(ico):
                    nco[j] += Fraction(a) * Fraction(x)
                nc += Fraction(a) * Fraction(ic)
            rows.append((tuple(nco), nc))
        return AffineEmbedding(rows)


@dataclass
class Proven:
    query: QueryFormula
    stats: dict = field(default_factory=dict)

    @property
    def proven(self) -> bool:
        return True


@dataclass
class FailingCells:
    query: QueryFormula
    cells: list
    stats: dict = field(default_factory=dict)

    @property
    def proven(self) -> bool:
        return False

    def __iter__(self):
        return iter(self.cells)

    def __len__(self):
        return len(self.cells)


# ---------------------------------------------------------------------------
# region geometry

def _interior_feasible(region: Region) -> bool:
    strict = Region(region.names, [Constraint(c.form, True) for c in region.constraints])
    return strict.is_feasible()


def implicit_equality(region: Region) -> Constraint | None:
    """A constraint that holds with equality on the whole (feasible) region, if any."""
    for c in region.constraints:
        if c.strict:
            continue
        if not (region & Constraint(c.form, True)).is_feasible():
            return c
    return None


def rational_reduction(q: QueryFormula, eq: Constraint) -> tuple[QueryFormula, AffineEmbedding]:
    """Eliminate one variable along the equality ``eq.form == 0``."""
    a = eq.form.coeffs
    n = len(a)
    cand = [i for i in range(n) if a[i]]
    i = min(cand, key=lambda j: (abs(a[j]) != 1, j))
    keep = [j for j in range(n) if j != i]
    rows = []
    for j in range(n):
        if j == i:
            co = tuple(Fraction(-a[t], a[i]) for t in keep)
            rows.append((co, Fraction(-eq.form.const, a[i])))
        else:
            rows.append((tuple(Fraction(1) if t == j else Fraction(0) for t in keep), Fraction(0)))
    emb = AffineEmbedding(rows)
    return _apply_embedding(q, emb, tuple(q.variables[j] for j in keep)), emb


def _apply_embedding(q: QueryFormula, emb: AffineEmbedding, names) -> QueryFormula:
    m = len(names)
    cons = []
    for c in q.region.constraints:
        co = [Fraction(0)] * m
        const = Fraction(c.form.const)
        for a, (rco, rc) in zip(c.form.coeffs, emb.rows):
            if a:
                for j in range(m):
                    co[j] += a * Fraction(rco[j])
                const += a * Fraction(rc)
        den = 1
        for x in co + [const]:
            den = _lcm(den, x.denominator)
        cons.append(Constraint(LinearForm(tuple(int(x * den) for x in co), int(const * den)), c.strict))
    region = Region(names, cons)
    goal = substitute_affine(q.goal, emb.rows, m)
    extra = tuple((substitute_affine(p, emb.rows, m), s) for p, s in q.extra)
    return QueryFormula(tuple(names), region, goal, extra)


# ---------------------------------------------------------------------------
# decision

def decide(q: QueryFormula, operator: str = "lazard") -> Proven | FailingCells:
    """Decide ``region => goal >= 0`` over the reals.

    Returns :class:`Proven` or the failing sector cells ordered by the base
    variable.  Regions without interior are reparametrised first.
    """
    emb = None
    cur = q
    while True:
        if not cur.region.is_feasible():
            return Proven(q, {"reason": "empty region"})
        if cur.nvars == 0 or _interior_feasible(cur.region):
            break
        eq = implicit_equality(cur.region)
        if eq is None:
            raise CadError("region without interior but no implicit equality found")
        cur, e = rational_reduction(cur, eq)
        emb = e if emb is None else emb.compose(e)
    cells, stats = open_cad(cur, operator)
    if emb is not None:
        for c in cells:
            c.embedding = emb
    if not cells:
        return Proven(q, stats)
    return FailingCells(q, cells, stats)


def _split_constraints(q: QueryFormula):
    # level t holds polynomials whose innermost variable is n - t
    return [(linear_poly(c.form), c.strict) for c in q.region.constraints] + list(q.extra)


def _innermost(p: PolyDict, n: int) -> int:
    """Index of the innermost variable that occurs in ``p`` (``n`` if constant)."""
    occ = [i for i in range(n) if any(m[i] for m in p)]
    return min(occ) if occ else n


def open_cad(q: QueryFormula, operator: str = "lazard"):
    """Failing sector cells of a query whose region has nonempty interior."""
    n = q.nvars
    stats = {"cells": 0, "projection": []}
    if n == 0:
        v = poly_eval(q.goal, ())
        ok = all((poly_eval(p, ()) > 0 if s else poly_eval(p, ()) >= 0) for p, s in _split_constraints(q))
        if ok and v < 0:
            return [CadCell(q.variables, [], (), True)], stats
        return [], stats
    assumptions = _split_constraints(q)
    goal = q.goal
    if is_constant(goal):
        if poly_eval(goal, (0,) * n) >= 0:
            return [], stats
    # level sets: levels[t] = polys in variables (n - t .. n - 1), as local dicts
    top = [goal] + [p for p, _ in assumptions]
    levels: list[list[PolyDict]] = [None] * (n + 1)
    # polynomials are kept at their own level, with local monomials
    by_level: list[list[PolyDict]] = [[] for _ in range(n + 1)]
    for p in top:
        j = _innermost(p, n)
        if j < n:
            by_level[n - j].append({m[j:]: c for m, c in p.items()})
    cur = by_level[n]
    levels[n] = cur
    for t in range(n, 1, -1):
        proj = project(levels[t], t, operator)
        merged = {_key(_canonical(p)): _canonical(p) for p in proj + by_level[t - 1]}
        levels[t - 1] = [merged[k] for k in sorted(merged)]
        stats["projection"].append(len(levels[t - 1]))
    if n == 1:
        levels[1] = [_canonical(p) for p in by_level[1]]
    # constraint checks per level: assumption polys whose innermost var is at that level
    checks: list[list[tuple[PolyDict, bool]]] = [[] for _ in range(n + 1)]
    for p, s in assumptions:
        j = _innermost(p, n)
        if j < n:
            checks[n - j].append(({m[j:]: c for m, c in p.items()}, s))
        elif not (poly_eval(p, (0,) * n) > 0 if s else poly_eval(p, (0,) * n) >= 0):
            return [], stats
    goal_local = goal
    cells: list[CadCell] = []

    def lift(t: int, values: list[Fraction], walls: list):
        # values: samples for variables n-1 down to n-t+1 (base first); lifting variable n - t
        polys = levels[t]
        unis = []
        for p in polys:
            u = fiber_polynomial(p, list(reversed(values)))
            if not u:
                if operator == "lazard":
                    raise _Nullified()
                raise CadError("polynomial vanishes identically on a sector")
            unis.append(u)
        roots, basis = _merged_roots(unis)
        samples = sector_samples(roots)
        for i, s in enumerate(samples):
            stats["cells"] += 1
            point = [s] + list(reversed(values))  # local order for level t
            # every assumption is a wall polynomial, so it has one sign on a sector
            if not all(poly_sign(p, point) > 0 for p, _ in checks[t]):
                continue
            lo = roots[i - 1] if i > 0 else None
            hi = roots[i] if i < len(roots) else None
            wall = (None if lo is None else CellBound(lo, polys, unis),
                    None if hi is None else CellBound(hi, polys, unis))
            if t == n:
                if poly_sign(goal_local, point) < 0:
                    cells.append(CadCell(q.variables, walls + [wall], tuple(point), True))
            else:
                lift(t + 1, values + [s], walls + [wall])

    try:
        lift(1, [], [])
    except _Nullified:
        if operator == "lazard":
            return open_cad(q, "collins")
        raise
    return cells, stats


class _Nullified(Exception):
    pass


def _sources(polys, unis, root: RealRoot) -> list:
    out = []
    for p, u in zip(polys, unis):
        if root.exact is not None:
            if sign_at(u, root.exact) == 0:
                out.append(p)
        else:
            from sympy.polys.euclidtools import dup_gcd
            g = strip([int(c) for c in dup_gcd([ZZ(c) for c in u], [ZZ(c) for c in root.poly], ZZ)])
            if len(g) > 1 and sign_at(g, root.lo) * sign_at(g, root.hi) < 0:
                out.append(p)
    return out
