"""Exponential-polynomial closed forms for coefficients of rational q-series.

``1/D(q)`` with ``D = prod (1 - q^e_i)`` has Taylor coefficients
``d_k = sum_t p_t(k) w^(t k)`` where ``w = exp(2 pi i / L)``.  Multiplying by a
numerator whose exponents are linear in symbolic parameters gives a piecewise
closed form for the coefficients ``c_k``; differencing it gives the quantity
whose sign the prover has to decide.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterable, Mapping, Sequence

from .cyclotomic import (CyclotomicNumber, lcm_all, power_of_omega, solve_linear_system)
from .linear import Constraint, LinearForm, Region, ge
from .qseries import DenseQPolynomial, SymbolicNumerator, taylor_inverse

Mono = tuple[int, ...]
Key = tuple[int, ...]


class ClosedFormError(RuntimeError):
    """Raised when a closed form cannot be assembled or fails a self-check."""


# --------------------------------------------------------------------------
# integer multivariate polynomial helpers (dict mono -> int)

def _ipoly_mul(a: Mapping[Mono, int], b: Mapping[Mono, int]) -> dict[Mono, int]:
    out: dict[Mono, int] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


@lru_cache(maxsize=None)
def _affine_powers(coeffs: tuple[int, ...], const: int, top: int) -> tuple[dict, ...]:
    """``(coeffs . x + const)^j`` for ``j = 0..top`` as integer polynomials."""
    n = len(coeffs)
    base: dict[Mono, int] = {}
    if const:
        base[(0,) * n] = const
    for i, c in enumerate(coeffs):
        if c:
            base[tuple(1 if j == i else 0 for j in range(n))] = c
    out = [{(0,) * n: 1}]
    for _ in range(top):
        out.append(_ipoly_mul(out[-1], base))
    return tuple(out)


# --------------------------------------------------------------------------
# exponential polynomials

class ExpPolynomial:
    """``sum_key w^(key . x) * P_key(x)`` over integer variables ``x``.

    ``terms`` maps an omega-exponent vector (one entry per variable, reduced
    mod ``L``) to a polynomial ``{monomial exponent tuple: CyclotomicNumber}``.
    Constant parts of omega exponents are folded into the coefficients, so the
    representation is canonical: two forms are equal iff their dicts are.
    """

    __slots__ = ("order", "variables", "terms", "k0", "denominator")

    def __init__(self, order: int, variables: Sequence[str],
                 terms: Mapping[Key, Mapping[Mono, CyclotomicNumber]] = (),
                 k0: int | None = None, denominator: tuple[int, ...] | None = None):
        self.order = order
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: dict[Key, dict[Mono, CyclotomicNumber]] = {}
        for key, poly in dict(terms).items():
            key = tuple(int(x) % order for x in key)
            if len(key) != n:
                raise ValueError("omega exponent arity mismatch")
            p = {tuple(m): c for m, c in poly.items() if not c.is_zero()}
            if p:
                clean[key] = p
        self.terms = clean
        self.k0 = k0
        self.denominator = denominator

    # -- basic algebra ----------------------------------------------------
    @classmethod
    def zero(cls, order: int, variables: Sequence[str]) -> "ExpPolynomial":
        return cls(order, variables, {})

    @classmethod
    def constant(cls, order: int, variables: Sequence[str], value) -> "ExpPolynomial":
        n = len(variables)
        c = value if isinstance(value, CyclotomicNumber) else CyclotomicNumber.rational(order, value)
        return cls(order, variables, {(0,) * n: {(0,) * n: c}})

    def _compatible(self, other: "ExpPolynomial"):
        if self.order != other.order or self.variables != other.variables:
            raise ValueError("incompatible exponential polynomials")

    def __add__(self, other: "ExpPolynomial") -> "ExpPolynomial":
        self._compatible(other)
        acc = {k: dict(p) for k, p in self.terms.items()}
        for key, poly in other.terms.items():
            tgt = acc.setdefault(key, {})
            for m, c in poly.items():
                tgt[m] = tgt[m] + c if m in tgt else c
        return ExpPolynomial(self.order, self.variables, acc)

    def __neg__(self) -> "ExpPolynomial":
        return ExpPolynomial(self.order, self.variables,
                             {k: {m: -c for m, c in p.items()} for k, p in self.terms.items()})

    def __sub__(self, other: "ExpPolynomial") -> "ExpPolynomial":
        return self + (-other)

    def scale(self, s) -> "ExpPolynomial":
        return ExpPolynomial(self.order, self.variables,
                             {k: {m: c * s for m, c in p.items()} for k, p in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, ExpPolynomial) and self.order == other.order and \
            self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.order, self.variables, len(self.terms)))

    def is_zero(self) -> bool:
        return not self.terms

    def monomial_count(self) -> int:
        return sum(len(p) for p in self.terms.values())

    def degree(self, var: int = 0) -> int:
        return max((m[var] for p in self.terms.values() for m in p), default=0)

    # -- evaluation -------------------------------------------------------
    def evaluate_cyclotomic(self, point: Sequence[int]) -> CyclotomicNumber:
        L = self.order
        acc = CyclotomicNumber.zero(L)
        for key, poly in self.terms.items():
            inner = CyclotomicNumber.zero(L)
            for m, c in poly.items():
                v = 1
                for x, e in zip(point, m):
                    v *= x ** e
                if v:
                    inner = inner + c * v
            e = sum(a * x for a, x in zip(key, point))
            acc = acc + inner.times_omega_power(e)
        return acc

    def evaluate(self, point: Sequence[int]) -> Fraction:
        """Value at an integer point; the omega part must vanish there."""
        v = self.evaluate_cyclotomic([int(x) for x in point])
        if not v.is_rational():
            raise ClosedFormError(f"non-rational value {v} at {tuple(point)}")
        return v.to_rational()

    # -- substitution -----------------------------------------------------
    def substitute(self, new_variables: Sequence[str], images: Sequence[LinearForm]) -> "ExpPolynomial":
        """Replace each variable ``x_i`` by the integer-linear form ``images[i]``."""
        if len(images) != len(self.variables):
            raise ValueError("need one image per variable")
        L = self.order
        nv = len(new_variables)
        acc: dict[Key, dict[Mono, CyclotomicNumber]] = {}
        for key, poly in self.terms.items():
            new_key = [0] * nv
            shift = 0
            for t, img in zip(key, images):
                if t:
                    for j in range(nv):
                        new_key[j] += t * img.coeffs[j]
                    shift += t * img.const
            new_key = tuple(x % L for x in new_key)
            tgt = acc.setdefault(new_key, {})
            for m, c in poly.items():
                c = c.times_omega_power(shift)
                expansion = {(0,) * nv: 1}
                for e, img in zip(m, images):
                    if e:
                        expansion = _ipoly_mul(expansion, _affine_powers(img.coeffs, img.const, e)[e])
                for mm, ic in expansion.items():
                    term = c * ic
                    tgt[mm] = tgt[mm] + term if mm in tgt else term
        return ExpPolynomial(L, new_variables, acc)

    def shift_variable(self, index: int, amount: int) -> "ExpPolynomial":
        n = len(self.variables)
        images = [LinearForm.variable(i, n).shift(amount if i == index else 0) for i in range(n)]
        return self.substitute(self.variables, images)

    # -- output -----------------------------------------------------------
    def format(self) -> str:
        parts = []
        for key in sorted(self.terms):
            poly = self.terms[key]
            lin = "+".join(f"{a}*{v}" for a, v in zip(key, self.variables) if a)
            mons = []
            for m in sorted(poly):
                mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, m) if e)
                mons.append(f"({poly[m]})" + (f"*{mono}" if mono else ""))
            body = " + ".join(mons)
            parts.append(f"[{body}]" + (f"*w^({lin})" if lin else ""))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"ExpPolynomial(L={self.order}, vars={self.variables}, {self.monomial_count()} monomials)"

    def to_json(self) -> dict:
        return {"order": self.order, "variables": list(self.variables), "k0": self.k0,
                "denominator": None if self.denominator is None else list(self.denominator),
                "terms": [[list(key), [[list(m), c.to_text()] for m, c in sorted(p.items())]]
                          for key, p in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, data: dict) -> "ExpPolynomial":
        L = data["order"]
        terms = {tuple(key): {tuple(m): CyclotomicNumber.from_text(L, c) for m, c in mons}
                 for key, mons in data["terms"]}
        den = data.get("denominator")
        return cls(L, data["variables"], terms, data.get("k0"), None if den is None else tuple(den))


# --------------------------------------------------------------------------
# denominator expansion

def _root_multiplicities(exponents: Sequence[int]) -> tuple[int, dict[int, int]]:
    L = lcm_all(exponents)
    mult = {}
    for t in range(L):
        c = sum(1 for e in exponents if (t * e) % L == 0)
        if c:
            mult[t] = c
    return L, mult


def _ansatz_columns(exponents: Sequence[int]) -> tuple[int, list[tuple[int, int]]]:
    L, mult = _root_multiplicities(exponents)
    cols = [(t, j) for t in sorted(mult) for j in range(mult[t])]
    return L, cols


def _ansatz_matrix(L: int, cols, ks: Sequence[int]):
    rows = []
    for k in ks:
        row = []
        for t, j in cols:
            val = 1 if j == 0 else k ** j
            row.append(power_of_omega(t * k, L) * val)
        rows.append(row)
    return rows


def _form_from_solution(L: int, cols, sol, exponents) -> ExpPolynomial:
    terms: dict[Key, dict[Mono, CyclotomicNumber]] = {}
    for (t, j), u in zip(cols, sol):
        if not u.is_zero():
            terms.setdefault((t,), {})[(j,)] = u
    deg = sum(exponents)
    return ExpPolynomial(L, ("k",), terms, k0=1 - deg, denominator=tuple(exponents))


def expand_denominator(exponents: Sequence[int], variant: str = "backward") -> ExpPolynomial:
    """Closed form for the Taylor coefficients of ``1 / prod (1 - q^e)``.

    ``variant="backward"`` fits the ansatz to ``d_k = 0`` for
    ``1 - deg D <= k < 0`` and ``d_0 = 1``; ``variant="forward"`` fits it to
    the first ``deg D`` Taylor coefficients.  Both give the same answer.
    """
    exponents = tuple(int(e) for e in exponents)
    if not exponents or any(e < 1 for e in exponents):
        raise ValueError("exponents must be positive integers")
    L, cols = _ansatz_columns(exponents)
    deg = sum(exponents)
    if variant == "backward":
        ks = list(range(1 - deg, 1))
        rhs = [CyclotomicNumber.rational(L, 1 if k == 0 else 0) for k in ks]
    elif variant == "forward":
        ks = list(range(deg))
        taylor = taylor_inverse(DenseQPolynomial.from_exponents(exponents), deg)
        rhs = [CyclotomicNumber.rational(L, x) for x in taylor]
    else:
        raise ValueError("variant must be 'backward' or 'forward'")
    A = _ansatz_matrix(L, cols, ks)
    try:
        sol = solve_linear_system(A, rhs)
    except ArithmeticError as exc:  # pragma: no cover - impossible for distinct roots
        raise ClosedFormError(f"singular ansatz system: {exc}") from exc
    return _form_from_solution(L, cols, sol, exponents)


def validity_floor(expr: ExpPolynomial) -> int:
    """``k0 = 1 - deg D``, after checking that the form vanishes on ``k0 <= k < 0``."""
    if expr.k0 is None:
        raise ValueError("expression carries no validity information")
    for k in range(expr.k0, 0):
        if expr.evaluate((k,)) != 0:
            raise ClosedFormError(f"closed form does not vanish at k={k}")
    return expr.k0


# --------------------------------------------------------------------------
# piecewise forms

@dataclass
class Piece:
    """One region of a piecewise closed form.

    ``validity`` is the (larger) region on which ``expr`` is certified to equal
    the true coefficient; ``included`` lists the numerator groups used.
    """

    region: Region
    expr: ExpPolynomial
    validity: Region
    included: tuple = ()

    def k_bounds(self, sign: int) -> list[LinearForm]:
        """Lower (``sign=+1``) or upper (``sign=-1``) bounds on ``k`` in the validity region,
        written as forms ``f`` meaning ``k >= f`` (lower) or ``k < f`` (upper)."""
        out = []
        for c in self.validity.constraints:
            a = c.form.coeffs[0]
            if a * sign > 0 and abs(a) == 1:
                rest = LinearForm((0,) + tuple(-sign * x for x in c.form.coeffs[1:]), -sign * c.form.const)
                out.append(rest if sign > 0 else rest.shift(1))
        return out

    @property
    def valid_low(self) -> list[LinearForm]:
        return self.k_bounds(+1)

    @property
    def valid_high(self) -> list[LinearForm]:
        return self.k_bounds(-1)


@dataclass
class PiecewiseClosedForm:
    variables: tuple[str, ...]
    order: int
    pieces: list[Piece]
    domain: Region
    kind: str = "c"
    k0: int = 0
    meta: dict = field(default_factory=dict)

    def piece_at(self, point: Sequence[int]) -> Piece | None:
        hits = [p for p in self.pieces if p.region.contains(point)]
        if len(hits) > 1:
            raise ClosedFormError(f"overlapping pieces at {tuple(point)}")
        return hits[0] if hits else None

    def evaluate(self, point: Sequence[int]) -> Fraction:
        p = self.piece_at(point)
        if p is None:
            raise ClosedFormError(f"{tuple(point)} is outside every piece")
        return p.expr.evaluate(point)

    def to_json(self) -> dict:
        return {"variables": list(self.variables), "order": self.order, "kind": self.kind,
                "k0": self.k0, "meta": self.meta, "domain": self.domain.to_json(),
                "pieces": [{"region": p.region.to_json(), "validity": p.validity.to_json(),
                            "included": [list(x) if isinstance(x, tuple) else x for x in p.included],
                            "expr": p.expr.to_json()} for p in self.pieces]}

    @classmethod
    def from_json(cls, data: dict) -> "PiecewiseClosedForm":
        pieces = [Piece(Region.from_json(p["region"]), ExpPolynomial.from_json(p["expr"]),
                        Region.from_json(p["validity"]),
                        tuple(tuple(x) if isinstance(x, list) else x for x in p["included"]))
                  for p in data["pieces"]]
        return cls(tuple(data["variables"]), data["order"], pieces, Region.from_json(data["domain"]),
                   data.get("kind", "c"), data.get("k0", 0), data.get("meta", {}))


@dataclass
class _Group:
    weights: tuple[int, ...]
    terms: list  # SymbolicTerm
    b_min: int
    b_max: int
    sigma: int = 0
    mode: str = "split"  # split | always | never


def _index_form(nv: int, weights: Sequence[int], shift: int) -> LinearForm:
    # k - a.l - shift as a form over (k, l_1..l_n)
    return LinearForm((1,) + tuple(-a for a in weights), -shift)


def _shifted_sum(denom: ExpPolynomial, terms, variables: Sequence[str],
                 shift_filter=None) -> ExpPolynomial:
    """``sum_i gamma_i d_{k - a_i.l - b_i}`` as an exponential polynomial."""
    nv = len(variables)
    L = denom.order
    acc: dict[Key, dict[Mono, CyclotomicNumber]] = {}
    rot_cache: dict = {}
    for t in terms:
        idx = _index_form(nv, t.exponent_weights, t.shift)
        for (tk,), poly in denom.terms.items():
            new_key = tuple((tk * c) % L for c in idx.coeffs)
            rot = (tk * idx.const) % L
            tgt = acc.setdefault(new_key, {})
            top = max(m[0] for m in poly)
            powers = _affine_powers(idx.coeffs, idx.const, top)
            for (j,), c in poly.items():
                ck = (tk, j, rot)
                cc = rot_cache.get(ck)
                if cc is None:
                    cc = rot_cache[ck] = c.times_omega_power(rot)
                cc = cc * t.coefficient
                for mm, ic in powers[j].items():
                    term = cc * ic
                    tgt[mm] = tgt[mm] + term if mm in tgt else term
    return ExpPolynomial(L, variables, acc)


def _cells(base: Region, hyperplanes: Sequence[tuple[object, LinearForm]]):
    """Feasible sign vectors of an arrangement, as (signs, region) pairs.

    Sign ``+`` means ``form >= 0``, ``-`` means ``form <= -1`` (integer split).
    """
    out = []

    def rec(i: int, region: Region, signs: tuple):
        if not region.is_feasible():
            return
        if i == len(hyperplanes):
            out.append((signs, region))
            return
        _, f = hyperplanes[i]
        rec(i + 1, region & ge((-f).shift(-1)), signs + (False,))
        rec(i + 1, region & ge(f), signs + (True,))

    rec(0, base, ())
    return out


def choose_split_points(groups: list[_Group], k0: int, n_params: int, base_sigma: int = 0) -> None:
    """Pick ``sigma_a`` for every split group in place.

    A group with parameter part ``a`` may be switched on at ``k = a.l + sigma``
    only if ``b_max + k0 <= sigma <= b_min``; values ``<= b_min - 1`` are
    preferred since they keep the next index inside the validity range too.
    For one parameter the choice is the greedy monotone one,
    ``sigma_j = max(sigma_{j-1}, b_max + k0)``; otherwise ``sigma`` is the value
    of the admissible interval closest to zero.
    """
    prev = base_sigma
    for g in sorted(groups, key=lambda g: g.weights):
        if g.mode != "split":
            continue
        lo, hi = g.b_max + k0, g.b_min
        if lo > hi:
            raise ClosedFormError(
                f"no admissible split point for exponent group {g.weights}: shifts span "
                f"[{g.b_min}, {g.b_max}] which exceeds the slack {-k0}")
        pref_hi = hi - 1 if hi - 1 >= lo else hi
        if n_params == 1:
            s = max(prev, lo)
            if s > pref_hi:
                s = lo if lo <= pref_hi else pref_hi
            g.sigma = s
            prev = s
        else:
            g.sigma = min(max(0, lo), pref_hi)


def assemble_piecewise(numerator: SymbolicNumerator, denom_form: ExpPolynomial,
                       domain: Region, k_range: Iterable[Constraint],
                       param_names: Sequence[str] | None = None,
                       sigma: Mapping[tuple, int] | None = None) -> PiecewiseClosedForm:
    """Piecewise closed form for ``c_k = [q^k] N(q, q^l) / D(q)``.

    ``domain`` constrains the parameters and ``k_range`` gives the constraints
    on ``k`` (both over the variables ``(k, params...)``).  Each piece is a
    cell of the arrangement of split hyperplanes ``k = a.l + sigma_a``.
    """
    n = numerator.n_params
    names = ("k",) + tuple(param_names or domain.names[1:])
    if domain.names != names:
        domain = Region(names, domain.constraints)
    k0 = denom_form.k0 if denom_form.k0 is not None else 0
    full = (domain & k_range).tightened()
    if not full.is_feasible():
        raise ClosedFormError("empty domain")
    groups = []
    for w, terms in numerator.groups().items():
        shifts = [t.shift for t in terms]
        groups.append(_Group(w, terms, min(shifts), max(shifts)))
    zero = (0,) * n
    split_groups: list[_Group] = []
    zero_group = None
    for g in groups:
        if g.weights == zero:
            zero_group = g
            continue
        never = ge(_index_form(n + 1, g.weights, g.b_min).scale(-1).shift(-1))  # index < b_min => excluded
        if full.implies(never):
            g.mode = "never"
            continue
        always = ge(_index_form(n + 1, g.weights, g.b_max + k0))
        if full.implies(always):
            g.mode = "always"
            continue
        split_groups.append(g)
    # group 0: included from sigma_0 on; below that, one slice per k value
    slices: list[tuple[Region, object]] = []
    sigma0 = 0
    if zero_group is not None:
        sigma0 = zero_group.b_max + k0
        k_lo, _ = full.bounds(0)
        if k_lo is None:
            raise ClosedFormError("k must be bounded below")
        lo_int = -((-k_lo.numerator) // k_lo.denominator)
        if sigma0 > lo_int:
            for kv in range(lo_int, sigma0):
                slices.append((full & [ge(LinearForm.variable(0, n + 1).shift(-kv)),
                                       ge(LinearForm.variable(0, n + 1, -1).shift(kv))], kv))
            main = full & ge(LinearForm.variable(0, n + 1).shift(-sigma0))
        else:
            main = full
    else:
        main = full
    if sigma:
        for g in split_groups:
            g.sigma = sigma[g.weights]
    else:
        choose_split_points(split_groups, k0, n, base_sigma=max(sigma0, 0))
    hyper = [(g.weights, _index_form(n + 1, g.weights, g.sigma)) for g in split_groups]
    pieces: list[Piece] = []
    always_terms = [t for g in groups if g.mode == "always" for t in g.terms]

    def make(region: Region, signs, zero_terms, zero_tag):
        inc = [g for g, s in zip(split_groups, signs) if s]
        terms = list(zero_terms) + always_terms + [t for g in inc for t in g.terms]
        expr = _shifted_sum(denom_form, terms, names)
        valid = []
        for g in groups:
            if g.weights == zero:
                continue
            if g.mode == "always" or g in inc:
                valid.append(ge(_index_form(n + 1, g.weights, g.b_max + k0)))
            else:
                valid.append(ge(_index_form(n + 1, g.weights, g.b_min).scale(-1).shift(-1)))
        if zero_group is not None and zero_tag is None:
            valid.append(ge(_index_form(n + 1, zero, zero_group.b_max + k0)))
        validity = Region(names, list(domain.constraints) + valid).tightened()
        if zero_tag is not None:
            validity = validity & [ge(LinearForm.variable(0, n + 1).shift(-zero_tag)),
                                   ge(LinearForm.variable(0, n + 1, -1).shift(zero_tag))]
        included = tuple(sorted(({zero} if zero_tag is None and zero_group else set())
                                | {g.weights for g in inc} | {g.weights for g in groups if g.mode == "always"}))
        pieces.append(Piece(region.simplified(), expr, validity.simplified(), included))

    zero_terms_all = zero_group.terms if zero_group else []
    for signs, region in _cells(main, hyper):
        make(region, signs, zero_terms_all, None)
    for region, kv in slices:
        zt = [t for t in zero_terms_all if kv - t.shift >= 0]
        for signs, sub in _cells(region, hyper):
            make(sub, signs, zt, kv)
    meta = {"sigma": {",".join(map(str, g.weights)): g.sigma for g in split_groups},
            "sigma0": sigma0}
    return PiecewiseClosedForm(names, denom_form.order, pieces, full.simplified(), "c", k0, meta)


def forward_difference(pw: PiecewiseClosedForm) -> PiecewiseClosedForm:
    """Piecewise form of ``c_{k+1} - c_k`` on ``{k : k, k+1 in domain}``.

    Where ``k+1`` leaves the validity range of the piece containing ``k``, the
    piece is split and the formula of the piece containing ``k+1`` is used.
    """
    names = pw.variables
    nv = len(names)
    up = [LinearForm.variable(i, nv).shift(1 if i == 0 else 0) for i in range(nv)]

    def shifted(region: Region) -> Region:
        return region.substitute(names, up)

    dom = (pw.domain & shifted(pw.domain).constraints).tightened()
    shifted_exprs = {}

    def expr_up(p: Piece) -> ExpPolynomial:
        key = id(p)
        if key not in shifted_exprs:
            shifted_exprs[key] = p.expr.shift_variable(0, 1)
        return shifted_exprs[key]

    out: list[Piece] = []
    for p in pw.pieces:
        base = (p.region & dom.constraints)
        if not base.is_feasible():
            continue
        vshift = shifted(p.validity)
        whole = base & vshift.constraints
        if whole.is_feasible():
            out.append(Piece(whole.simplified(), expr_up(p) - p.expr,
                             (p.validity & shifted(p.validity).constraints).simplified(), p.included))
        # parts of `base` where k+1 is outside p's validity
        prior: list[Constraint] = []
        for c in vshift.constraints:
            if base.implies(c):
                continue
            part = base & prior & [c.negated().tightened()]
            prior.append(c)
            if not part.is_feasible():
                continue
            for q in pw.pieces:
                sub = part & shifted(q.region).constraints
                if sub.is_feasible():
                    out.append(Piece(sub.simplified(), expr_up(q) - p.expr,
                                     (p.validity & shifted(q.validity).constraints).simplified(),
                                     tuple(sorted(set(p.included) | set(q.included)))))
    return PiecewiseClosedForm(names, pw.order, out, dom.simplified(), "delta", pw.k0, dict(pw.meta))


# --------------------------------------------------------------------------
# convenience builders

def gaussian_piecewise(m: int, l_min: int = 1) -> PiecewiseClosedForm:
    """``p_k(l, m)`` on ``0 <= k <= floor(l m / 2)``, ``l >= l_min``."""
    from .qseries import expand_gaussian_numerator, gaussian_denominator
    denom = expand_denominator(gaussian_denominator(m))
    num = expand_gaussian_numerator(1, m)
    names = ("k", "l")
    domain = Region(names, [ge(LinearForm((0, 1), -l_min))])
    krange = [ge(LinearForm((1, 0), 0)), ge(LinearForm((-2, m), 0))]
    pw = assemble_piecewise(num, denom, domain, krange)
    pw.meta.update({"family": "gaussian", "m": m, "l_min": l_min})
    return pw


def gaussian_difference(m: int, l_min: int = 1) -> PiecewiseClosedForm:
    return forward_difference(gaussian_piecewise(m, l_min))
