"""Elimination of roots of unity by residue classes.

Substituting ``x = M x' + r`` for every variable turns each ``w^(key . x)``
into the constant ``w^(key . r)`` as soon as ``key_v * M_v = 0 (mod L)``.
Collecting the constants must leave rational numbers, which is checked for
every coefficient of every case.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, gcd
from typing import Iterator, Sequence

import numpy as np

from .closedform import ClosedFormError, PiecewiseClosedForm
from .cyclotomic import cyclotomic_polynomial, lcm_all, omega_power_table, totient
from .linear import LinearForm, Region

Mono = tuple[int, ...]


class ResidueError(ClosedFormError):
    """A coefficient kept a nonzero omega part after collection."""


@dataclass(frozen=True)
class QPoly:
    """Rational multivariate polynomial ``{monomial: coefficient}``."""

    variables: tuple[str, ...]
    coeffs: tuple[tuple[Mono, Fraction], ...]

    @classmethod
    def from_dict(cls, variables, d: dict) -> "QPoly":
        return cls(tuple(variables), tuple(sorted((m, Fraction(c)) for m, c in d.items() if c)))

    def as_dict(self) -> dict[Mono, Fraction]:
        return dict(self.coeffs)

    def __call__(self, point: Sequence) -> Fraction:
        acc = Fraction(0)
        for m, c in self.coeffs:
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= Fraction(x) ** e
            acc += v
        return acc

    def __sub__(self, other) -> "QPoly":
        d = self.as_dict()
        if isinstance(other, QPoly):
            for m, c in other.coeffs:
                d[m] = d.get(m, Fraction(0)) - c
        else:
            z = (0,) * len(self.variables)
            d[z] = d.get(z, Fraction(0)) - Fraction(other)
        return QPoly.from_dict(self.variables, d)

    def total_degree(self) -> int:
        return max((sum(m) for m, _ in self.coeffs), default=0)

    def integer_form(self) -> tuple[dict[Mono, int], int]:
        """``(numerators, D)`` with ``self = numerators / D`` and ``D > 0``."""
        D = lcm_all(c.denominator for _, c in self.coeffs) if self.coeffs else 1
        return {m: int(c * D) for m, c in self.coeffs}, D

    def format(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in sorted(self.coeffs, key=lambda mc: (-sum(mc[0]), mc[0])):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, m) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


@dataclass
class ResidueCase:
    residues: tuple[int, ...]
    moduli: tuple[int, ...]
    pieces: list[tuple[Region, QPoly]]
    index: int = 0

    @property
    def variables(self) -> tuple[str, ...]:
        return self.pieces[0][0].names if self.pieces else ()

    def original_point(self, primed: Sequence[int]) -> tuple[int, ...]:
        return tuple(M * x + r for M, x, r in zip(self.moduli, primed, self.residues))


def primed_names(names: Sequence[str]) -> tuple[str, ...]:
    return tuple(n + "'" for n in names)


def effective_moduli(pw: PiecewiseClosedForm, reduce: bool = True) -> tuple[int, ...]:
    """Per-variable period after which every omega power repeats.

    With ``reduce=False`` every variable gets the full order ``L``.
    """
    L = pw.order
    nv = len(pw.variables)
    if not reduce:
        return (L,) * nv
    g = [0] * nv
    for p in pw.pieces:
        for key in p.expr.terms:
            for v in range(nv):
                g[v] = gcd(g[v], key[v])
    return tuple(L // gcd(L, x) if x else 1 for x in g)


def case_count(pw: PiecewiseClosedForm, moduli: Sequence[int] | None = None) -> int:
    moduli = moduli or effective_moduli(pw)
    n = 1
    for M in moduli:
        n *= M
    return n


def residues_of_index(index: int, moduli: Sequence[int]) -> tuple[int, ...]:
    out = []
    for M in reversed(moduli):
        out.append(index % M)
        index //= M
    return tuple(reversed(out))


def index_of_residues(residues: Sequence[int], moduli: Sequence[int]) -> int:
    i = 0
    for r, M in zip(residues, moduli):
        i = i * M + r
    return i


class _CompiledPiece:
    """Arrays for fast repeated reduction of one piece's expression."""

    def __init__(self, expr, L: int):
        self.L = L
        self.phi = totient(L)
        keys = sorted(expr.terms)
        monos = sorted({m for p in expr.terms.values() for m in p})
        self.keys = np.array(keys, dtype=np.int64).reshape(len(keys), -1)
        self.monos = monos
        den = lcm_all(c.denominator for p in expr.terms.values() for c in p.values()) if keys else 1
        self.den = den
        C = np.zeros((len(keys), len(monos), self.phi), dtype=object)
        C[...] = 0
        mi = {m: i for i, m in enumerate(monos)}
        for a, key in enumerate(keys):
            for m, c in expr.terms[key].items():
                scale = den // c.denominator
                C[a, mi[m], :] = [x * scale for x in c.numerators]
        table = np.array(omega_power_table(L), dtype=object)
        bound = int(np.max(np.abs(C))) if C.size else 0
        tmax = int(np.max(np.abs(table))) if table.size else 1
        growth = bound * max(len(keys), 1) * tmax * L
        self.use_int = growth < 2 ** 62
        dt = np.int64 if self.use_int else object
        self.C = C.astype(dt)
        self.table = table.astype(dt)

    def values(self, residues: Sequence[int]) -> list[Fraction]:
        """Rational value of each monomial coefficient for the given residues."""
        L, phi = self.L, self.phi
        nm = len(self.monos)
        if nm == 0:
            return []
        es = (self.keys @ np.array(residues, dtype=np.int64)) % L if len(self.keys) else []
        Z = np.zeros((nm, L), dtype=self.C.dtype)
        if Z.dtype == object:
            Z[...] = 0
        cols = np.arange(phi)
        for a, e in enumerate(es):
            Z[:, (cols + e) % L] += self.C[a]
        R = Z @ self.table  # (nm, phi)
        if np.any(R[:, 1:] != 0):
            bad = [self.monos[i] for i in range(nm) if np.any(R[i, 1:] != 0)]
            raise ResidueError(f"omega part does not vanish for residues {tuple(residues)}, monomials {bad[:3]}")
        return [Fraction(int(x), self.den) for x in R[:, 0]]

    def numerators(self, residues: Sequence[int]) -> list[int]:
        """Like :meth:`values` but as integers over the common denominator ``den``."""
        return [int(x.numerator * (self.den // x.denominator)) for x in self.values(residues)]


def _expansion_matrix(deg: int, M: int, r: int) -> list[list[int]]:
    # (M x' + r)^i = sum_s E[i][s] x'^s
    return [[comb(i, s) * M ** s * r ** (i - s) if s <= i else 0 for s in range(deg + 1)]
            for i in range(deg + 1)]


def substitute_residues(monos: Sequence[Mono], values: Sequence[Fraction],
                        moduli: Sequence[int], residues: Sequence[int]) -> dict[Mono, Fraction]:
    """Expand ``sum values[i] * x^monos[i]`` under ``x_v = M_v x'_v + r_v``."""
    den = lcm_all(Fraction(c).denominator for c in values) if values else 1
    nums = [int(Fraction(c) * den) for c in values]
    out = _substitute_ints(monos, nums, moduli, residues)
    return {k: Fraction(v, den) for k, v in out.items()}


def _substitute_ints(monos, nums, moduli, residues) -> dict[Mono, int]:
    nv = len(moduli)
    degs = [max((m[v] for m in monos), default=0) for v in range(nv)]
    E = [_expansion_matrix(degs[v], moduli[v], residues[v]) for v in range(nv)]
    out: dict[Mono, int] = {}
    for m, c in zip(monos, nums):
        if not c:
            continue
        parts = [[(s, E[v][m[v]][s]) for s in range(m[v] + 1) if E[v][m[v]][s]] for v in range(nv)]
        for combo in product(*parts):
            coef = c
            for _, e in combo:
                coef *= e
            key = tuple(s for s, _ in combo)
            out[key] = out.get(key, 0) + coef
    return {k: v for k, v in out.items() if v}


class CaseReducer:
    """Reduces a piecewise closed form residue case by residue case."""

    def __init__(self, pw: PiecewiseClosedForm, moduli: Sequence[int] | None = None):
        self.pw = pw
        self.moduli = tuple(moduli) if moduli is not None else effective_moduli(pw)
        L = pw.order
        for p in pw.pieces:
            for key in p.expr.terms:
                for t, M in zip(key, self.moduli):
                    if (t * M) % L:
                        raise ValueError(f"modulus {M} does not kill omega exponent {t} (L={L})")
        self.compiled = [_CompiledPiece(p.expr, L) for p in pw.pieces]
        self.names = primed_names(pw.variables)

    @property
    def total(self) -> int:
        n = 1
        for M in self.moduli:
            n *= M
        return n

    def images(self, residues: Sequence[int]) -> list[LinearForm]:
        nv = len(self.moduli)
        return [LinearForm(tuple(M if j == i else 0 for j in range(nv)), r)
                for i, (M, r) in enumerate(zip(self.moduli, residues))]

    def reduce(self, residues: Sequence[int], pieces: Sequence[int] | None = None) -> ResidueCase:
        residues = tuple(int(r) for r in residues)
        if len(residues) != len(self.moduli) or any(not 0 <= r < M for r, M in zip(residues, self.moduli)):
            raise ValueError(f"residues {residues} outside moduli {self.moduli}")
        imgs = self.images(residues)
        out = []
        for i, (p, cp) in enumerate(zip(self.pw.pieces, self.compiled)):
            if pieces is not None and i not in pieces:
                continue
            region = p.region.substitute(self.names, imgs)
            ints = _substitute_ints(cp.monos, cp.numerators(residues), self.moduli, residues)
            poly = {k: Fraction(v, cp.den) for k, v in ints.items()}
            out.append((region, QPoly.from_dict(self.names, poly)))
        return ResidueCase(residues, self.moduli, out, index_of_residues(residues, self.moduli))


def reduce_case(pw: PiecewiseClosedForm, residues: Sequence[int],
                moduli: Sequence[int] | None = None) -> ResidueCase:
    return CaseReducer(pw, moduli).reduce(residues)


def enumerate_cases(pw: PiecewiseClosedForm, moduli: Sequence[int] | None = None,
                    start: int = 0, stop: int | None = None,
                    reducer: CaseReducer | None = None) -> Iterator[ResidueCase]:
    """Lazily yield residue cases in lexicographic order of ``(kappa, lambda_1, ...)``."""
    red = reducer or CaseReducer(pw, moduli)
    total = red.total
    stop = total if stop is None else min(stop, total)
    for idx in range(start, stop):
        yield red.reduce(residues_of_index(idx, red.moduli))
