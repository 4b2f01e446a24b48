"""Polynomials in q and numerators with symbolic, integer-linear exponents.

A numerator term is ``gamma * q^(a_1 l_1 + ... + a_n l_n + b)``; the pipeline
only ever needs sums and products of such terms, so nothing more general is
provided.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class DenseQPolynomial:
    """Rational coefficients of ``q^0, q^1, ...`` with trailing zeros removed."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: "DenseQPolynomial") -> "DenseQPolynomial":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return DenseQPolynomial(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return DenseQPolynomial(out)

    @classmethod
    def from_exponents(cls, exponents: Sequence[int]) -> "DenseQPolynomial":
        """``prod_i (1 - q^{e_i})``."""
        out = cls((1,))
        for e in exponents:
            if e < 1:
                raise ValueError("exponents must be >= 1")
            out = out * cls([1] + [0] * (e - 1) + [-1])
        return out


def taylor_inverse(D: DenseQPolynomial | Sequence, count: int) -> list[Fraction]:
    """First ``count`` Taylor coefficients of ``1/D(q)``.

    Uses ``d_k = -sum_{j>=1} D_j d_{k-j}``, which follows from ``D * sum d_k q^k = 1``.
    """
    coeffs = D.coeffs if isinstance(D, DenseQPolynomial) else tuple(Fraction(x) for x in D)
    if not coeffs or coeffs[0] != 1:
        raise ValueError("taylor_inverse needs D(0) = 1")
    if count < 1:
        raise ValueError("count must be positive")
    out: list[Fraction] = []
    for k in range(count):
        acc = Fraction(1 if k == 0 else 0)
        for j in range(1, min(k, len(coeffs) - 1) + 1):
            if coeffs[j]:
                acc -= coeffs[j] * out[k - j]
        out.append(acc)
    return out


@dataclass(frozen=True, order=True)
class SymbolicTerm:
    """``coefficient * q^(weights . params + shift)``."""

    exponent_weights: tuple[int, ...]
    shift: int
    coefficient: Fraction

    def __post_init__(self):
        if self.coefficient == 0:
            raise ValueError("zero coefficient")

    def exponent_at(self, params: Sequence[int]) -> int:
        return self.shift + sum(a * x for a, x in zip(self.exponent_weights, params))


class SymbolicNumerator:
    """A finite sum of :class:`SymbolicTerm` with like terms merged.

    Terms are kept sorted by ``(exponent_weights, shift)``.
    """

    __slots__ = ("n_params", "terms")

    def __init__(self, n_params: int, terms: Iterable[SymbolicTerm] | Mapping = ()):
        acc: dict[tuple[tuple[int, ...], int], Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else (
            ((t.exponent_weights, t.shift), t.coefficient) for t in terms)
        for (w, b), c in items:
            w = tuple(int(x) for x in w)
            if len(w) != n_params:
                raise ValueError("weight vector length does not match n_params")
            acc[(w, int(b))] = acc.get((w, int(b)), Fraction(0)) + Fraction(c)
        self.n_params = n_params
        self.terms = tuple(SymbolicTerm(w, b, c) for (w, b), c in sorted(acc.items()) if c)

    # -- constructors -----------------------------------------------------
    @classmethod
    def monomial(cls, weights: Sequence[int], shift: int = 0, coefficient=1) -> "SymbolicNumerator":
        return cls(len(weights), {(tuple(weights), shift): Fraction(coefficient)})

    @classmethod
    def constant_poly(cls, n_params: int, coeffs: Sequence) -> "SymbolicNumerator":
        """An ordinary polynomial ``sum c_i q^i`` seen as a numerator."""
        zero = (0,) * n_params
        return cls(n_params, {(zero, i): Fraction(c) for i, c in enumerate(coeffs) if c})

    @classmethod
    def q_pochhammer(cls, weights: Sequence[int], shift: int, length: int) -> "SymbolicNumerator":
        """``(q^(w.l + shift + 1); q)_length = prod_{i=1}^{length} (1 - q^(w.l + shift + i))``."""
        n = len(weights)
        out = cls.one(n)
        for i in range(1, length + 1):
            out = out * cls(n, {((0,) * n, 0): 1, (tuple(weights), shift + i): -1})
        return out

    @classmethod
    def one(cls, n_params: int) -> "SymbolicNumerator":
        return cls(n_params, {((0,) * n_params, 0): Fraction(1)})

    # -- algebra ----------------------------------------------------------
    def _as_dict(self):
        return {(t.exponent_weights, t.shift): t.coefficient for t in self.terms}

    def __add__(self, other: "SymbolicNumerator") -> "SymbolicNumerator":
        self._check(other)
        d = self._as_dict()
        for t in other.terms:
            key = (t.exponent_weights, t.shift)
            d[key] = d.get(key, Fraction(0)) + t.coefficient
        return SymbolicNumerator(self.n_params, d)

    def __neg__(self):
        return SymbolicNumerator(self.n_params, {k: -c for k, c in self._as_dict().items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "SymbolicNumerator") -> "SymbolicNumerator":
        self._check(other)
        d: dict = {}
        for s in self.terms:
            for t in other.terms:
                w = tuple(x + y for x, y in zip(s.exponent_weights, t.exponent_weights))
                key = (w, s.shift + t.shift)
                d[key] = d.get(key, Fraction(0)) + s.coefficient * t.coefficient
        return SymbolicNumerator(self.n_params, d)

    def _check(self, other):
        if self.n_params != other.n_params:
            raise ValueError("parameter count mismatch")

    def substitute_affine(self, matrix: Sequence[Sequence[int]], offsets: Sequence[int]) -> "SymbolicNumerator":
        """Rewrite parameters ``l_i = sum_j matrix[i][j] * u_j + offsets[i]``."""
        if len(matrix) != self.n_params:
            raise ValueError("matrix must have one row per parameter")
        n_new = len(matrix[0]) if matrix else 0
        d: dict = {}
        for t in self.terms:
            w = tuple(sum(t.exponent_weights[i] * matrix[i][j] for i in range(self.n_params))
                      for j in range(n_new))
            b = t.shift + sum(a * o for a, o in zip(t.exponent_weights, offsets))
            d[(w, b)] = d.get((w, b), Fraction(0)) + t.coefficient
        return SymbolicNumerator(n_new, d)

    def instantiate(self, params: Sequence[int]) -> dict[int, Fraction]:
        """Laurent polynomial ``{exponent: coefficient}`` at concrete parameter values."""
        out: dict[int, Fraction] = {}
        for t in self.terms:
            e = t.exponent_at(params)
            out[e] = out.get(e, Fraction(0)) + t.coefficient
        return {e: c for e, c in out.items() if c}

    def instantiate_dense(self, params: Sequence[int]) -> list[Fraction]:
        sparse = self.instantiate(params)
        if not sparse:
            return []
        if min(sparse) < 0:
            raise ValueError("negative exponent at these parameter values")
        out = [Fraction(0)] * (max(sparse) + 1)
        for e, c in sparse.items():
            out[e] = c
        return out

    def groups(self) -> dict[tuple[int, ...], list[SymbolicTerm]]:
        """Terms grouped by their parameter part (weight vector)."""
        g: dict = {}
        for t in self.terms:
            g.setdefault(t.exponent_weights, []).append(t)
        return g

    def __eq__(self, other):
        return isinstance(other, SymbolicNumerator) and self.n_params == other.n_params \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.n_params, self.terms))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"SymbolicNumerator({self.n_params}, {len(self.terms)} terms)"

    def __str__(self):
        return format_numerator(self)


def format_numerator(num: SymbolicNumerator, names: Sequence[str] | None = None) -> str:
    if names is None:
        names = ["l"] if num.n_params == 1 else [f"l{i + 1}" for i in range(num.n_params)]
    parts = []
    for t in num.terms:
        lin = []
        for a, v in zip(t.exponent_weights, names):
            if a:
                lin.append(v if a == 1 else f"-{v}" if a == -1 else f"{a}{v}")
        if t.shift or not lin:
            lin.append(str(t.shift))
        expo = "+".join(lin).replace("+-", "-")
        c = t.coefficient
        mono = "1" if expo == "0" else f"q^({expo})"
        if c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def expand_gaussian_numerator(n_params: int, m: int) -> SymbolicNumerator:
    """``(1 - q^(l+1)) ... (1 - q^(l+m))`` in the first of ``n_params`` parameters."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if n_params < 1:
        raise ValueError("need at least one parameter")
    w = (1,) + (0,) * (n_params - 1)
    return SymbolicNumerator.q_pochhammer(w, 0, m)


def gaussian_denominator(m: int) -> tuple[int, ...]:
    """Exponents ``(1, ..., m)`` of ``(q;q)_m``."""
    return tuple(range(1, m + 1))


@dataclass(frozen=True)
class SZCase:
    """One of the twenty ``m = 7`` cases: ``l = 5 l1 + lam``, ``b = 7 l1 + lam - b1``."""

    lam: int
    b1: int

    def __post_init__(self):
        if not 0 <= self.lam < 5:
            raise ValueError("lam must be in 0..4")
        if self.b1 not in (0, 2, 4, 6):
            raise ValueError("b1 must be one of 0, 2, 4, 6")

    def l_of(self, l1: int) -> int:
        return 5 * l1 + self.lam

    def b_of(self, l1: int) -> int:
        return 7 * l1 + self.lam - self.b1

    @property
    def shift(self) -> int:
        # (7l - 5b)/2 after substitution
        return self.lam + 5 * self.b1 // 2


def sz_cases_m7() -> list[SZCase]:
    return [SZCase(lam, b1) for b1 in (0, 2, 4, 6) for lam in range(5)]


def build_sz_numerator(m: int, case: SZCase | None = None) -> SymbolicNumerator:
    """Numerator ``N`` with ``N / (q;q)_m`` equal to the Stanley-Zanello difference.

    For ``m = 6`` the parameters are ``(l, b)`` and
    ``N = (q^(l+1);q)_6 - q^(3l-2b) (q^(b+1);q)_4 (1-q^5)(1-q^6)``.
    For ``m = 7`` the single parameter is ``l1`` for the given case.
    """
    if m == 6:
        first = SymbolicNumerator.q_pochhammer((1, 0), 0, 6)
        tail = SymbolicNumerator.constant_poly(2, [1, 0, 0, 0, 0, -1]) * \
            SymbolicNumerator.constant_poly(2, [1, 0, 0, 0, 0, 0, -1])
        second = SymbolicNumerator.monomial((3, -2)) * SymbolicNumerator.q_pochhammer((0, 1), 0, 4) * tail
        return first - second
    if m == 7:
        if case is None:
            raise ValueError("m = 7 needs an SZCase")
        first = SymbolicNumerator.q_pochhammer((5,), case.lam, 7)
        tail = SymbolicNumerator.constant_poly(1, [1, 0, 0, 0, 0, 0, -1]) * \
            SymbolicNumerator.constant_poly(1, [1, 0, 0, 0, 0, 0, 0, -1])
        second = SymbolicNumerator.monomial((0,), case.shift) * \
            SymbolicNumerator.q_pochhammer((7,), case.lam - case.b1, 5) * tail
        return first - second
    raise ValueError(f"unsupported m = {m}; only 6 and 7 are implemented")
