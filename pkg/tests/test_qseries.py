"""Truncated q-series, symbolic numerators and their instantiation."""
import random
from fractions import Fraction

import pytest

from qunimodal.oracle import gaussian_coefficients, poly_mul, sz_difference
from qunimodal.qseries import (
    DenseQPolynomial, SZCase, SymbolicNumerator, build_sz_numerator, expand_gaussian_numerator,
    format_numerator, gaussian_denominator, sz_cases_m7, taylor_inverse,
)


def _parts_at_most(m, n):
    """Partitions of 0..n-1 into parts <= m by the standard coin DP."""
    c = [1] + [0] * (n - 1)
    for part in range(1, m + 1):
        for i in range(part, n):
            c[i] += c[i - part]
    return c


def test_taylor_inverse_examples():
    D = DenseQPolynomial.from_exponents((1, 2, 3))
    assert taylor_inverse(D, 7) == [1, 1, 2, 3, 4, 5, 7]
    assert taylor_inverse(DenseQPolynomial.from_exponents((1,)), 4) == [1, 1, 1, 1]
    D5 = DenseQPolynomial.from_exponents(range(1, 6))
    assert taylor_inverse(D5, 20) == _parts_at_most(5, 20)


def test_taylor_inverse_needs_unit_constant_term():
    with pytest.raises(ValueError):
        taylor_inverse([2, 1], 3)


def test_gaussian_numerator_m3_and_m1():
    assert format_numerator(expand_gaussian_numerator(1, 3), ["l"]) == (
        "1 - q^(l+1) - q^(l+2) - q^(l+3) + q^(2l+3) + q^(2l+4) + q^(2l+5) - q^(3l+6)")
    assert format_numerator(expand_gaussian_numerator(1, 1), ["l"]) == "1 - q^(l+1)"


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_gaussian_numerator_matches_direct_product(m):
    num = expand_gaussian_numerator(1, m)
    rng = random.Random(m)
    for _ in range(6):
        l = rng.randint(0, 12)
        # (q^(l+1); q)_m expanded factor by factor in reverse order
        direct = [1]
        for i in range(m, 0, -1):
            direct = poly_mul(direct, [1] + [0] * (l + i - 1) + [-1])
        got = num.instantiate_dense([l])
        assert got == [Fraction(x) for x in direct]


@pytest.mark.parametrize("m", [3, 4, 5])
def test_numerator_over_denominator_gives_gaussian(m):
    num = expand_gaussian_numerator(1, m)
    D = DenseQPolynomial.from_exponents(gaussian_denominator(m))
    rng = random.Random(100 + m)
    for _ in range(10):
        l = rng.randint(0, 10)
        n = l * m + 1
        series = taylor_inverse(D, n)
        N = num.instantiate_dense([l]) + [Fraction(0)] * n
        coeffs = [sum(N[j] * series[i - j] for j in range(i + 1)) for i in range(n)]
        assert coeffs == list(gaussian_coefficients(l, m).coeffs)


def test_sz6_numerator_support():
    groups = build_sz_numerator(6).groups()
    assert set(groups) == {(0, 0), (1, 0), (2, 0), (3, -2), (3, -1), (3, 0), (3, 1), (3, 2),
                           (4, 0), (5, 0), (6, 0)}


def test_sz7_numerator_group():
    num = build_sz_numerator(7, SZCase(4, 4))
    g = num.groups()[(5,)]
    assert sorted((t.shift, t.coefficient) for t in g) == [(s, -1) for s in range(5, 12)]


def test_sz6_numerator_instantiation_matches_oracle():
    num = build_sz_numerator(6)
    D = DenseQPolynomial.from_exponents(range(1, 7))
    for l, b in [(4, 2), (3, 1), (5, 7), (6, 0)]:
        n = 6 * l + 1
        series = taylor_inverse(D, n)
        N = num.instantiate_dense([l, b]) + [Fraction(0)] * n
        coeffs = [sum(N[j] * series[i - j] for j in range(i + 1)) for i in range(n)]
        ref = sz_difference(l, 6, b)
        assert coeffs == [Fraction(x) for x in ref] + [0] * (n - len(ref))


def test_sz7_cases():
    cases = sz_cases_m7()
    assert len(cases) == 20
    c = SZCase(4, 4)
    assert (c.l_of(3), c.b_of(3)) == (19, 21)
    with pytest.raises(ValueError):
        SZCase(5, 0)
    with pytest.raises(ValueError):
        SZCase(0, 1)


def test_pochhammer_and_substitution():
    p = SymbolicNumerator.q_pochhammer((1,), 0, 2)  # (1 - q^(l+1))(1 - q^(l+2))
    assert p.instantiate_dense([0]) == [1, -1, -1, 1]
    s = p.substitute_affine([[2]], [1])  # l -> 2l + 1
    assert s.instantiate_dense([1]) == p.instantiate_dense([3])
