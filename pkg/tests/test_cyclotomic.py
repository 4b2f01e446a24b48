"""Exact arithmetic in Q(w): cyclotomic polynomials, field axioms, inverses, solving."""
import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qunimodal.cyclotomic import (
    CyclotomicNumber, SingularMatrixError, cyc_add, cyc_inverse, cyc_mul, cyc_neg,
    cyclotomic_polynomial, format_rational, omega, parse_rational, power_of_omega,
    solve_linear_system, totient,
)
from qunimodal.oracle import poly_mul


def test_small_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1).coeffs == (-1, 1)
    assert cyclotomic_polynomial(6).coeffs == (1, -1, 1)
    assert cyclotomic_polynomial(12).coeffs == (1, 0, -1, 0, 1)


@pytest.mark.parametrize("L", [1, 2, 6, 12, 30, 60, 105, 210, 420])
def test_product_over_divisors_is_x_to_the_L_minus_one(L):
    acc = [1]
    for d in range(1, L + 1):
        if L % d == 0:
            acc = poly_mul(acc, cyclotomic_polynomial(d).coeffs)
    assert acc == [-1] + [0] * (L - 1) + [1]


@pytest.mark.parametrize("L", [5, 9, 12, 15, 20, 36, 60, 84])
def test_against_sympy(L):
    x = sympy.Symbol("x")
    ref = sympy.Poly(sympy.cyclotomic_poly(L, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(L).coeffs) == [int(c) for c in ref]
    assert totient(L) == sympy.totient(L)


def test_product_reduction_example():
    w = omega(6)
    assert (w + 1) * (w - 1) == w - 2
    assert w * power_of_omega(5, 6) == 1


def test_omega_powers():
    for L in (6, 12, 60):
        assert power_of_omega(0, L) == 1
        assert power_of_omega(L, L) == 1
        assert power_of_omega(-1, L) == power_of_omega(L - 1, L)
        w = omega(L)
        assert w ** L == 1
        assert all(w ** e != 1 for e in range(1, L))


def test_omega_numerically():
    for L in (6, 12, 60):
        for e in range(L):
            z = power_of_omega(e, L).to_complex()
            assert abs(z - cmath.exp(2j * cmath.pi * e / L)) < 1e-9


def test_inverse_examples():
    assert CyclotomicNumber.rational(6, 2).inverse() == Fraction(1, 2)
    w = omega(6)
    assert w * w.inverse() == 1
    assert w.inverse() == power_of_omega(5, 6)
    v = (w - 1).inverse()
    assert (w - 1) * v == 1
    with pytest.raises(ZeroDivisionError):
        CyclotomicNumber.zero(6).inverse()


def _element(L):
    n = totient(L)
    return st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7),
                    min_size=n, max_size=n).map(lambda c: CyclotomicNumber(L, c))


@pytest.mark.parametrize("L", [6, 12, 60])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_field_axioms(L, data):
    a, b, c = (data.draw(_element(L)) for _ in range(3))
    zero, one = CyclotomicNumber.zero(L), CyclotomicNumber.one(L)
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + zero == a and a * one == a
    assert cyc_add(a, cyc_neg(a)) == zero
    if not a.is_zero():
        assert cyc_mul(a, cyc_inverse(a)) == one
    assert (a * b).to_complex() == pytest.approx(a.to_complex() * b.to_complex(), abs=1e-6)


@pytest.mark.parametrize("L", [6, 12, 60, 420])
def test_inverse_large_orders(L):
    w = omega(L)
    a = w ** 3 + 2 * w - Fraction(1, 3)
    assert a * a.inverse() == 1


def test_text_round_trip():
    a = CyclotomicNumber(12, [Fraction(-1, 3), 2, 0, Fraction(5, 7)])
    assert CyclotomicNumber.from_text(12, a.to_text()) == a
    assert parse_rational(format_rational(Fraction(-7, 9))) == Fraction(-7, 9)


def test_solve_identity():
    L = 6
    one, zero = CyclotomicNumber.one(L), CyclotomicNumber.zero(L)
    A = [[one if i == j else zero for j in range(3)] for i in range(3)]
    b = [omega(L), one * 3, omega(L) - 2]
    assert solve_linear_system(A, b) == b


def test_solve_denominator_system():
    # d_k = c0 + c1 k + c2 k^2 + c3 w^(3k) + c4 w^(2k) + c5 w^(4k) for 1/((1-q)(1-q^2)(1-q^3))
    L = 6
    d = [1, 1, 2, 3, 4, 5]
    A = [[CyclotomicNumber.rational(L, 1), CyclotomicNumber.rational(L, k), CyclotomicNumber.rational(L, k * k),
          power_of_omega(3 * k, L), power_of_omega(2 * k, L), power_of_omega(4 * k, L)] for k in range(6)]
    b = [CyclotomicNumber.rational(L, v) for v in d]
    x = solve_linear_system(A, b)
    assert x == [Fraction(47, 72), Fraction(1, 2), Fraction(1, 12), Fraction(1, 8), Fraction(1, 9), Fraction(1, 9)]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4),
       st.lists(st.integers(-9, 9), min_size=4, max_size=4))
def test_solve_random_rational_residual(rows, rhs):
    L = 12
    A = [[CyclotomicNumber.rational(L, v) for v in row] for row in rows]
    b = [CyclotomicNumber.rational(L, v) for v in rhs]
    if sympy.Matrix(rows).det() == 0:
        with pytest.raises(SingularMatrixError):
            solve_linear_system(A, b)
        return
    x = solve_linear_system(A, b)
    for row, bi in zip(A, b):
        assert sum((a * xi for a, xi in zip(row, x)), CyclotomicNumber.zero(L)) == bi


def test_singular_matrix():
    L = 6
    w = omega(L)
    A = [[w, w * 2], [w * 3, w * 6]]
    with pytest.raises(SingularMatrixError):
        solve_linear_system(A, [w, w])
