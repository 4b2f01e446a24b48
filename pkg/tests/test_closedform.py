"""Exponential-polynomial closed forms and their piecewise assembly."""
import random
from fractions import Fraction

import pytest

from qunimodal.closedform import (
    ExpPolynomial, PiecewiseClosedForm, expand_denominator, forward_difference, gaussian_difference,
    gaussian_piecewise, validity_floor,
)
from qunimodal.linear import Region, ge, LinearForm
from qunimodal.oracle import gaussian_coefficients, sz_difference
from qunimodal.qseries import DenseQPolynomial, SZCase, taylor_inverse
from qunimodal.sz import sz6_piecewise, sz7_piecewise, sz_difference_form

M3_D = "[(47/72) + (1/2)*k + (1/12)*k^2] + [(1/9)]*w^(2*k) + [(1/8)]*w^(3*k) + [(1/9)]*w^(4*k)"


def test_denominator_123():
    e = expand_denominator((1, 2, 3))
    assert e.order == 6
    assert e.format() == M3_D
    assert validity_floor(e) == -5


def test_denominator_trivial():
    e = expand_denominator((1,))
    assert e.order == 1
    assert all(e.evaluate([k]) == 1 for k in range(10))


@pytest.mark.parametrize("exps", [(1, 2, 3), (1, 2, 3, 4), (1, 2, 3, 4, 5), (1, 2, 3, 4, 5, 6)])
def test_denominator_matches_taylor(exps):
    e = expand_denominator(exps)
    series = taylor_inverse(DenseQPolynomial.from_exponents(exps), 60)
    assert [e.evaluate([k]) for k in range(60)] == series
    # zero on the validity floor
    assert all(e.evaluate([k]) == 0 for k in range(validity_floor(e), 0))


def test_validity_floors():
    assert validity_floor(expand_denominator(range(1, 7))) == -20
    assert validity_floor(expand_denominator(range(1, 8))) == -27


def test_forward_and_backward_variants_agree():
    a = expand_denominator((1, 2, 3, 4), "backward")
    b = expand_denominator((1, 2, 3, 4), "forward")
    assert a.format() == b.format()


def test_gaussian_m3_pieces():
    pw = gaussian_piecewise(3)
    assert [p.region.format() for p in pw.pieces] == [
        "-k+l-1 >= 0 and k >= 0", "-2*k+3*l >= 0 and l-1 >= 0 and k-l >= 0"]
    assert pw.pieces[0].expr.format() == M3_D
    assert pw.pieces[1].expr.format() == (
        "[(19/36) + (1/2)*l + (-1/4)*l^2 + (1/2)*k*l + (-1/6)*k^2] + [(1/9)]*w^(2*k) + [(1/8)]*w^(3*k)"
        " + [(1/8)]*w^(3*k+3*l) + [(1/9)]*w^(4*k)")


def test_gaussian_m3_difference_pieces():
    pw = gaussian_difference(3)
    assert pw.pieces[0].expr.format() == (
        "[(7/12) + (1/6)*k] + [(-2/9 + 1/9*w)]*w^(2*k) + [(-1/4)]*w^(3*k) + [(-1/9 - 1/9*w)]*w^(4*k)")
    assert pw.pieces[1].expr.format() == (
        "[(-1/6) + (1/2)*l + (-1/3)*k] + [(-2/9 + 1/9*w)]*w^(2*k) + [(-1/4)]*w^(3*k)"
        " + [(-1/4)]*w^(3*k+3*l) + [(-1/9 - 1/9*w)]*w^(4*k)")


def test_difference_of_constant_is_zero():
    region = Region(("k", "l"), [ge(LinearForm((1, 0))), ge(LinearForm((0, 1)))])
    from qunimodal.closedform import Piece
    const = ExpPolynomial.constant(1, ("k", "l"), 5)
    pw = PiecewiseClosedForm(("k", "l"), 1, [Piece(region, const, region)], region)
    d = forward_difference(pw)
    for p in d.pieces:
        assert p.expr.is_zero()


@pytest.mark.parametrize("m", [3, 4, 5])
def test_gaussian_values_match_oracle(m):
    pw = gaussian_piecewise(m)
    for l in range(1, 14):
        c = gaussian_coefficients(l, m).coeffs
        for k in range(0, (l * m) // 2 + 1):
            assert pw.evaluate((k, l)) == c[k], (k, l)


def test_m4_difference_at_random_points():
    pw = gaussian_difference(4)
    rng = random.Random(4)
    for _ in range(200):
        l = rng.randint(1, 200)
        k = rng.randint(0, (4 * l) // 2 - 1)
        c = gaussian_coefficients(l, 4).coeffs
        assert pw.evaluate((k, l)) == c[k + 1] - c[k]


def test_sz6_eight_regions():
    pw = sz6_piecewise()
    assert len(pw.pieces) == 8
    assert pw.pieces[0].region.format() == "-k+l-1 >= 0 and -k+3*l-2*b-2 >= 0 and b >= 0 and k >= 0"


def test_sz7_split_points():
    pw = sz7_piecewise(SZCase(4, 4))
    lows = []
    for p in pw.pieces:
        lows.append([c.form for c in p.region.constraints if c.form.coeffs[0] == 1][0])
    # lower k-bounds k >= a*l1 + c, read off as (a, c)
    assert [(-f.coeffs[1], -f.const) for f in lows] == [(0, 0), (5, 0), (7, 5), (10, 5), (14, 9), (15, 9)]


def test_sz_difference_forms_match_oracle():
    pw = sz_difference_form(6)
    rng = random.Random(6)
    for _ in range(60):
        l = rng.randint(1, 30)
        b = rng.randint(0, (3 * l) // 2)
        c = sz_difference(l, 6, b)
        c = c + [0] * (6 * l + 2 - len(c))
        k = rng.randint(0, 3 * l - 1)
        assert pw.evaluate((k, l, b)) == c[k + 1] - c[k]
    case = SZCase(2, 2)
    pw7 = sz_difference_form(7, case)
    for l1 in range(0, 6):
        l, b = case.l_of(l1), case.b_of(l1)
        if b < 0:
            continue
        c = sz_difference(l, 7, b)
        c = c + [0] * (7 * l + 2 - len(c))
        for k in range(0, (7 * l) // 2):
            assert pw7.evaluate((k, l1)) == c[k + 1] - c[k]


def test_json_round_trip_evaluates_identically():
    pw = gaussian_difference(4)
    back = PiecewiseClosedForm.from_json(pw.to_json())
    assert back.to_json() == pw.to_json()
    rng = random.Random(1)
    for _ in range(100):
        l = rng.randint(1, 100)
        k = rng.randint(0, 2 * l - 1)
        assert back.evaluate((k, l)) == pw.evaluate((k, l))
    assert isinstance(back.evaluate((3, 5)), Fraction)
