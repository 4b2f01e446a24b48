"""Residue case splitting: moduli, case counts, reduction and coverage."""
import random
from itertools import product

import pytest

from qunimodal.cad import poly_eval
from qunimodal.closedform import gaussian_difference
from qunimodal.oracle import gaussian_coefficients
from qunimodal.residues import (
    CaseReducer, case_count, effective_moduli, enumerate_cases, index_of_residues, reduce_case,
    residues_of_index,
)
from qunimodal.sz import sz_difference_form


@pytest.fixture(scope="module")
def m3():
    return gaussian_difference(3)


@pytest.fixture(scope="module")
def m4():
    return gaussian_difference(4)


def test_moduli_m3(m3):
    assert effective_moduli(m3, reduce=False) == (6, 6)
    assert case_count(m3, effective_moduli(m3, reduce=False)) == 36
    assert effective_moduli(m3) == (6, 2)


def test_moduli_sz6():
    pw = sz_difference_form(6)
    assert pw.order == 60
    assert effective_moduli(pw) == (60, 60, 6)
    assert case_count(pw) == 21600


def test_moduli_without_omega():
    from qunimodal.closedform import ExpPolynomial, Piece, PiecewiseClosedForm
    from qunimodal.linear import LinearForm, Region, ge
    r = Region(("k", "l"), [ge(LinearForm((1, 0)))])
    pw = PiecewiseClosedForm(("k", "l"), 6, [Piece(r, ExpPolynomial.constant(6, ("k", "l"), 3), r)], r)
    assert effective_moduli(pw) == (1, 1)
    case = reduce_case(pw, (0, 0))
    assert case.pieces[0][1].format() == "3"


def test_case_4_2(m3):
    case = CaseReducer(m3, effective_moduli(m3, reduce=False)).reduce((4, 2))
    assert [p.format() for _, p in case.pieces] == ["k' + 1", "3*l' - 2*k' - 1"]
    assert [r.format() for r, _ in case.pieces] == [
        "-2*k'+2*l'-1 >= 0 and 3*k'+2 >= 0", "-6*k'+9*l'-2 >= 0 and 3*k'-3*l'+1 >= 0"]


@pytest.mark.parametrize("m,total", [(3, 72), (4, 288), (5, 10800)])
def test_case_times_piece_counts(m, total):
    pw = gaussian_difference(m)
    assert case_count(pw, effective_moduli(pw, reduce=False)) * len(pw.pieces) == total


def test_m3_enumeration_order_and_count(m3):
    cases = list(enumerate_cases(m3, effective_moduli(m3, reduce=False)))
    assert len(cases) == 36
    assert sum(len(c.pieces) for c in cases) == 72
    assert [c.residues for c in cases] == list(product(range(6), range(6)))


def test_index_round_trip():
    moduli = (60, 60, 6)
    for i in (0, 1, 59, 60, 3599, 21599):
        assert index_of_residues(residues_of_index(i, moduli), moduli) == i


@pytest.mark.parametrize("reduce", [True, False])
def test_m4_cases_match_oracle(m4, reduce):
    """Every residue case, five random points each, against the oracle difference."""
    moduli = effective_moduli(m4, reduce=reduce)
    red = CaseReducer(m4, moduli)
    rng = random.Random(44)
    checked = 0
    for case in enumerate_cases(m4, reducer=red):
        for _ in range(5):
            lp = rng.randint(0, 4)
            l = case.original_point((0, lp))[1]
            top = (2 * l - 1 - case.residues[0]) // moduli[0]
            if l < 1 or top < 0:
                continue
            primed = (rng.randint(0, top), lp)
            k = case.original_point(primed)[0]
            hits = [poly for region, poly in case.pieces if region.contains(primed)]
            assert len(hits) == 1
            c = gaussian_coefficients(l, 4).coeffs
            assert poly_eval(hits[0].as_dict(), primed) == c[k + 1] - c[k]
            checked += 1
    assert checked > 2 * red.total


def test_coverage_m3(m3):
    """Each point of the window lies in exactly one (case, piece)."""
    moduli = effective_moduli(m3, reduce=False)
    cases = {c.residues: c for c in enumerate_cases(m3, moduli)}
    L = 6
    for l in range(1, 3 * L + 1):
        for k in range(0, (3 * l) // 2):
            res = (k % 6, l % 6)
            primed = (k // 6, l // 6)
            hits = [p for r, p in cases[res].pieces if r.contains(primed)]
            assert len(hits) == 1, (k, l)
            c = gaussian_coefficients(l, 3).coeffs
            assert poly_eval(hits[0].as_dict(), primed) == c[k + 1] - c[k]


def test_bad_residues_rejected(m3):
    with pytest.raises(ValueError):
        reduce_case(m3, (6, 0), (6, 6))
