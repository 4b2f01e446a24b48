"""Integer failure extraction against brute-force enumeration."""
import random
from itertools import product

import pytest

from qunimodal.cad import QueryFormula
from qunimodal.intpoints import IntFamily, integer_failures
from qunimodal.linear import LinearForm, Region, ge

KL = ("k'", "l'")


def _brute(q, box):
    return {p for p in product(*(range(a, b + 1) for a, b in box))
            if q.region.contains(p) and q.goal_value(p) < 0}


def test_random_bounded_problems():
    rng = random.Random(11)
    for _ in range(60):
        cons = [ge(LinearForm((1, 0))), ge(LinearForm((0, 1))),
                ge(LinearForm((-1, 0), rng.randint(3, 12))), ge(LinearForm((0, -1), rng.randint(3, 12)))]
        if rng.random() < 0.5:
            cons.append(ge(LinearForm((rng.randint(-3, 3), rng.randint(-3, 3)), rng.randint(0, 20))))
        region = Region(KL, cons)
        goal = {(i, j): rng.randint(-3, 3) for i, j in product(range(3), repeat=2) if i + j <= 2}
        q = QueryFormula.build(region, goal)
        res = integer_failures(q)
        assert not res.unresolved and not res.families
        assert res.points == _brute(q, [(0, 12), (0, 12)])


def test_linear_strip_gives_family():
    # 0 <= k' <= 3l'/2 and goal 3l' - 2k' - 2 >= 0 fails exactly when 2k' = 3l' - 1 ... 3l'
    region = Region(KL, [ge(LinearForm((1, 0))), ge(LinearForm((-2, 3))), ge(LinearForm((0, 1)))])
    q = QueryFormula.build(region, {(0, 1): 3, (1, 0): -2, (0, 0): -2})
    res = integer_failures(q)
    members = {p for p in res.points}
    for fam in res.families:
        members |= {fam.member(j) for j in range(30) if fam.member(j)[1] <= 30}
    members = {p for p in members if p[1] <= 30}
    assert not res.unresolved
    assert members == _brute(q, [(0, 60), (0, 30)])


def test_family_member():
    f = IntFamily((10, 8), (18, 12))
    assert [f.member(j) for j in range(3)] == [(10, 8), (28, 20), (46, 32)]


def test_empty_real_cell_has_no_integers():
    # 2/9 < l' < 1/3 contains no integer
    region = Region(KL, [ge(LinearForm((0, 9), -2)), ge(LinearForm((0, -3), 1)), ge(LinearForm((1, 0)))])
    q = QueryFormula.build(region, {(0, 0): -1})
    assert integer_failures(q).empty


@pytest.mark.parametrize("seed", range(5))
def test_one_variable(seed):
    rng = random.Random(seed)
    names = ("x",)
    lo, hi = rng.randint(-10, 0), rng.randint(1, 10)
    region = Region(names, [ge(LinearForm((1,), -lo)), ge(LinearForm((-1,), hi))])
    roots = [rng.randint(-12, 12) for _ in range(2)]
    goal = {(2,): 1, (1,): -(roots[0] + roots[1]), (0,): roots[0] * roots[1]}
    q = QueryFormula.build(region, goal)
    res = integer_failures(q)
    assert res.points == {(x,) for x in range(lo, hi + 1) if (x - roots[0]) * (x - roots[1]) < 0}


def test_strip_with_irrational_horizontal_walls():
    # 3k'^2 - 8k' + 2 < 0 exactly for 0.279... < k' < 2.387..., for every l'
    region = Region(KL, [ge(LinearForm((1, 0))), ge(LinearForm((-1, 0), 5)), ge(LinearForm((0, 1)))])
    q = QueryFormula.build(region, {(2, 0): 3, (1, 0): -8, (0, 0): 2, (0, 1): 0})
    res = integer_failures(q)
    assert not res.unresolved
    assert sorted(f.base[0] for f in res.families) == [1, 2]
    got = {p for p in enumerated(res, 25)}
    assert got == _brute(q, [(0, 5), (0, 25)])


def enumerated(res, lp_max):
    out = {p for p in res.points if p[1] <= lp_max}
    for fam in res.families:
        out |= {fam.member(j) for j in range(lp_max + 1) if fam.member(j)[1] <= lp_max}
    return out
