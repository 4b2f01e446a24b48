"""d-strict prover: exception sets, families, merging, margins, induction."""
import pytest

from qunimodal.exceptions import (
    ExceptionRecord, consolidate, format_int_set, induction_coverage, margin_search, merge_families,
    prove_d_strict,
)
from qunimodal.oracle import d_strict_violations, gaussian_coefficients

from published_data import EXCEPTIONS, MARGINS


@pytest.fixture(scope="module")
def m3_family_report():
    return prove_d_strict(3, 1, 1, 0)


def _prover_points(rep, l_max):
    out = set()
    for e in rep.exceptions:
        if e.kind == "point" and e.l <= l_max:
            out.add((e.l, e.k))
        elif e.kind == "family":
            j = 0
            while e.member(j)["l"] <= l_max:
                out.add((e.member(j)["l"], e.member(j)["k"]))
                j += 1
    return out


@pytest.mark.parametrize("d,m", [(1, 3), (2, 3), (1, 4), (2, 4), (3, 3)])
def test_small_rows(d, m):
    L, U = MARGINS[(d, m)]
    rep = prove_d_strict(m, d, L, U)
    assert rep.status == "Proven"
    assert set(rep.exception_ls()) == EXCEPTIONS[(d, m)]
    assert not rep.families()


def test_family_members_violate(m3_family_report):
    rep = m3_family_report
    assert rep.status == "Proven"
    assert rep.families()
    for f in rep.families():
        for j in range(20):
            p = f.member(j)
            c = gaussian_coefficients(p["l"], 3).coeffs
            assert c[p["k"] + 1] - c[p["k"]] < 1


def test_published_family_is_covered(m3_family_report):
    fams = m3_family_report.families()
    for j in range(20):
        k, l = 18 * j + 10, 12 * j + 8
        assert any(any(f.member(i) == {"k": k, "l": l} for i in range(l + 1)) for f in fams)


def test_family_report_matches_oracle(m3_family_report):
    rep = m3_family_report
    oracle = {(l, k) for l in range(1, 41) for k in d_strict_violations(l, 3, 1, 1, 0)}
    empty = {e.l for e in rep.exceptions if e.kind == "empty-window"}
    assert _prover_points(rep, 40) == oracle
    assert all((3 * l) // 2 - 1 < 1 for l in empty)


def test_moduli_reduction_is_sound():
    a = prove_d_strict(3, 1, 1, 0, reduce_moduli=False)
    b = prove_d_strict(3, 1, 1, 0, reduce_moduli=True)
    assert a.cases_total == 36 and b.cases_total == 12
    assert [e.to_json() for e in a.exceptions] == [e.to_json() for e in b.exceptions]


def test_parallel_equals_serial():
    a = prove_d_strict(4, 1, 1, 2, jobs=1)
    b = prove_d_strict(4, 1, 1, 2, jobs=2)
    ja, jb = a.to_json(), b.to_json()
    ja.pop("metadata"), jb.pop("metadata")
    assert ja == jb


def test_report_is_deterministic():
    a, b = prove_d_strict(3, 2, 7, 6).to_json(), prove_d_strict(3, 2, 7, 6).to_json()
    assert a["metadata"].keys() == b["metadata"].keys()
    a.pop("metadata"), b.pop("metadata")
    assert a == b
    assert a["status"] == "Proven" and a["exceptions"] == []


def test_case_slice_and_resume():
    full = prove_d_strict(3, 1, 1, 0)
    part = prove_d_strict(3, 1, 1, 0, cases=range(0, 18))
    assert part.cases_run == 18
    seen = {}
    prove_d_strict(3, 1, 1, 0, cases=range(0, 18), on_case=lambda r: seen.__setitem__(r.index, r))
    resumed = prove_d_strict(3, 1, 1, 0, done=seen)
    a, b = full.to_json(), resumed.to_json()
    a.pop("metadata"), b.pop("metadata")
    assert a == b


def test_threshold_choice_does_not_change_result():
    a = prove_d_strict(4, 2, 5, 2)
    b = prove_d_strict(4, 2, 5, 2, threshold=12)
    assert a.exception_ls() == b.exception_ls() == sorted(EXCEPTIONS[(2, 4)])


def test_merge_families():
    fams = [((2, 2), (6, 4)), ((5, 4), (6, 4))]
    assert merge_families(fams) == [((2, 2), (3, 2))]
    assert merge_families([((0, 1), (4, 4)), ((1, 2), (4, 4))]) == [((0, 1), (4, 4)), ((1, 2), (4, 4))]
    assert merge_families(fams + fams) == merge_families(fams)


def test_consolidate_extends_downward():
    pts = {(4, 4), (7, 6), (1, 2), (100, 1)}
    got_pts, fams = consolidate(pts, [((10, 8), (3, 2))])
    assert fams == [((1, 2), (3, 2))]
    assert got_pts == {(100, 1)}


def test_record_json_round_trip():
    recs = [ExceptionRecord("point", l=4, k=6), ExceptionRecord("empty-window", l=1),
            ExceptionRecord("family", family=(("k", 18, 10), ("l", 12, 8))),
            ExceptionRecord("unresolved", detail="cell")]
    for r in recs:
        assert ExceptionRecord.from_json(r.to_json()) == r
    assert recs[2].family_text() == "(k, l) = (18j+10, 12j+8), j >= 0"
    assert recs[2].member(1) == {"k": 28, "l": 20}


def test_format_int_set():
    assert format_int_set([1, 2, 3, 4, 6, 10, 14]) == "1,...,4, 6, 10, 14"
    assert format_int_set([]) == ""


def test_margin_validation():
    with pytest.raises(ValueError):
        prove_d_strict(3, 1, -1, 0)
    with pytest.raises(ValueError):
        prove_d_strict(9, 1)


def test_induction_coverage():
    cov = induction_coverage(8, 1, 30)
    for (l, m), e in cov.items():
        if m in (7, 8):
            assert e.status == "assumed" and not e.sources
        else:
            assert (l + m) % 2 == 1
            assert e.status in ("derived", "symmetric")
    want = {(l, m) for l in range(9, 31) for m in range(9, 31) if (l + m) % 2}
    assert want <= set(cov)


def test_induction_conditions_are_exact():
    from qunimodal.oracle import L_of_d
    cov = induction_coverage(12, 13, 24)
    Ld = L_of_d(13)
    for (l, m), e in cov.items():
        if e.status == "derived":
            extra = l if l % 2 == 0 else m
            assert e.holds and (l + 1) * (m - 1) // 2 >= Ld + extra
            assert f"= {(l + 1) * (m - 1) // 2} >=" in e.condition
    with pytest.raises(ValueError):
        induction_coverage(7, 1, 20)
    with pytest.raises(ValueError):
        induction_coverage(8, 13, 20)


@pytest.mark.parametrize("m,d", [(3, 1), (3, 3), (4, 1), (4, 2)])
def test_margin_search_matches_published(m, d):
    res = margin_search(m, d)
    assert res.finite and (res.L_margin, res.U_margin) == MARGINS[(d, m)]
    if m == 4:
        # the upper-edge strip at U = 0 has a curved wall and is reported, not guessed
        assert res.history[0]["unresolved"] > 0
