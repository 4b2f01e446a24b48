"""Shared brute-force comparisons used by the unit and acceptance tests."""
import time
from contextlib import contextmanager

from qunimodal.cad import QueryFormula, decide
from qunimodal.closedform import gaussian_difference
from qunimodal.exceptions import window_region
from qunimodal.intpoints import integer_failures
from qunimodal.residues import CaseReducer, effective_moduli, enumerate_cases


def residue_queries(m, d, L_margin, U_margin, l_low=1):
    """Every (case, piece) query of the d-strict problem with full moduli."""
    pw = gaussian_difference(m)
    moduli = effective_moduli(pw, reduce=False)
    red = CaseReducer(pw, moduli)
    for case in enumerate_cases(pw, reducer=red):
        win = window_region(m, L_margin, U_margin, case.residues[1], l_low, None)
        win_p = win.substitute(red.names, red.images(case.residues))
        for region, poly in case.pieces:
            yield case, QueryFormula.build(region & win_p, poly, d)


def brute_failures(q, lp_max):
    """Integer points of ``q.region`` with ``l' <= lp_max`` where the goal is negative."""
    lo_k, hi_k = q.region.bounds(0)
    lo_k = -5 if lo_k is None else int(lo_k) - 1
    hi_k = int(hi_k) + 1 if hi_k is not None else None
    out = set()
    for lp in range(0, lp_max + 1):
        top = hi_k if hi_k is not None else 10 * lp_max + 10
        for kp in range(lo_k, top + 1):
            p = (kp, lp)
            if q.region.contains(p) and q.goal_value(p) < 0:
                out.add(p)
    return out


def enumerated_failures(res, lp_max):
    """Points and family members of an ``IntegerFailures`` with ``l' <= lp_max``."""
    out = {p for p in res.points if p[1] <= lp_max}
    for fam in res.families:
        if fam.step[1] <= 0:
            raise AssertionError(f"family does not grow in l': {fam}")
        j = 0
        while fam.member(j)[1] <= lp_max:
            out.add(fam.member(j))
            j += 1
    return out


def decide_agrees_with_enumeration(m, d, L_margin, U_margin, lp_max=20):
    """Compare every residue case with brute force over ``l' <= lp_max``.

    Returns ``(disagreements, stats)``.  The decision itself must agree in
    every case: Proven means no integer failure, and every failing cell's
    sample must violate the goal.  Where the integer extraction resolves, its
    enumerated points and families must equal the brute-force set exactly;
    unresolved extractions are counted in ``stats`` rather than compared.
    """
    bad = []
    stats = {"queries": 0, "proven": 0, "unresolved": 0}
    for case, q in residue_queries(m, d, L_margin, U_margin):
        if not q.region.is_feasible():
            continue
        stats["queries"] += 1
        brute = brute_failures(q, lp_max)
        verdict = decide(q)
        if verdict.proven:
            stats["proven"] += 1
            if brute:
                bad.append((case.residues, "proven but integer failures", sorted(brute)[:3]))
        else:
            for cell in verdict.cells:
                s = cell.original_sample()
                if not q.region.contains(s) or q.goal_value(s) >= 0:
                    bad.append((case.residues, "cell sample does not fail", s))
        res = integer_failures(q)
        if res.unresolved:
            stats["unresolved"] += 1
            continue
        got = enumerated_failures(res, lp_max)
        if got != brute:
            bad.append((case.residues, "integer sets differ", sorted(brute ^ got)[:5]))
    return bad, stats


# criterion number -> (passed, seconds, detail); printed by conftest after the run
ACCEPTANCE = {}


@contextmanager
def criterion(n, budget=None):
    """Time a block and record it as acceptance criterion ``n``.

    The block may add text to the yielded list; exceeding ``budget`` seconds
    fails the criterion after the block's own assertions have passed.
    """
    notes = []
    t0 = time.perf_counter()
    try:
        yield notes
    except BaseException as exc:
        ACCEPTANCE[n] = (False, time.perf_counter() - t0, "; ".join(notes + [_short(exc)]))
        raise
    dt = time.perf_counter() - t0
    if budget is not None and dt > budget:
        ACCEPTANCE[n] = (False, dt, "; ".join(notes + [f"over the {budget} s budget"]))
        raise AssertionError(f"criterion {n} took {dt:.1f} s, budget {budget} s")
    ACCEPTANCE[n] = (True, dt, "; ".join(notes))


def _short(exc):
    text = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
    return text[:160]
