"""Stanley-Zanello differences for ``m = 6`` and ``m = 7``.

``m = 6`` is the three-parameter problem

    [l+6 choose 6] - q^(3l-2b) [b+4 choose 4],   0 <= b <= 3l/2,

whose first half is checked for ``c_{k+1} >= c_k`` on ``0 <= k <= 3l - 1``.
``m = 7`` restricts ``b`` to the four topmost admissible values
``b = l + 2 floor(l/5) - b1`` and splits ``l = 5 l1 + lam`` so that the floor
disappears; each of the twenty ``(lam, b1)`` cases is a two-variable problem
in ``(k, l1)`` on ``0 <= 2k <= 7l - 2``.

Both come with an oracle mode (direct expansion) and a prove mode (closed
form, residue cases, CAD).  Small ``l`` below the sweep threshold are scanned
with the oracle, exactly as in the d-strict prover.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Callable, Iterable

from .cad import QueryFormula
from .closedform import PiecewiseClosedForm, assemble_piecewise, expand_denominator, forward_difference
from .exceptions import (CaseResult, ExceptionRecord, consolidate, format_int_set, map_failures,
                         run_cases)
from .intpoints import integer_failures
from .linear import LinearForm, Region, ge
from .oracle import sz_difference
from .qseries import SZCase, build_sz_numerator, sz_cases_m7
from .residues import CaseReducer, effective_moduli, residues_of_index

SZ6_NAMES = ("k", "l", "b")
SZ7_NAMES = ("k", "l1")
# first l from which the theorems claim unimodality (apart from the standing exception)
CLAIM_FROM = {6: 26, 7: 11}


# ---------------------------------------------------------------------------
# oracle side

def sz_coefficients(l: int, m: int, b: int) -> list[int]:
    """Coefficients ``c_0..c_{lm}`` of the difference, zero padded."""
    c = sz_difference(l, m, b)
    return c + [0] * (l * m + 1 - len(c))


def sz_violations(l: int, m: int, b: int) -> list[int]:
    """``k`` in the first half with ``c_{k+1} < c_k``."""
    c = sz_coefficients(l, m, b)
    return [k for k in range((l * m) // 2) if c[k + 1] < c[k]]


def is_standing(m: int, l: int, b: int, k: int) -> bool:
    """The exception excluded by the theorems: ``k = 0`` and ``b = (l m - 2)/(m - 2)``."""
    return k == 0 and (m - 2) * b == l * m - 2


def sz7_b(l: int, b1: int) -> int:
    return l + 2 * (l // 5) - b1


@dataclass
class SZOracleReport:
    """Result of the direct scan.

    ``points`` are ``(l, b, k)`` triples other than the standing exception,
    ``standing`` lists the ``(l, b)`` hitting it and ``negative`` the ``(l, b)``
    whose difference has a negative coefficient.  For ``m = 7`` ``b1`` is kept
    per point in ``b1_of``.
    """

    m: int
    l_max: int
    points: list
    standing: list
    negative: list
    b1_of: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def claim_violations(self) -> list:
        """Points at ``l >= CLAIM_FROM[m]`` (these would contradict the theorem)."""
        return [p for p in self.points if p[0] >= CLAIM_FROM[self.m]]

    def interior_triples(self) -> list:
        """``m = 6``: exceptions with ``k < 3l - 1``."""
        return sorted(p for p in self.points if p[2] != 3 * p[0] - 1)

    def top_table(self) -> dict[int, list[int]]:
        """``m = 6``: ``l -> b`` values failing at ``k = 3l - 1``."""
        out: dict[int, list[int]] = {}
        for l, b, k in self.points:
            if k == 3 * l - 1:
                out.setdefault(l, []).append(b)
        return {l: sorted(bs) for l, bs in sorted(out.items())}

    def pairs_by_b1(self) -> dict[int, list[tuple[int, int]]]:
        """``m = 7``: ``b1 -> (l, k)`` pairs, standing exception excluded."""
        out: dict[int, list] = {b1: [] for b1 in (0, 2, 4, 6)}
        for p in self.points:
            out[self.b1_of[p]].append((p[0], p[2]))
        return {b1: sorted(v) for b1, v in out.items()}

    def format(self) -> str:
        lines = [f"Stanley-Zanello m={self.m}, oracle scan for l <= {self.l_max}"]
        if self.m == 6:
            lines.append("exceptions (l, b, k) with k < 3l-1: " +
                         ", ".join(map(str, self.interior_triples())))
            lines.append("exceptions at k = 3l-1:")
            for l, bs in self.top_table().items():
                lines.append(f"  l={l}: b in {{{format_int_set(bs)}}}")
            st = "b = (3l-1)/2 at k = 0"
        else:
            for b1, pairs in self.pairs_by_b1().items():
                lines.append(f"b1={b1}: " + (", ".join(map(str, pairs)) or "-"))
            st = "b = (7l-2)/5 at k = 0"
        ls = sorted({l for l, _ in self.standing})
        lines.append(f"standing exception {st}: l in {{{format_int_set(ls)}}}")
        if self.negative:
            lines.append("negative coefficients at (l, b): " + ", ".join(map(str, self.negative)))
        bad = self.claim_violations()
        lines.append("claim check: " + ("ok" if not bad else f"violations {bad}"))
        return "\n".join(lines)

    def to_json(self) -> dict:
        d = {"config": {"m": self.m, "l_max": self.l_max, "mode": "oracle"},
             "status": "ok" if not self.claim_violations() else "mismatch",
             "exceptions": [{"l": l, "b": b, "k": k, "kind": "point"} for l, b, k in sorted(self.points)],
             "standing": [{"l": l, "b": b, "k": 0} for l, b in self.standing],
             "negative": [{"l": l, "b": b} for l, b in self.negative],
             "metadata": dict(self.metadata)}
        if self.m == 7:
            for e in d["exceptions"]:
                e["b1"] = self.b1_of[(e["l"], e["b"], e["k"])]
        return d


def sz_oracle(m: int, l_max: int, l_min: int = 0) -> SZOracleReport:
    """Scan every admissible ``(l, b)`` with ``l_min <= l <= l_max``."""
    t0 = time.perf_counter()
    points, standing, negative, b1_of = [], [], [], {}
    for l in range(l_min, l_max + 1):
        if m == 6:
            todo = [(b, None) for b in range(3 * l // 2 + 1)]
        elif m == 7:
            todo = [(sz7_b(l, b1), b1) for b1 in (0, 2, 4, 6) if sz7_b(l, b1) >= 0]
        else:
            raise ValueError(f"unsupported m = {m}; only 6 and 7 are implemented")
        for b, b1 in todo:
            c = sz_coefficients(l, m, b)
            if min(c) < 0:
                negative.append((l, b))
            for k in range((l * m) // 2):
                if c[k + 1] >= c[k]:
                    continue
                if is_standing(m, l, b, k):
                    standing.append((l, b))
                    continue
                points.append((l, b, k))
                if b1 is not None:
                    b1_of[(l, b, k)] = b1
    meta = {"wall_time_ms": int((time.perf_counter() - t0) * 1000)}
    return SZOracleReport(m, l_max, sorted(points), sorted(set(standing)), negative, b1_of, meta)


# ---------------------------------------------------------------------------
# closed forms

@lru_cache(maxsize=None)
def _denominator(m: int):
    return expand_denominator(tuple(range(1, m + 1)))


def sz6_piecewise(l_min: int = 1) -> PiecewiseClosedForm:
    """``c_k`` over ``(k, l, b)`` on ``0 <= k <= 3l``, ``0 <= 2b <= 3l``."""
    dom = Region(SZ6_NAMES, [ge(LinearForm((0, 1, 0), -l_min)), ge(LinearForm((0, 0, 1), 0)),
                             ge(LinearForm((0, 3, -2), 0))])
    krange = [ge(LinearForm((1, 0, 0), 0)), ge(LinearForm((-1, 3, 0), 0))]
    pw = assemble_piecewise(build_sz_numerator(6), _denominator(6), dom, krange)
    pw.meta.update({"family": "sz", "m": 6, "l_min": l_min})
    return pw


def sz7_piecewise(case: SZCase, l1_min: int = 0) -> PiecewiseClosedForm:
    """``c_k`` over ``(k, l1)`` on ``0 <= 2k <= 7l`` for one ``(lam, b1)`` case."""
    dom = Region(SZ7_NAMES, [ge(LinearForm((0, 1), -l1_min)), ge(LinearForm((0, 7), case.lam - case.b1))])
    krange = [ge(LinearForm((1, 0), 0)), ge(LinearForm((-2, 35), 7 * case.lam))]
    pw = assemble_piecewise(build_sz_numerator(7, case), _denominator(7), dom, krange)
    pw.meta.update({"family": "sz", "m": 7, "lam": case.lam, "b1": case.b1, "l1_min": l1_min})
    return pw


def sz_difference_form(m: int, case: SZCase | None = None) -> PiecewiseClosedForm:
    """Forward difference ``c_{k+1} - c_k`` of :func:`sz6_piecewise` / :func:`sz7_piecewise`."""
    if m == 6:
        return forward_difference(sz6_piecewise())
    if m == 7:
        if case is None:
            raise ValueError("m = 7 needs an SZCase")
        return forward_difference(sz7_piecewise(case))
    raise ValueError(f"unsupported m = {m}; only 6 and 7 are implemented")


# ---------------------------------------------------------------------------
# prover

class SZProver:
    """Residue-case machinery for one Stanley-Zanello problem.

    Every piece of a residue case is split into the slice ``k' = 0`` (which
    carries the standing exception) and the part ``k' >= 1``; for ``m = 6``
    the boundary ``k = 3l - 1`` is a third slice.  Slices have no interior and
    are solved on their own lattice, which keeps the full-dimensional CAD
    problems free of failures in the generic case.
    """

    def __init__(self, m: int, case: SZCase | None = None, threshold: int | None = None,
                 pw: PiecewiseClosedForm | None = None):
        if m not in (6, 7):
            raise ValueError(f"unsupported m = {m}; only 6 and 7 are implemented")
        self.m, self.case = m, case
        self.threshold = CLAIM_FROM[m] if threshold is None else threshold
        self.pw = pw or sz_difference_form(m, case)
        self.moduli = effective_moduli(self.pw, reduce=True)
        self.reducer = CaseReducer(self.pw, self.moduli)
        if m == 6:
            self.window = Region(SZ6_NAMES, [ge(LinearForm((0, 1, 0), -self.threshold))])
            self.top = LinearForm((-1, 3, 0), -1)       # 3l - 1 - k
        else:
            # 5 l1 + lam >= threshold
            self.window = Region(SZ7_NAMES, [ge(LinearForm((0, 5), case.lam - self.threshold))])
            self.top = None
        self.nv = len(self.pw.variables)

    @property
    def total(self) -> int:
        return self.reducer.total

    def run_case(self, index: int) -> CaseResult:
        residues = residues_of_index(index, self.moduli)
        images = self.reducer.images(residues)
        win_p = self.window.substitute(self.reducer.names, images)
        result = CaseResult(index, residues)
        if not win_p.is_feasible():
            return result
        live = [i for i, p in enumerate(self.pw.pieces)
                if (p.region.substitute(self.reducer.names, images) & win_p).is_feasible()]
        if not live:
            return result
        case = self.reducer.reduce(residues, pieces=live)
        kp = LinearForm.variable(0, self.nv)
        slices = [[ge(kp.shift(-1))], [ge(kp), ge(-kp)]]
        if self.top is not None:
            t = _compose(self.top, images)
            slices[0].append(ge(t.shift(-1)))
            slices[1].append(ge(t.shift(-1)))
            slices.append([ge(t), ge(-t), ge(kp.shift(-1))])
        pts, fams = set(), []
        for region, poly in case.pieces:
            for extra in slices:
                reg = region & win_p & extra
                if not reg.is_feasible():
                    continue
                res = integer_failures(QueryFormula.build(reg, poly, 0))
                result.pieces_checked += 1
                p2, f2 = map_failures(res, self.moduli, residues)
                pts.update(p2)
                fams.extend(f2)
                result.unresolved.extend(f"residues {residues}: {u}" for u in res.unresolved)
        pts, fams = consolidate(pts, fams)
        result.points = sorted(pts)
        result.families = fams
        return result

    def to_lbk(self, p: tuple) -> tuple[int, int, int]:
        """Map a point in the closed-form variables to ``(l, b, k)``."""
        if self.m == 6:
            k, l, b = p
            return l, b, k
        k, l1 = p
        return self.case.l_of(l1), self.case.b_of(l1), k

    def family_lbk(self, base: tuple, step: tuple) -> tuple:
        """``(name, step, offset)`` triples in ``(k, l, b)`` for a family."""
        l0, b0, k0 = self.to_lbk(base)
        if self.m == 6:
            sk, sl, sb = step
        else:
            sk, sl1 = step
            sl, sb = 5 * sl1, 7 * sl1
        return (("k", sk, k0), ("l", sl, l0), ("b", sb, b0))

    def sweep(self, l_min: int = 0) -> set:
        """Oracle points ``(l, b, k)`` (standing exception included) below the threshold."""
        out = set()
        for l in range(l_min, self.threshold):
            if self.m == 6:
                bs = range(3 * l // 2 + 1)
            else:
                if l % 5 != self.case.lam:
                    continue
                bs = [self.case.b_of((l - self.case.lam) // 5)]
            for b in bs:
                if b < 0:
                    continue
                for k in sz_violations(l, self.m, b):
                    out.add((l, b, k))
        return out


def _compose(form: LinearForm, images) -> LinearForm:
    """``form`` with variable ``i`` replaced by the affine form ``images[i]``."""
    acc = LinearForm.constant(form.const, images[0].nvars)
    for c, img in zip(form.coeffs, images):
        if c:
            acc = acc + img.scale(c)
    return acc


@dataclass
class SZProofReport:
    m: int
    case: SZCase | None
    threshold: int
    moduli: tuple[int, ...]
    cases_total: int
    cases_run: int
    case_results: list
    exceptions: list
    status: str
    metadata: dict = field(default_factory=dict)

    @property
    def cases_failed(self) -> int:
        return sum(1 for c in self.case_results if c.status != "proven")

    def standing(self) -> list[ExceptionRecord]:
        return [e for e in self.exceptions if e.detail == "standing"]

    def format(self) -> str:
        tag = f"m={self.m}" + (f" lam={self.case.lam} b1={self.case.b1}" if self.case else "")
        lines = [f"Stanley-Zanello {tag}: {self.status}, {self.cases_run}/{self.cases_total} residue cases"]
        for e in self.exceptions:
            if e.kind == "family":
                lines.append(f"  family {e.family_text()}" + (" (standing)" if e.detail else ""))
            elif e.kind == "point":
                lines.append(f"  (l, b, k) = ({e.l}, {e.b}, {e.k})" + (" (standing)" if e.detail else ""))
            else:
                lines.append(f"  unresolved: {e.detail}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        cfg = {"m": self.m, "threshold": self.threshold, "moduli": list(self.moduli), "mode": "prove"}
        if self.case:
            cfg.update({"lam": self.case.lam, "b1": self.case.b1})
        return {"config": cfg, "status": self.status,
                "exceptions": [e.to_json() | ({"standing": True} if e.detail == "standing" else {})
                               for e in self.exceptions if e.kind != "family"],
                "families": [e.to_json() | ({"standing": True} if e.detail == "standing" else {})
                             for e in self.exceptions if e.kind == "family"],
                "cases_total": self.cases_total, "cases_run": self.cases_run,
                "cases_failed": self.cases_failed, "metadata": dict(self.metadata)}


def _family_is_standing(m: int, fam: tuple) -> bool:
    d = {n: (s, o) for n, s, o in fam}
    (sk, k0), (sl, l0), (sb, b0) = d["k"], d["l"], d["b"]
    return sk == 0 and k0 == 0 and (m - 2) * sb == m * sl and (m - 2) * b0 == m * l0 - 2


def prove_sz(m: int, case: SZCase | None = None, threshold: int | None = None,
             cases: Iterable[int] | None = None, done: dict | None = None,
             on_case: Callable[[CaseResult], None] | None = None,
             pw: PiecewiseClosedForm | None = None, jobs: int = 1) -> SZProofReport:
    """Prove ``c_{k+1} >= c_k`` on the first half, listing every exception.

    For ``m = 7`` one ``SZCase`` is proved per call.  ``cases``, ``done`` and
    ``on_case`` behave as in :func:`qunimodal.exceptions.prove_d_strict`; ``jobs``
    sets the worker process count.
    """
    t0 = time.perf_counter()
    prover = SZProver(m, case, threshold, pw)
    factory = partial(SZProver, m, case, threshold, prover.pw)
    indices = list(range(prover.total)) if cases is None else sorted(set(cases))
    results = run_cases(factory, indices, jobs, done, on_case, prover)
    pts, fams, unresolved = set(), [], []
    for r in results:
        pts.update(r.points)
        fams.extend(r.families)
        unresolved.extend(r.unresolved)
    # sweep points go into closed-form coordinates so families can absorb them
    for l, b, k in prover.sweep():
        pts.add((k, l, b) if m == 6 else (k, (l - case.lam) // 5))
    pts, fams = consolidate(pts, fams)
    records = []
    for p in pts:
        l, b, k = prover.to_lbk(p)
        records.append(ExceptionRecord("point", l=l, k=k, b=b,
                                       detail="standing" if is_standing(m, l, b, k) else ""))
    for base, step in fams:
        fam = prover.family_lbk(base, step)
        records.append(ExceptionRecord("family", family=fam,
                                       detail="standing" if _family_is_standing(m, fam) else ""))
    records += [ExceptionRecord("unresolved", detail=u) for u in unresolved]
    records.sort(key=ExceptionRecord.sort_key)
    status = "Incomplete" if unresolved else "Proven"
    meta = {"wall_time_ms": int((time.perf_counter() - t0) * 1000), "pieces": len(prover.pw.pieces)}
    return SZProofReport(m, case, prover.threshold, prover.moduli, prover.total, len(indices),
                         results, records, status, meta)

