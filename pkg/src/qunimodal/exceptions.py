"""Exception records, the d-strict prover, margin search and induction coverage.

The prover walks the residue cases of the difference ``p_{k+1} - p_k`` over
``L <= k <= floor(l m / 2) - 1 - U`` and turns every failing CAD cell into
integer points or one-parameter families in the original variables ``(k, l)``.
Small ``l`` (below the sweep threshold) are scanned directly with the oracle.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from math import ceil, gcd
from typing import Callable, Iterable, Sequence

from .cad import QueryFormula
from .closedform import PiecewiseClosedForm, gaussian_difference
from .intpoints import IntegerFailures, integer_failures
from .linear import LinearForm, Region, ge
from .oracle import L_of_d, d_strict_violations
from .residues import CaseReducer, effective_moduli, residues_of_index
from .tables import published_margins


# ---------------------------------------------------------------------------
# records

@dataclass(frozen=True)
class ExceptionRecord:
    """A violation of the target inequality.

    ``kind`` is ``"point"`` (exact location), ``"family"`` (points
    ``offset + j * step`` for ``j >= 0``, one ``(name, step, offset)`` triple per
    variable), ``"empty-window"`` (an ``l`` whose k-window is empty, listed
    when ``U = 0``) or ``"unresolved"`` (a cell the extractor could not settle).
    """

    kind: str
    l: int | None = None
    k: int | None = None
    b: int | None = None
    family: tuple | None = None
    detail: str = ""

    def sort_key(self):
        order = {"point": 0, "empty-window": 1, "family": 2, "unresolved": 3}[self.kind]
        return (order, self.l if self.l is not None else -1, self.b if self.b is not None else -1,
                self.k if self.k is not None else -1, self.family or (), self.detail)

    def member(self, j: int) -> dict:
        if self.kind != "family":
            raise ValueError("not a family")
        return {name: off + j * step for name, step, off in self.family}

    def family_text(self) -> str:
        names = ", ".join(n for n, _, _ in self.family)
        vals = ", ".join(_affine_text(s, o) for _, s, o in self.family)
        return f"({names}) = ({vals}), j >= 0"

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "family":
            for name, step, off in self.family:
                d[name] = [step, off]
            d["j_min"] = 0
            d["text"] = self.family_text()
            return d
        for name in ("l", "b", "k"):
            v = getattr(self, name)
            if v is not None:
                d[name] = v
        if self.detail:
            d["detail"] = self.detail
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ExceptionRecord":
        if d["kind"] == "family":
            fam = tuple((n, d[n][0], d[n][1]) for n in ("k", "l", "b") if n in d)
            return cls("family", family=fam)
        return cls(d["kind"], d.get("l"), d.get("k"), d.get("b"), None, d.get("detail", ""))


def _affine_text(step: int, off: int) -> str:
    if step == 0:
        return str(off)
    s = "j" if step == 1 else f"{step}j"
    if off:
        s += f"{off:+d}"
    return s


def merge_families(fams: Iterable[tuple[tuple[int, ...], tuple[int, ...]]]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Merge ``(base, step)`` families whose union is one arithmetic progression."""
    fams = sorted(set(fams))
    changed = True
    while changed:
        changed = False
        by_step: dict = {}
        for b, s in fams:
            by_step.setdefault(s, []).append(b)
        for s, bases in by_step.items():
            if len(bases) < 2:
                continue
            g = 0
            for x in s:
                g = gcd(g, x)
            bset = set(bases)
            for n in range(len(bases), 1, -1):
                if g % n:
                    continue
                sub = tuple(x // n for x in s)
                for b0 in sorted(bases):
                    run = [tuple(x + i * y for x, y in zip(b0, sub)) for i in range(n)]
                    if all(r in bset for r in run):
                        fams = [f for f in fams if not (f[1] == s and f[0] in run)] + [(b0, sub)]
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
        fams = sorted(set(fams))
    return fams


def _on_family(p, base, step) -> bool:
    j = None
    for x, b, s in zip(p, base, step):
        if s == 0:
            if x != b:
                return False
            continue
        if (x - b) % s:
            return False
        jj = (x - b) // s
        if j is None:
            j = jj
        elif jj != j:
            return False
    return j is None or j >= 0


def consolidate(points: set, families: list) -> tuple[set, list]:
    """Merge families, extend them downward over listed points, drop covered points."""
    fams = merge_families(families)
    while True:
        out = []
        for base, step in fams:
            while True:
                prev = tuple(b - s for b, s in zip(base, step))
                if prev in points:
                    base = prev
                else:
                    break
            out.append((base, step))
        merged = merge_families(out)
        if merged == fams:
            break
        fams = merged
    pts = {p for p in points if not any(_on_family(p, b, s) for b, s in fams)}
    return pts, fams


# ---------------------------------------------------------------------------
# per-case results

@dataclass
class CaseResult:
    index: int
    residues: tuple[int, ...]
    points: list = field(default_factory=list)      # tuples in original variable order
    families: list = field(default_factory=list)    # (base, step) in original variables
    unresolved: list = field(default_factory=list)
    pieces_checked: int = 0

    @property
    def status(self) -> str:
        if self.unresolved:
            return "unresolved"
        if self.families:
            return "family"
        if self.points:
            return "exceptions"
        return "proven"

    def to_json(self) -> dict:
        return {"index": self.index, "residues": list(self.residues), "status": self.status,
                "points": [list(p) for p in sorted(self.points)],
                "families": [[list(b), list(s)] for b, s in self.families],
                "unresolved": list(self.unresolved), "pieces": self.pieces_checked}

    @classmethod
    def from_json(cls, d: dict) -> "CaseResult":
        return cls(d["index"], tuple(d["residues"]), [tuple(p) for p in d["points"]],
                   [(tuple(b), tuple(s)) for b, s in d["families"]], list(d["unresolved"]), d.get("pieces", 0))


def map_failures(res: IntegerFailures, moduli: Sequence[int], residues: Sequence[int]) -> tuple[list, list]:
    """Back-substitute ``x = M x' + r`` into points and families."""
    pts = [tuple(M * x + r for M, x, r in zip(moduli, p, residues)) for p in res.points]
    fams = [(tuple(M * x + r for M, x, r in zip(moduli, f.base, residues)),
             tuple(M * s for M, s in zip(moduli, f.step))) for f in res.families]
    return pts, fams


# ---------------------------------------------------------------------------
# case execution

_WORKER = None


def _init_worker(factory) -> None:
    global _WORKER
    _WORKER = factory()


def _run_in_worker(index: int):
    return _WORKER.run_case(index)


def run_cases(factory: Callable, indices: Sequence[int], jobs: int = 1, done: dict | None = None,
              on_case: Callable | None = None, prover=None) -> list:
    """Run ``factory().run_case`` over ``indices``; results come back in index order.

    With ``jobs > 1`` the cases go to a process pool whose workers build their
    own prover once.  ``on_case`` runs in the calling process only, so it can
    own the output files.
    """
    done = done or {}
    todo = [i for i in indices if i not in done]
    out = {i: done[i] for i in indices if i in done}
    if jobs <= 1 or len(todo) < 2:
        prover = prover or factory()
        for i in todo:
            r = prover.run_case(i)
            out[i] = r
            if on_case:
                on_case(r)
    else:
        chunk = max(1, min(64, len(todo) // (8 * jobs)))
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(factory,)) as ex:
            for r in ex.map(_run_in_worker, todo, chunksize=chunk):
                out[r.index] = r
                if on_case:
                    on_case(r)
    return [out[i] for i in indices]


# ---------------------------------------------------------------------------
# proof report

@dataclass
class ProofReport:
    m: int
    d: int
    L_margin: int
    U_margin: int
    l_min: int
    l_max: int | None
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

    def points(self) -> list[ExceptionRecord]:
        return [e for e in self.exceptions if e.kind == "point"]

    def families(self) -> list[ExceptionRecord]:
        return [e for e in self.exceptions if e.kind == "family"]

    def unresolved(self) -> list[ExceptionRecord]:
        return [e for e in self.exceptions if e.kind == "unresolved"]

    def exception_ls(self) -> list[int]:
        """Exceptional ``l`` values from points and empty windows (families excluded)."""
        return sorted({e.l for e in self.exceptions if e.kind in ("point", "empty-window")})

    def locations(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for e in self.points():
            out.setdefault(e.l, []).append(e.k)
        return {l: sorted(ks) for l, ks in sorted(out.items())}

    def table_row(self) -> str:
        ls = self.exception_ls()
        text = format_int_set(ls) if ls else "none"
        row = f"m={self.m} d={self.d} L={self.L_margin} U={self.U_margin} exceptions: {text}"
        for f in self.families():
            row += f"; infinite family {f.family_text()}"
        if self.unresolved():
            row += f"; {len(self.unresolved())} unresolved cells"
        return row

    def to_json(self) -> dict:
        return {
            "config": {"m": self.m, "d": self.d, "l_min": self.l_min, "l_max": self.l_max,
                       "threshold": self.threshold, "moduli": list(self.moduli)},
            "status": self.status,
            "margins": {"L": self.L_margin, "U": self.U_margin},
            "exceptions": [e.to_json() for e in self.exceptions if e.kind != "family"],
            "families": [e.to_json() for e in self.families()],
            "exception_ls": self.exception_ls(),
            "cases_total": self.cases_total,
            "cases_run": self.cases_run,
            "cases_failed": self.cases_failed,
            "metadata": dict(self.metadata),
        }


def format_int_set(values: Sequence[int]) -> str:
    """``1,...,4, 6, 10`` style rendering of a sorted integer set."""
    vals = sorted(values)
    parts = []
    i = 0
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[j + 1] == vals[j] + 1:
            j += 1
        if j - i >= 2:
            parts.append(f"{vals[i]},...,{vals[j]}")
        else:
            parts.extend(str(v) for v in vals[i:j + 1])
        i = j + 1
    return ", ".join(parts)


# ---------------------------------------------------------------------------
# the prover

def default_threshold(m: int, L_margin: int, l_min: int = 1) -> int:
    """First ``l`` handled by the CAD path; smaller ``l`` are scanned directly."""
    return max(l_min, ceil(Fraction(3 * L_margin, m)))


def window_region(m: int, L_margin: int, U_margin: int, lam: int, l_low: int,
                  l_max: int | None) -> Region:
    """``L <= k``, ``2k <= m l - 2 - 2U - (m l mod 2)`` and the ``l`` range, over ``(k, l)``."""
    par = (m * lam) % 2
    cons = [ge(LinearForm((1, 0), -L_margin)),
            ge(LinearForm((-2, m), -2 - 2 * U_margin - par)),
            ge(LinearForm((0, 1), -l_low))]
    if l_max is not None:
        cons.append(ge(LinearForm((0, -1), l_max)))
    return Region(("k", "l"), cons)


class DStrictProver:
    """Reusable per-case machinery for one ``(m, d, margins)`` run."""

    def __init__(self, m: int, d: int, L_margin: int, U_margin: int, l_min: int = 1,
                 l_max: int | None = None, threshold: int | None = None,
                 pw: PiecewiseClosedForm | None = None, reduce_moduli: bool = False):
        self.m, self.d = m, d
        self.L, self.U = L_margin, U_margin
        self.l_min, self.l_max = l_min, l_max
        self.threshold = default_threshold(m, L_margin, l_min) if threshold is None else max(threshold, l_min)
        self.pw = pw or gaussian_difference(m)
        self.moduli = effective_moduli(self.pw, reduce=reduce_moduli)
        if self.moduli[1] % 2:
            raise ValueError("the l modulus must be even to linearise floor(l m / 2)")
        self.reducer = CaseReducer(self.pw, self.moduli)

    @property
    def total(self) -> int:
        return self.reducer.total

    def run_case(self, index: int) -> CaseResult:
        residues = residues_of_index(index, self.moduli)
        kappa, lam = residues
        win = window_region(self.m, self.L, self.U, lam, self.threshold, self.l_max)
        win_p = win.substitute(self.reducer.names, self.reducer.images(residues))
        result = CaseResult(index, residues)
        if not win_p.is_feasible():
            return result
        live = []
        for i, p in enumerate(self.pw.pieces):
            reg = p.region.substitute(self.reducer.names, self.reducer.images(residues)) & win_p
            if reg.is_feasible():
                live.append(i)
        if not live:
            return result
        case = self.reducer.reduce(residues, pieces=live)
        pts, fams = set(), []
        for region, poly in case.pieces:
            q = QueryFormula.build(region & win_p, poly, self.d)
            res = integer_failures(q)
            result.pieces_checked += 1
            p2, f2 = map_failures(res, self.moduli, residues)
            pts.update(p2)
            fams.extend(f2)
            for u in res.unresolved:
                result.unresolved.append(f"residues {residues}: {u}")
        pts, fams = consolidate(pts, fams)
        result.points = sorted(pts)
        result.families = fams
        return result

    def sweep(self) -> tuple[set, list[int]]:
        """Oracle scan below the threshold and the empty-window list."""
        pts = set()
        top = self.threshold - 1 if self.l_max is None else min(self.threshold - 1, self.l_max)
        for l in range(self.l_min, top + 1):
            for k in d_strict_violations(l, self.m, self.d, self.L, self.U):
                pts.add((k, l))
        empty = []
        l = self.l_min
        while (l * self.m) // 2 - 1 - self.U < self.L and (self.l_max is None or l <= self.l_max):
            empty.append(l)
            l += 1
        return pts, empty


def prove_d_strict(m: int, d: int, L_margin: int | None = None, U_margin: int | None = None,
                   l_min: int = 1, l_max: int | None = None, threshold: int | None = None,
                   cases: Iterable[int] | None = None, pw: PiecewiseClosedForm | None = None,
                   done: dict | None = None, on_case: Callable[[CaseResult], None] | None = None,
                   reduce_moduli: bool = False, jobs: int = 1) -> ProofReport:
    """Prove ``p_{k+1}(l, m) - p_k(l, m) >= d`` on the margin window, listing all exceptions.

    ``cases`` restricts the run to a subset of residue-case indices (the report
    then covers only that subset); ``done`` supplies already computed
    :class:`CaseResult` objects by index (resume); ``on_case`` is called for
    every newly computed case; ``jobs`` sets the worker process count.
    """
    if L_margin is None or U_margin is None:
        pub = published_margins(m, d)
        if pub is None:
            raise ValueError(f"no published margins for m={m}, d={d}; pass them explicitly")
        L_margin = pub[0] if L_margin is None else L_margin
        U_margin = pub[1] if U_margin is None else U_margin
    if L_margin < 0 or U_margin < 0:
        raise ValueError("margins must be nonnegative")
    t0 = time.perf_counter()
    prover = DStrictProver(m, d, L_margin, U_margin, l_min, l_max, threshold, pw, reduce_moduli)
    factory = partial(DStrictProver, m, d, L_margin, U_margin, l_min, l_max, threshold, prover.pw,
                      reduce_moduli)
    indices = list(range(prover.total)) if cases is None else sorted(set(cases))
    results = run_cases(factory, indices, jobs, done, on_case, prover)
    sweep_pts, empty = prover.sweep()
    pts = set(sweep_pts)
    fams = []
    unresolved = []
    for r in results:
        pts.update(r.points)
        fams.extend(r.families)
        unresolved.extend(r.unresolved)
    pts, fams = consolidate(pts, fams)
    records = [ExceptionRecord("point", l=l, k=k) for k, l in pts]
    if U_margin == 0:
        records += [ExceptionRecord("empty-window", l=l) for l in empty]
    records += [ExceptionRecord("family", family=(("k", s[0], b[0]), ("l", s[1], b[1]))) for b, s in fams]
    records += [ExceptionRecord("unresolved", detail=u) for u in unresolved]
    records.sort(key=ExceptionRecord.sort_key)
    status = "Incomplete" if unresolved else "Proven"
    meta = {"wall_time_ms": int((time.perf_counter() - t0) * 1000),
            "pieces": len(prover.pw.pieces)}
    return ProofReport(m, d, L_margin, U_margin, l_min, l_max, prover.threshold, prover.moduli,
                       prover.total, len(indices), results, records, status, meta)


# ---------------------------------------------------------------------------
# margin search

@dataclass
class MarginSearchResult:
    L_margin: int
    U_margin: int
    finite: bool
    history: list
    remaining: list


def margin_search(m: int, d: int, l_min: int = 1, start: tuple[int, int] = (0, 0),
                  max_rounds: int = 40, pw: PiecewiseClosedForm | None = None,
                  prove=prove_d_strict) -> MarginSearchResult:
    """Smallest margins leaving only finitely many exceptions.

    Families at the lower edge have constant ``k`` and force ``L`` above it;
    families parallel to the upper edge ``2k = l m`` force ``U`` above their
    slack.  The two edges are independent for large ``l``, so raising each
    margin exactly as far as its families demand gives the minimum in both
    coordinates at once.  A report with unresolved cells is never accepted:
    those come from strips along the upper edge whose walls are not affine
    (lower-edge strips have constant ``k`` and always resolve), so ``U`` is
    raised by one and the search continues.
    """
    pw = pw or gaussian_difference(m)
    L, U = start
    history = []
    for _ in range(max_rounds):
        rep = prove(m, d, L, U, l_min=l_min, pw=pw)
        fams = rep.families()
        unresolved = rep.unresolved()
        history.append({"L": L, "U": U, "families": [f.family_text() for f in fams],
                        "unresolved": len(unresolved)})
        if not fams and not unresolved:
            return MarginSearchResult(L, U, True, history, [])
        newL, newU = L, U + (1 if unresolved else 0)
        stuck = []
        for f in fams:
            (_, sk, bk), (_, sl, bl) = f.family
            if sk == 0:
                newL = max(newL, bk + 1)
            elif 2 * sk == m * sl:
                slack = max((m * (bl + j * sl)) // 2 - 1 - (bk + j * sk) for j in range(2))
                newU = max(newU, slack + 1)
            else:
                stuck.append(f)
        if stuck or (newL, newU) == (L, U):
            return MarginSearchResult(L, U, False, history, stuck or fams or unresolved)
        L, U = newL, newU
    return MarginSearchResult(L, U, False, history, fams)


# ---------------------------------------------------------------------------
# induction coverage

@dataclass
class CoverageEntry:
    l: int
    m: int
    status: str          # "assumed", "derived", "symmetric", "uncovered"
    sources: tuple = ()
    condition: str = ""
    holds: bool = True


def induction_coverage(n_d: int, d: int, bound: int) -> dict[tuple[int, int], CoverageEntry]:
    """Which ``(l, m)`` with ``l, m > n_d`` and ``l + m`` odd follow from the base rows.

    Base rows ``m = n_d`` and ``m = n_d - 1`` are assumptions.  For ``l > m`` the
    pair is derived from ``(l + 1, m - 1)`` (lower part of the k-range) and from
    ``(l, m - 2)`` when ``l`` is even or ``(l - 2, m)`` when ``m`` is even (upper
    part), provided ``floor((l + 1)(m - 1) / 2) >= L(d) + l`` (resp. ``+ m``).
    Pairs with ``l < m`` follow from ``(m, l)`` by symmetry.
    """
    if n_d % 2:
        raise ValueError("n_d must be even")
    Ld = L_of_d(d)
    if n_d <= Ld:
        raise ValueError(f"n_d must exceed L(d) = {Ld}")
    width = 2 * bound + 4
    cov: dict[tuple[int, int], CoverageEntry] = {}
    for m in (n_d - 1, n_d):
        for l in range(m, width + 1):
            cov[(l, m)] = CoverageEntry(l, m, "assumed")

    def ok(l, m):
        if l < m:
            l, m = m, l
        e = cov.get((l, m))
        return e is not None and e.status != "uncovered"

    for m in range(n_d + 1, bound + 1):
        for l in range(n_d + 1, width - (m - n_d) + 1):
            if (l + m) % 2 == 0:
                continue
            if l < m:
                src = (m, l)
                good = ok(*src)
                cov[(l, m)] = CoverageEntry(l, m, "symmetric" if good else "uncovered", (src,),
                                            "mirror of the transposed pair")
                continue
            lhs = (l + 1) * (m - 1) // 2
            if l % 2 == 0:
                upper, rhs, tag = (l, m - 2), Ld + l, "L(d)+l"
            else:
                upper, rhs, tag = (l - 2, m), Ld + m, "L(d)+m"
            diag = (l + 1, m - 1)
            cond = f"floor(({l}+1)({m}-1)/2) = {lhs} >= {tag} = {rhs}"
            holds = lhs >= rhs
            good = holds and ok(*upper) and ok(*diag)
            cov[(l, m)] = CoverageEntry(l, m, "derived" if good else "uncovered", (upper, diag), cond, holds)
    return {k: v for k, v in cov.items() if k[0] <= bound and k[1] <= bound}
