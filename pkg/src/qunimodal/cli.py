"""Command line interface: ``python -m qunimodal <command>``.

Exit codes: 0 success / proven, 1 mismatch found by a checking command,
2 incomplete proof, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from math import prod
from pathlib import Path

from . import cache
from .closedform import gaussian_difference
from .exceptions import CaseResult, format_int_set, induction_coverage, prove_d_strict
from .oracle import d_strict_violations, gaussian_coefficients, koh_decomposition, koh_layers
from .qseries import SZCase, sz_cases_m7
from .residues import effective_moduli
from .sz import prove_sz, sz_difference_form, sz_oracle
from .tables import published_margins

EXIT_OK, EXIT_MISMATCH, EXIT_INCOMPLETE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# helpers

def parse_cases(text: str | None, total: int) -> list[int] | None:
    """``"a..b"`` (inclusive) or ``"a..b%"`` style slices; ``None`` means all."""
    if text is None:
        return None
    try:
        if text.endswith("%"):
            frac = float(text[:-1]) / 100
            if not 0 < frac <= 1:
                raise ValueError
            step = max(1, round(1 / frac))
            return list(range(0, total, step))
        a, b = text.split("..")
        a, b = int(a), int(b)
    except ValueError:
        raise UsageError(f"bad --cases value {text!r}; use a..b or N%")
    if not 0 <= a <= b < total:
        raise UsageError(f"--cases {text} outside 0..{total - 1}")
    return list(range(a, b + 1))


def gaussian_form(m: int, use_cache: bool = True):
    params = {"family": "gaussian", "kind": "delta", "m": m, "l_min": 1}
    return cache.cached(f"gaussian-m{m}", params, lambda: gaussian_difference(m), use_cache=use_cache)


def sz_form(m: int, case: SZCase | None = None, use_cache: bool = True):
    params = {"family": "sz", "kind": "delta", "m": m}
    name = "sz6"
    if case is not None:
        params.update({"lam": case.lam, "b1": case.b1})
        name = f"sz7-lam{case.lam}-b1{case.b1}"
    return cache.cached(name, params, lambda: sz_difference_form(m, case), use_cache=use_cache)


class Journal:
    """Append-only JSON-lines checkpoint of finished residue cases."""

    def __init__(self, path: Path, config: dict, resume: bool):
        self.path = path
        self.config = config
        self.done: dict[int, CaseResult] = {}
        if resume and path.exists():
            lines = path.read_text().splitlines()
            if lines and json.loads(lines[0]).get("config") == config:
                for line in lines[1:]:
                    try:
                        r = CaseResult.from_json(json.loads(line))
                    except (ValueError, KeyError):
                        break            # torn last line
                    self.done[r.index] = r
            else:
                logging.warning("journal %s belongs to another run; starting over", path)
                resume = False
        if not resume or not path.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps({"config": config}) + "\n")
        self._fh = path.open("a")

    def record(self, r: CaseResult) -> None:
        self._fh.write(json.dumps(r.to_json()) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()


def write_json(path: str | Path | None, data: dict) -> None:
    if path is None:
        return
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# commands

def _margins(args) -> tuple[int, int]:
    pub = published_margins(args.m, args.d)
    L = args.L if args.L is not None else (pub[0] if pub else None)
    U = args.U if args.U is not None else (pub[1] if pub else None)
    if L is None or U is None:
        raise UsageError(f"no published margins for m={args.m}, d={args.d}; pass --L and --U")
    if L < 0 or U < 0:
        raise UsageError("margins must be nonnegative")
    if args.l_max is not None and L + U > (args.l_max * args.m) // 2:
        raise UsageError("margins exceed the midpoint for every l <= --l-max")
    return L, U


def _check_m_d(args):
    if args.m < 2:
        raise UsageError("m must be >= 2")
    if args.d < 0:
        raise UsageError("d must be >= 0")


def cmd_prove(args) -> int:
    _check_m_d(args)
    L, U = _margins(args)
    pw = gaussian_form(args.m, not args.no_cache)
    total = prod(effective_moduli(pw, reduce=args.reduce_moduli))
    cases = parse_cases(args.cases, total)
    out = args.out or f"prove-m{args.m}-d{args.d}.json"
    config = {"command": "prove", "m": args.m, "d": args.d, "L": L, "U": U,
              "l_max": args.l_max, "threshold": args.threshold, "reduce_moduli": args.reduce_moduli}
    journal = Journal(Path(out + ".journal"), config, args.resume)
    try:
        rep = prove_d_strict(args.m, args.d, L, U, l_max=args.l_max, threshold=args.threshold,
                             cases=cases, pw=pw, done=journal.done, on_case=journal.record,
                             reduce_moduli=args.reduce_moduli, jobs=args.jobs)
    finally:
        journal.close()
    write_json(out, rep.to_json())
    print(rep.table_row())
    print(f"status: {rep.status} ({rep.cases_run}/{rep.cases_total} residue cases), report: {out}")
    return EXIT_OK if rep.status == "Proven" else EXIT_INCOMPLETE


def prover_points(records, l_max: int) -> set:
    """``(l, k)`` failures of a report up to ``l_max``; ``k = None`` marks an empty window."""
    out = set()
    for e in records:
        if e.kind == "point" and e.l <= l_max:
            out.add((e.l, e.k))
        elif e.kind == "empty-window" and e.l <= l_max:
            out.add((e.l, None))
        elif e.kind == "family":
            j = 0
            while (p := e.member(j))["l"] <= l_max:
                out.add((p["l"], p["k"]))
                j += 1
    return out


def oracle_points(m: int, d: int, l_max: int, L: int, U: int) -> set:
    """Direct scan of the margin window, in the format of :func:`prover_points`."""
    out = set()
    for l in range(1, l_max + 1):
        if (l * m) // 2 - 1 - U < L:
            if U == 0:
                out.add((l, None))
            continue
        out.update((l, k) for k in d_strict_violations(l, m, d, L, U))
    return out


def compare_points(prover: set, oracle: set) -> dict:
    key = lambda p: (p[0], -1 if p[1] is None else p[1])
    return {"prover_ls": sorted({l for l, _ in prover}), "oracle_ls": sorted({l for l, _ in oracle}),
            "only_prover": sorted(prover - oracle, key=key), "only_oracle": sorted(oracle - prover, key=key)}


def oracle_check(m: int, d: int, l_max: int, L: int, U: int, oracle_L: int | None = None,
                 oracle_U: int | None = None, pw=None) -> dict:
    """Prover exceptions vs. a direct scan for ``l <= l_max``."""
    oL = L if oracle_L is None else oracle_L
    oU = U if oracle_U is None else oracle_U
    rep = prove_d_strict(m, d, L, U, l_max=l_max, pw=pw)
    prover = prover_points(rep.exceptions, l_max)
    oracle = oracle_points(m, d, l_max, oL, oU)
    return {"m": m, "d": d, "l_max": l_max, "margins": [L, U], "oracle_margins": [oL, oU],
            "prover_status": rep.status, **compare_points(prover, oracle),
            "identical": prover == oracle and rep.status == "Proven"}


def cmd_oracle_check(args) -> int:
    _check_m_d(args)
    if args.l_max < 1:
        raise UsageError("--l-max must be >= 1")
    L, U = _margins(args)
    res = oracle_check(args.m, args.d, args.l_max, L, U, args.oracle_L, args.oracle_U,
                       gaussian_form(args.m, not args.no_cache))
    write_json(args.out, res)
    print(f"prover: {format_int_set(res['prover_ls']) or 'none'}")
    print(f"oracle: {format_int_set(res['oracle_ls']) or 'none'}")
    if res["identical"]:
        print(f"identical for l <= {args.l_max}")
        return EXIT_OK
    print(f"only prover: {res['only_prover']}")
    print(f"only oracle: {res['only_oracle']}")
    return EXIT_MISMATCH


def cmd_koh(args) -> int:
    if args.m < 1 or args.l < 0:
        raise UsageError("need m >= 1 and l >= 0")
    layers = koh_layers(args.l, args.m)
    parts = [p.parts for p, _ in koh_decomposition(args.l, args.m)]
    target = list(gaussian_coefficients(args.l, args.m).coeffs)
    ok = layers[-1][:len(target)] == target
    if args.plot_data:
        lines = ["layer\tpartition\tk\tvalue"]
        for i, (row, pt) in enumerate(zip(layers, parts), 1):
            name = "+".join(map(str, pt))
            lines += [f"{i}\t{name}\t{k}\t{v}" for k, v in enumerate(row)]
        Path(args.plot_data).write_text("\n".join(lines) + "\n")
    mid = (args.l * args.m) // 2
    print(f"KOH l={args.l} m={args.m}: {len(layers)} layers, top layer value {layers[-1][mid]} at k={mid}")
    print("sum equals the Gaussian polynomial" if ok else "MISMATCH with the Gaussian polynomial")
    return EXIT_OK if ok else EXIT_MISMATCH


def _sz_cases(args) -> list[SZCase]:
    if args.lam is None and args.b1 is None:
        return sz_cases_m7()
    try:
        lams = range(5) if args.lam is None else [args.lam]
        b1s = (0, 2, 4, 6) if args.b1 is None else [args.b1]
        return [SZCase(lam, b1) for b1 in b1s for lam in lams]
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_sz(args) -> int:
    if args.m not in (6, 7):
        raise UsageError("sz supports m = 6 and m = 7")
    if args.mode == "oracle":
        l_max = args.l_max if args.l_max is not None else (40 if args.m == 6 else 12)
        rep = sz_oracle(args.m, l_max)
        print(rep.format())
        write_json(args.out, rep.to_json())
        return EXIT_OK if not rep.claim_violations() else EXIT_MISMATCH
    # prove
    if args.m == 6:
        todo = [None]
    else:
        todo = _sz_cases(args)
    status = EXIT_OK
    for case in todo:
        pw = sz_form(args.m, case, not args.no_cache)
        total = prod(effective_moduli(pw, reduce=True))
        cases = parse_cases(args.cases, total)
        tag = "sz6" if case is None else f"sz7-lam{case.lam}-b1{case.b1}"
        out = (args.out or f"{tag}.json") if len(todo) == 1 else str(Path(args.out or ".") / f"{tag}.json")
        config = {"command": "sz", "m": args.m, "case": tag, "threshold": args.threshold}
        journal = Journal(Path(out + ".journal"), config, args.resume)
        try:
            rep = prove_sz(args.m, case, args.threshold, cases, journal.done, journal.record, pw,
                           jobs=args.jobs)
        finally:
            journal.close()
        write_json(out, rep.to_json())
        print(rep.format())
        if rep.status != "Proven":
            status = EXIT_INCOMPLETE
    return status


def cmd_induction(args) -> int:
    if args.d < 0 or args.bound < 1:
        raise UsageError("need d >= 0 and bound >= 1")
    try:
        cov = induction_coverage(args.n_d, args.d, args.bound)
    except ValueError as exc:
        raise UsageError(str(exc))
    ms = sorted({m for _, m in cov})
    ls = sorted({l for l, _ in cov})
    mark = {"assumed": "B", "derived": "+", "symmetric": "s", "uncovered": "X"}
    print(f"induction grid n_d={args.n_d} d={args.d} (B base row, + derived, s symmetric, X uncovered)")
    for m in reversed(ms):
        row = "".join(mark[cov[(l, m)].status] if (l, m) in cov else "." for l in ls)
        print(f"m={m:3d} {row}")
    bad = [e for e in cov.values() if e.status == "uncovered"]
    if args.verbose:
        for (l, m), e in sorted(cov.items()):
            if e.condition:
                print(f"({l},{m}) {e.status}: {e.condition} from {list(e.sources)}")
    write_json(args.out, {"n_d": args.n_d, "d": args.d, "bound": args.bound,
                          "entries": [{"l": e.l, "m": e.m, "status": e.status,
                                       "sources": [list(s) for s in e.sources],
                                       "condition": e.condition, "holds": e.holds}
                                      for _, e in sorted(cov.items())]})
    print(f"{len(cov)} pairs, {len(bad)} uncovered")
    return EXIT_OK if not bad else EXIT_MISMATCH


def cmd_cache(args) -> int:
    d = Path(args.dir) if args.dir else cache.cache_dir()
    if args.action == "clear":
        print(f"removed {cache.clear(d)} files from {d}")
        return EXIT_OK
    print(f"cache directory: {d}")
    for e in cache.entries(d):
        state = "ok" if e.get("valid") else "INVALID"
        print(f"  {e['file']}: {e['bytes']} bytes, {e.get('pieces', '?')} pieces, {state}, params {e.get('params')}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qunimodal", description="Symbolic proofs of (d-strict) unimodality of Gaussian polynomials.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common_md(sp):
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--L", type=int, help="lower margin (default: published value)")
        sp.add_argument("--U", type=int, help="upper margin (default: published value)")
        sp.add_argument("--no-cache", action="store_true")
        sp.add_argument("--out")

    sp = sub.add_parser("prove", help="prove d-strict unimodality for fixed m")
    common_md(sp)
    sp.add_argument("--l-max", type=int)
    sp.add_argument("--threshold", type=int, help="first l handled symbolically")
    sp.add_argument("--cases", help="residue case slice a..b or N%%")
    sp.add_argument("--resume", action="store_true")
    sp.add_argument("--reduce-moduli", action="store_true",
                    help="split l only as finely as its omega powers need (fewer, equivalent cases)")
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("oracle-check", help="compare prover exceptions with a direct scan")
    common_md(sp)
    sp.add_argument("--l-max", type=int, default=40)
    sp.add_argument("--oracle-L", type=int, help="margin used on the oracle side (self-test)")
    sp.add_argument("--oracle-U", type=int)
    sp.set_defaults(func=cmd_oracle_check)

    sp = sub.add_parser("koh", help="layers of the KOH decomposition")
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--plot-data", help="write TSV (layer, partition, k, value)")
    sp.set_defaults(func=cmd_koh)

    sp = sub.add_parser("sz", help="Stanley-Zanello differences for m = 6, 7")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--mode", choices=("oracle", "prove"), default="oracle")
    sp.add_argument("--l-max", type=int)
    sp.add_argument("--lam", type=int, help="m = 7: l mod 5")
    sp.add_argument("--b1", type=int, help="m = 7: one of 0, 2, 4, 6")
    sp.add_argument("--threshold", type=int)
    sp.add_argument("--cases", help="residue case slice a..b or N%%")
    sp.add_argument("--resume", action="store_true")
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    sp.add_argument("--no-cache", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sz)

    sp = sub.add_parser("induction", help="coverage of the induction over m")
    sp.add_argument("--n-d", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--bound", type=int, default=30)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_induction)

    sp = sub.add_parser("cache", help="inspect or clear the closed-form cache")
    sp.add_argument("action", choices=("inspect", "clear"))
    sp.add_argument("--dir", help=f"cache directory (default ${cache.ENV_VAR} or ~/.cache/qunimodal)")
    sp.set_defaults(func=cmd_cache)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qunimodal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
