"""Proving d-strict unimodality for fixed m, and what the exceptions look like.

First a row of the exception table (m = 4, d = 1), then the same m = 3
problem with a margin that is too small, where the prover returns infinite
families instead of finitely many points.  Both are compared with a direct scan.
"""
from qunimodal.cli import compare_points, oracle_points, prover_points
from qunimodal.exceptions import format_int_set, prove_d_strict


def show(rep, l_max=40):
    print(" ", rep.table_row())
    print(f"  status {rep.status}, {rep.cases_run} residue cases, {rep.metadata['wall_time_ms']} ms")
    for f in rep.families():
        print("  family", f.family_text())
    cmp = compare_points(prover_points(rep.exceptions, l_max),
                         oracle_points(rep.m, rep.d, l_max, rep.L_margin, rep.U_margin))
    same = not cmp["only_prover"] and not cmp["only_oracle"]
    print(f"  direct scan for l <= {l_max}: {'identical' if same else cmp}")


def main():
    print("m = 4, d = 1 with margins (1, 2):")
    rep = prove_d_strict(4, 1, 1, 2)
    show(rep)
    print("  exceptional l:", format_int_set(rep.exception_ls()) or "none")

    print("\nm = 3, d = 1 with margins (1, 0): the upper edge is too tight")
    rep = prove_d_strict(3, 1, 1, 0)
    show(rep)
    f = next(f for f in rep.families() if f.member(1) == {"k": 10, "l": 8})
    print("  e.g. l = 8, k = 10 lies on", f.family_text())


if __name__ == "__main__":
    main()
