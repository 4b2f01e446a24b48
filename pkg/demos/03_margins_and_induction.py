"""Finding margins automatically, then extending to all m by induction.

The margin search raises the lower and upper margins until only finitely
many exceptions remain.  The induction grid shows which (l, m) pairs follow
from a proven base row.
"""
from qunimodal.exceptions import induction_coverage, margin_search
from qunimodal.tables import published_margins


def main():
    for m, d in [(3, 1), (3, 2), (4, 1)]:
        res = margin_search(m, d)
        steps = " -> ".join(f"({h['L']}, {h['U']})" for h in res.history)
        print(f"m={m} d={d}: {steps}  found ({res.L_margin}, {res.U_margin}),"
              f" published {published_margins(m, d)}")

    cov = induction_coverage(8, 1, 16)
    print("\ninduction from the proven rows m = 7, 8 (d = 1):")
    ls = sorted({l for l, _ in cov})
    for m in sorted({m for _, m in cov}, reverse=True):
        row = "".join({"assumed": "B", "derived": "+", "symmetric": "s", "uncovered": "X"}[cov[(l, m)].status]
                      if (l, m) in cov else "." for l in ls)
        print(f"  m={m:2d} {row}")
    e = next(e for e in cov.values() if e.status == "derived")
    print(f"  e.g. ({e.l}, {e.m}) from {list(e.sources)}: {e.condition}")


if __name__ == "__main__":
    main()
