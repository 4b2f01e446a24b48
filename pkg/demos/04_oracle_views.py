"""The combinatorial side: KOH layers, strict unimodality and L(d).

Everything here is direct expansion, independent of the symbolic pipeline.
"""
from qunimodal.oracle import L_of_d, koh_decomposition, koh_layers, partition_numbers, strict_exceptional_pairs


def main():
    layers = koh_layers(8, 5)
    parts = [p.parts for p, _ in koh_decomposition(8, 5)]
    print("KOH for l = 8, m = 5: cumulative layers at the midpoint k = 20")
    for pt, row in zip(parts, layers):
        print(f"  {'+'.join(map(str, pt)):>10}  {row[20]:3d}  " + "#" * (row[20] // 3))

    pairs = strict_exceptional_pairs(20)
    print("\nnot strictly unimodal, 5 <= l <= m <= 20:", sorted(p for p in pairs if min(p) >= 5))

    p = partition_numbers(40)
    print("\nL(d) = first N with p(N+1) - p(N) >= d:")
    print("  ", ", ".join(f"L({d})={L_of_d(d)}" for d in (0, 1, 2, 3, 5, 8, 9, 13, 15, 22)))
    print("   p(11), p(12), p(13) =", p[11], p[12], p[13])


if __name__ == "__main__":
    main()
