"""Stanley-Zanello differences for m = 6 and m = 7.

The oracle tables show where c_{k+1} < c_k inside the first half; the prover
settles one residue slice of the three-variable m = 6 problem symbolically.
Proving all 21600 slices is a long job (see the README).
"""
from qunimodal.residues import index_of_residues
from qunimodal.sz import prove_sz, sz_oracle


def main():
    print(sz_oracle(6, 30).format())
    print()
    print(sz_oracle(7, 12).format())

    idx = index_of_residues((0, 1, 1), (60, 60, 6))
    rep = prove_sz(6, cases=[idx])
    print(f"\nresidue slice (k, l, b) = (0, 1, 1) mod (60, 60, 6): {rep.status}")
    for e in rep.standing():
        if e.kind == "family":
            print("  standing family", e.family_text())


if __name__ == "__main__":
    main()
