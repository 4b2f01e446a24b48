"""From a rational generating function to omega-free polynomials.

Walks the m = 3 example end to end: the expansion of 1/((1-q)(1-q^2)(1-q^3)),
the two-piece closed form for the Gaussian coefficients, the difference
p_{k+1} - p_k, and one residue case where the roots of unity disappear.
"""
from qunimodal.closedform import expand_denominator, gaussian_difference, gaussian_piecewise, validity_floor
from qunimodal.oracle import gaussian_coefficients
from qunimodal.residues import CaseReducer, effective_moduli


def main():
    d = expand_denominator((1, 2, 3))
    print("1/((1-q)(1-q^2)(1-q^3)) has coefficients")
    print("   ", d.format(), f"(w a primitive {d.order}th root of unity)")
    print("    valid down to k =", validity_floor(d))
    print("    first values:", [int(d.evaluate([k])) for k in range(10)])

    pw = gaussian_piecewise(3)
    print("\np_k(l, 3) is piecewise:")
    for piece in pw.pieces:
        print("  on", piece.region.format())
        print("    ", piece.expr.format())
    l = 7
    want = gaussian_coefficients(l, 3).coeffs
    got = [pw.evaluate((k, l)) for k in range(3 * l // 2 + 1)]
    print(f"  check against direct expansion at l = {l}:", got == list(want[:len(got)]))

    delta = gaussian_difference(3)
    red = CaseReducer(delta, effective_moduli(delta, reduce=False))
    case = red.reduce((4, 2))
    print("\nWith k = 6k' + 4 and l = 6l' + 2 the difference becomes")
    for region, poly in case.pieces:
        print("  ", poly.format(), "  on", region.format())


if __name__ == "__main__":
    main()
