"""Symbolic proofs of unimodality for Gaussian polynomials and related q-series.

The pipeline turns the coefficients of ``N(q, q^l) / D(q)`` into exponential
polynomials (:mod:`.closedform`), removes the roots of unity by residue case
splitting (:mod:`.residues`), and decides the resulting polynomial
inequalities with an exact cylindrical algebraic decomposition (:mod:`.cad`,
:mod:`.intpoints`).  :mod:`.oracle` is an independent brute-force reference.
"""
from .closedform import expand_denominator, forward_difference, gaussian_difference, gaussian_piecewise
from .exceptions import ProofReport, induction_coverage, margin_search, prove_d_strict
from .oracle import L_of_d, gaussian_coefficients, qbinomial, sz_difference
from .sz import prove_sz, sz_oracle

__version__ = "0.1.0"

__all__ = [
    "L_of_d", "ProofReport", "expand_denominator", "forward_difference", "gaussian_coefficients",
    "gaussian_difference", "gaussian_piecewise", "induction_coverage", "margin_search",
    "prove_d_strict", "prove_sz", "qbinomial", "sz_difference", "sz_oracle",
]
