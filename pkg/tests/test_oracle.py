"""Brute-force reference: Gaussian tables, partitions, scans, KOH."""
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from qunimodal.oracle import (
    L_of_d, d_strict_violations, gaussian_by_product, gaussian_coefficients, is_unimodal,
    koh_decomposition, koh_layers, partition_numbers, partitions, qbinomial, scan_d_strict,
    strict_exceptional_pairs, support, sz_difference, unimodality_violations,
)

from published_data import GAUSS_8_3_PREFIX, KOH_8_5_LAYERS, L_OF_D, STRICT_EXCEPTIONS


def test_small_tables():
    assert gaussian_coefficients(1, 1).coeffs == (1, 1)
    assert list(gaussian_coefficients(8, 3).coeffs[:15]) == GAUSS_8_3_PREFIX


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 14), st.integers(1, 8))
def test_two_constructions_agree(l, m):
    t = gaussian_coefficients(l, m).coeffs
    assert list(t) == gaussian_by_product(l, m)
    assert list(t) == qbinomial(l + m, m)
    assert list(t) == list(reversed(t))  # palindromic
    assert sum(t) == comb(l + m, m)
    assert is_unimodal(t)


def test_partition_numbers():
    p = partition_numbers(30)
    assert p[0] == 1 and p[5] == 7 and p[30] == 5604
    assert p[5] == sum(1 for _ in partitions(5))
    assert p[13] - p[12] >= 22 and p[12] - p[11] < 22


def test_L_of_d_table():
    for d, L in L_OF_D.items():
        assert L_of_d(d) == L
    # missing entries are filled by L(d) = L(d - 1)
    assert L_of_d(4) == L_of_d(3) == 5
    assert L_of_d(7) == L_of_d(6) == 7
    for d in range(1, 23):
        if d not in L_OF_D:
            assert L_of_d(d) == L_of_d(d - 1)
    with pytest.raises(ValueError):
        L_of_d(-1)


def test_scans():
    assert d_strict_violations(8, 3, 1, 1, 0) == [10]
    for l in range(1, 12):
        for m in range(1, 8):
            t = gaussian_coefficients(l, m)
            assert scan_d_strict(t, 0, 0, t.half - 1) == []
    assert d_strict_violations(6, 5, 1, 1, 0) != []


def test_strict_exceptions():
    pairs = set(strict_exceptional_pairs(20))
    assert {p for p in pairs if p[0] >= 5} == STRICT_EXCEPTIONS
    assert (2, 2) not in pairs
    assert all((l, m) in pairs for m in range(3, 21) for l in range(2, min(m, 4) + 1))


def test_koh_figure_layers():
    layers = koh_layers(8, 5)
    assert layers == KOH_8_5_LAYERS
    assert layers[-1][20] == 73


@pytest.mark.parametrize("l,m", [(l, m) for l in range(0, 11) for m in range(1, 11)])
def test_koh_identity(l, m):
    total = [0] * (l * m + 1)
    for part, summand in koh_decomposition(l, m):
        for i, c in enumerate(summand):
            total[i] += c
        if any(summand):
            lo, hi = support(summand)
            assert lo + hi == l * m
            assert is_unimodal(summand[lo:hi + 1])
            assert all(c >= 0 for c in summand)
    assert total == list(gaussian_coefficients(l, m).coeffs)


def test_koh_trivial():
    dec = koh_decomposition(7, 1)
    assert len(dec) == 1
    assert dec[0][1] == list(gaussian_coefficients(7, 1).coeffs)
    assert [p.parts for p, _ in dec[:2]] == [(1,)]


def test_sz_difference():
    c = sz_difference(2, 6, 3)
    assert c[3] < c[2]
    with pytest.raises(ValueError):
        sz_difference(3, 7, 2)
    # b = l, l even: the shifted difference is unimodal with nonnegative coefficients
    for l in range(2, 21, 2):
        c = sz_difference(l, 6, l)
        assert min(c) >= 0 and unimodality_violations(c) == []
