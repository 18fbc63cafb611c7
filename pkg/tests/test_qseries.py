"""Coefficient engine: exact integer series against independent oracles.

The load-bearing expected values are frozen literals, cross-computed from
the recursive enumeration and pentagonal recurrence in oracles.py — never
from the implementation under test.
"""

import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from oracles import p2_by_enumeration, pentagonal_p
from radex.qseries import (G1_PREFACTOR, G2_PREFACTOR, IntegerSeries,
                           P2_ENUMERATE_CAP, chi_series, decomposition_check,
                           f_series, g1_coefficients, g1_series, g2_series,
                           omega_mock_series, oracle_rows, p2_counts,
                           p2_enumerate, partition_counts, pochhammer_inf,
                           xi_series)

# frozen expected values (independent derivations)
P2_HEAD = [1, 1, 2, 2, 4, 4, 8, 8]
P2_TAIL_85_90 = [1329166, 1488062, 1637325, 1830202, 2012145, 2246259]
ALPHA_HEAD = [1, 1, -2, 3]
OMEGA_HEAD = [1, 2, 3, 4, 6, 8, 10, 14]
XI_HEAD = [1, 0, 1, 1]


def test_p2_head_frozen():
    assert p2_counts(7) == P2_HEAD


def test_p2_large_frozen():
    c = p2_counts(100)
    assert c[85:91] == P2_TAIL_85_90
    assert c[97] == 4497862
    assert c[100] == 6069450


def test_p2_matches_enumeration_oracle():
    counts = p2_counts(40)
    for n in range(41):
        assert counts[n] == p2_by_enumeration(n), n


def test_partition_counts_match_pentagonal():
    assert partition_counts(300) == pentagonal_p(300)
    assert partition_counts(100)[100] == 190569292


def test_alpha_coefficients():
    assert f_series(3).coeffs == ALPHA_HEAD
    # independent finite-sum computation of the same coefficients:
    # sum_{j>=0} q^{j^2} / ((-q;q)_j)^2 expanded with Fractions
    N = 12
    total = [Fraction(0)] * (N + 1)
    for j in range(0, 4):
        if j * j > N:
            break
        # ((-q;q)_j)^{-2} as a truncated rational series
        denom = [Fraction(1)] + [Fraction(0)] * N
        for i in range(1, j + 1):
            # multiply by (1 + q^i) twice
            for _ in range(2):
                for idx in range(N, i - 1, -1):
                    denom[idx] += denom[idx - i]
        # invert
        inv = [Fraction(0)] * (N + 1)
        inv[0] = 1 / denom[0]
        for idx in range(1, N + 1):
            acc = Fraction(0)
            for i in range(1, idx + 1):
                acc += denom[i] * inv[idx - i]
            inv[idx] = -acc
        for idx in range(j * j, N + 1):
            total[idx] += inv[idx - j * j]
    expect = [int(x) for x in total]
    assert all(x.denominator == 1 for x in total)
    assert f_series(N).coeffs == expect


def test_omega_mock_coefficients():
    assert omega_mock_series(7).coeffs == OMEGA_HEAD


def test_xi_coefficients():
    assert xi_series(3).coeffs == XI_HEAD


def test_chi_starts_at_one():
    c = chi_series(30)
    assert c.coeffs[0] == 1
    # xi * chi reproduces the p2 generating function
    assert (xi_series(30) * c).coeffs == p2_counts(30)


def test_decomposition_identity():
    assert decomposition_check(300)


def test_decomposition_pieces():
    N = 60
    p2 = p2_counts(N)
    a4 = g1_series(N).coeffs
    b43 = g2_series(N).coeffs
    for n in range(N + 1):
        assert 4 * p2[n] == a4[n] + 3 * b43[n]
    # rational coefficient view carries the 1/4 prefactor
    g1 = g1_coefficients(N)
    assert G1_PREFACTOR == Fraction(1, 4) and G2_PREFACTOR == Fraction(3, 4)
    for n in range(N + 1):
        assert g1[n] == Fraction(a4[n], 4)


def test_oracle_rows_shape():
    rows = list(oracle_rows(5))
    assert len(rows) == 6
    assert rows[0] == (0, 1, 1, 1, 1)
    ns, ps, p2s, a4s, rs = zip(*rows)
    assert list(ns) == list(range(6))
    assert list(ps) == pentagonal_p(5)
    assert list(p2s) == [1, 1, 2, 2, 4, 4]
    assert list(a4s) == g1_series(5).coeffs
    assert list(rs)[:4] == XI_HEAD


def test_p2_enumerate_cap():
    with pytest.raises(ValueError):
        p2_enumerate(P2_ENUMERATE_CAP + 1)


@given(st.integers(min_value=0, max_value=60))
@settings(max_examples=30, deadline=None)
def test_p2_enumerate_agrees_with_series(n):
    assert p2_enumerate(n) == p2_counts(n)[n]


@given(st.lists(st.integers(min_value=-4, max_value=4), min_size=1,
                max_size=9))
@settings(max_examples=60, deadline=None)
def test_series_ring_properties(coeffs):
    a = IntegerSeries(coeffs)
    b = IntegerSeries(list(reversed(coeffs)))
    assert (a * b).coeffs == (b * a).coeffs
    c = IntegerSeries([1] + coeffs)
    assert ((a * b) * c).coeffs[:5] == (a * (b * c)).coeffs[:5]


@given(st.lists(st.integers(min_value=-3, max_value=3), min_size=0,
                max_size=8))
@settings(max_examples=60, deadline=None)
def test_inverse_really_inverts(tail):
    s = IntegerSeries([1] + tail)
    prod = s * s.inverse()
    assert prod.coeffs == [1] + [0] * len(tail)


@given(st.integers(min_value=1, max_value=6),
       st.sampled_from([1, -1]),
       st.lists(st.integers(min_value=-3, max_value=3), min_size=3,
                max_size=10))
@settings(max_examples=60, deadline=None)
def test_binomial_passes_are_inverse(j, sign, coeffs):
    s = IntegerSeries(coeffs)
    before = list(s.coeffs)
    s.mul_binomial(j, sign)
    s.div_binomial(j, sign)
    assert list(s.coeffs) == before


def test_pochhammer_inf_validation():
    with pytest.raises(ValueError):
        pochhammer_inf(0, 1, 1, 10)
    with pytest.raises(ValueError):
        pochhammer_inf(1, 1, 2, 10)
    # (q;q)_inf * 1/(q;q)_inf == 1
    euler = pochhammer_inf(1, 1, -1, 40)
    assert (euler * euler.inverse()).coeffs == [1] + [0] * 40
