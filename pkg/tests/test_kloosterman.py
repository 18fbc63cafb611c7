"""Tests for the exact twisted-sum layer.

The plain sums get two independent checks: a float64 cmath oracle and the
classical number-theoretic identities (Ramanujan sums, totient).  The family
sums get structural checks (table route vs direct route, angle-multiset
symmetries) and the three odd-family reductions are verified as *exact*
equalities of angle multisets, not numerically.
"""

import io
from collections import Counter
from fractions import Fraction
from math import gcd

import pytest
from sympy import divisors, mobius, totient

from oracles import naive_classical_K, naive_rademacher_A
from radex.kloosterman import (EVEN_FAMILIES, FAMILY_CASE, FAMILY_D,
                               KloostermanValue, bound_report, classical_K,
                               family_K, family_values_for_n, rademacher_A,
                               reduce_to_classical, script_K, units,
                               write_bound_report_csv)
from radex.multiplier import (CASE_OF_GCD, CuspPair, make_cusp_pair,
                              ratio_closed_form)
from radex.numerics import make_context

CTX = make_context(120)


def ks_in_family(family, k_max):
    return [k for k in range(1, k_max + 1)
            if CASE_OF_GCD[gcd(k, 6)] == FAMILY_CASE[family]]


def angle_multiset(kv):
    return Counter(t.rho for t in kv.terms)


def test_units():
    assert units(1) == [0]
    assert units(12) == [1, 5, 7, 11]
    assert all(units(k) == sorted(units(k)) for k in range(1, 30))


def test_classical_K_against_float_oracle():
    for k in range(1, 19):
        for n, m in [(0, 0), (1, 0), (3, 2), (7, 5), (11, 1)]:
            got = classical_K(k, n, m).value(CTX)
            want = naive_classical_K(k, n, m)
            assert abs(complex(got) - want) < 1e-9, (k, n, m)


def test_classical_K_is_ramanujan_sum_at_m_zero():
    # sum over units of e^{-2 pi i n h / k} = c_k(n) = sum_{d | (n,k)} d mu(k/d)
    for k in range(1, 25):
        for n in range(0, 11):
            c = sum(d * mobius(k // d) for d in divisors(k) if n % d == 0)
            got = classical_K(k, n, 0).value(CTX)
            assert abs(got - int(c)) < 1e-30, (k, n)
    assert abs(classical_K(9, 0, 0).value(CTX) - int(totient(9))) < 1e-30


def test_classical_K_real_and_symmetric_as_multisets():
    # h -> k - h negates every angle: the multiset is conjugation-closed.
    # h -> h' turns K(n,m) into conj(K(m,n)); combined, K(n,m) = K(m,n).
    for k in range(1, 30):
        for n, m in [(1, 0), (2, 5), (4, 4), (9, 2)]:
            a = angle_multiset(classical_K(k, n, m))
            assert a == Counter((-r) % 1 for r in a.elements()), (k, n, m)
            b = angle_multiset(classical_K(k, m, n))
            assert a == b, (k, n, m)


def test_rademacher_A_against_float_oracle():
    for k in range(1, 16):
        for n in (1, 5, 12):
            got = rademacher_A(k, n).value(CTX)
            want = naive_rademacher_A(k, n)
            assert abs(complex(got) - want) < 1e-8, (k, n)
    assert classical_K(1, 7, 3).value(CTX) == 1
    assert rademacher_A(1, 7).value(CTX) == 1


def test_script_K_at_k_one_is_one():
    kv = script_K(1, 5)
    assert len(kv) == 1 and kv.terms[0].rho == 0
    assert kv.value(CTX) == 1


def test_script_K_real_for_all_k():
    for k in ks_in_family(7, 25):
        for n in (1, 2, 10):
            a = angle_multiset(script_K(k, n))
            assert a == Counter((-r) % 1 for r in a.elements()), (k, n)


@pytest.mark.parametrize("family", [1, 3, 7])
def test_reduction_to_plain_sum_is_exact(family):
    """K^[family](n, m) = sign * K_k(n', m') as angle multisets.

    sign = -1 is a global half-turn of every angle, so the comparison stays
    in exact rational arithmetic; no complex number is ever formed.
    """
    for k in ks_in_family(family, 26):
        for n in (0, 1, 4, 9):
            for m in (0, 1, 3):
                nprime, mprime, sign = reduce_to_classical(family, k, n, m)
                lhs = angle_multiset(family_K(family, k, None, n, m))
                shift = Fraction(1, 2) if sign == -1 else Fraction(0)
                rhs = Counter((t.rho + shift) % 1
                              for t in classical_K(k, nprime, mprime).terms)
                assert lhs == rhs, (family, k, n, m)


def test_reduction_rejections():
    with pytest.raises(ValueError):
        reduce_to_classical(2, 6, 1, 0)
    with pytest.raises(ValueError):
        reduce_to_classical(1, 5, 1, 0)  # 5 is not divisible by 6
    with pytest.raises(ValueError):
        reduce_to_classical(7, 4, 1, 0)


@pytest.mark.parametrize("family,k", [(4, 2), (4, 8), (4, 10), (6, 3),
                                      (6, 9), (8, 5), (8, 13)])
def test_table_route_matches_direct_route_even(family, k):
    for n in (1, 9):
        for m in (0, 2):
            for phase in ((1, -1) if family == 8 else (1,)):
                table = family_values_for_n(family, k, n, CTX,
                                            k8_phase=phase, m=m)
                assert len(table) == k
                for nu in range(1, k + 1):
                    direct = family_K(family, k, nu, n, m,
                                      k8_phase=phase).value(CTX)
                    assert abs(table[nu - 1] - direct) < 1e-30, (nu, n, m)


@pytest.mark.parametrize("family,k", [(1, 6), (1, 12), (3, 4), (3, 14),
                                      (5, 9), (7, 11)])
def test_table_route_matches_direct_route_odd(family, k):
    for n in (1, 7):
        table = family_values_for_n(family, k, n, CTX, m=1)
        direct = family_K(family, k, None, n, 1).value(CTX)
        assert abs(table - direct) < 1e-30


def test_ratio_closed_form_ignores_lift_choice():
    """Shifting h' by 2dk leaves each closed-form ratio fixed, exactly."""
    for case, d in [("div6", 1), ("gcd2", 3), ("gcd3", 8), ("gcd1", 24)]:
        for k in range(1, 25):
            if CASE_OF_GCD[gcd(k, 6)] != case:
                continue
            for h in units(k):
                if k == 1 and h != 0:
                    continue
                pair = make_cusp_pair(h, k, d)
                shifted = CuspPair(pair.h, pair.k,
                                   pair.hprime + 2 * d * pair.k, d)
                assert (ratio_closed_form(case, pair)
                        == ratio_closed_form(case, shifted)), (case, h, k)


def test_value_embedding_is_deterministic():
    kv = classical_K(18, 5, 3)
    assert kv.value(CTX) == kv.value(CTX)
    again = classical_K(18, 5, 3)
    assert [t.rho for t in kv.terms] == [t.rho for t in again.terms]


def test_family_K_validation():
    with pytest.raises(ValueError):
        family_K(9, 5, None, 1)
    with pytest.raises(ValueError):
        family_K(4, 3, 1, 1)  # 3 is in the gcd3 class, not gcd2
    with pytest.raises(ValueError):
        family_K(4, 2, None, 1)  # even family needs nu
    with pytest.raises(ValueError):
        family_K(1, 6, 1, 1)  # odd family takes no nu
    with pytest.raises(ValueError):
        family_K(8, 5, 1, 1, k8_phase=0)
    with pytest.raises(ValueError):
        script_K(2, 1)
    with pytest.raises(ValueError):
        classical_K(0, 1, 1)


def test_bound_report_shapes():
    rows, max_ratio = bound_report(7, 13, 5, 0.01, CTX)
    assert all(r[3] is None for r in rows)
    assert len(rows) == len(ks_in_family(7, 13)) * 5
    assert max_ratio == pytest.approx(max(r[5] for r in rows))
    for _, k, n, _, a, ratio in rows:
        assert a >= 0 and ratio >= 0

    rows4, _ = bound_report(4, 10, 3, 0.01, CTX)
    per_k = Counter(r[1] for r in rows4)
    for k in ks_in_family(4, 10):
        assert per_k[k] == 3 * k  # every nu in 1..k for each n

    with pytest.raises(ValueError):
        bound_report(7, 5, 5, 0.0, CTX)


def test_bound_report_csv_format():
    rows, _ = bound_report(1, 12, 2, 0.01, CTX)
    buf = io.StringIO()
    write_bound_report_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "family,k,n,nu,abs_value,ratio"
    assert len(lines) == 1 + len(rows)
    first = lines[1].split(",")
    assert first[0] == "1" and first[3] == ""  # odd family: empty nu column
