"""Exact evaluation of the twisted Kloosterman-type sums.

All sums here run over residues h mod k with gcd(h,k)=1 and are finite sums
of exact roots of unity; a :class:`KloostermanValue` keeps the per-h terms as
rational angles and embeds to a complex number only under a caller-supplied
context, accumulating in ascending-h order for bit-reproducible output.

Three layers:

* ``classical_K`` / ``rademacher_A`` — the plain twisted sums: K_k(n,m) with
  phase e^{-2 pi i (n h - m h')/k}, and the multiplier-weighted A_k(n) from
  the classical convergent series for p(n).
* ``family_K`` — eight families of multiplier-twisted sums, two per
  congruence class of gcd(k,6) (6|k: families 1,2; gcd=2: 3,4; gcd=3: 5,6;
  gcd=1: 7,8).  The odd-numbered family of each pair carries a fixed extra
  phase; the even-numbered one carries a nu-dependent quadratic phase
  e^{(pi i/k)(-3 nu^2 + nu) h'} and enters the convergent p2-series.
* ``script_K`` — the weight-0 combination omega_{h,k} omega_{2h,k}
  omega_{6h,k} / omega_{3h,k}^3 twisted by e^{-2 pi i n h/k}, the coefficient
  sum of the dominant (modular) part of the p2-series.

The h' inside every family phase is the canonical lift produced by
``make_cusp_pair`` — the phases are only invariant under h' -> h' + 2dk, so a
fixed lift is what makes the sums well-defined; a test pins that invariance.

``family_K`` implements the family-8 quadratic phase with the +nu sign, which
is forced by requiring the assembled p2-series to converge to integers (the
opposite sign deflects the series past rounding tolerance once n reaches a
few hundred); that sign survives behind the ``k8_phase`` flag so the
discrimination stays executable (see formula module calibration).
"""

from __future__ import annotations

import csv
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from .multiplier import (
    CASE_D,
    CASE_OF_GCD,
    RootOfUnity,
    make_cusp_pair,
    mod_inverse,
    omega,
    ratio_from_omega,
)

__all__ = [
    "KloostermanValue",
    "units",
    "classical_K",
    "rademacher_A",
    "family_K",
    "script_K",
    "reduce_to_classical",
    "bound_report",
    "write_bound_report_csv",
    "FAMILY_CASE",
    "FAMILY_D",
    "FAMILY_MDIV",
]

# family index -> congruence case of k, lift divisibility d, and the divisor
# applied to h' inside the m-argument phase e^{(2 pi i/k) m h'/mdiv}
FAMILY_CASE = {1: "div6", 2: "div6", 3: "gcd2", 4: "gcd2",
               5: "gcd3", 6: "gcd3", 7: "gcd1", 8: "gcd1"}
FAMILY_D = {1: 1, 2: 1, 3: 3, 4: 3, 5: 8, 6: 8, 7: 24, 8: 24}
FAMILY_MDIV = {1: 1, 2: 1, 3: 3, 4: 3, 5: 2, 6: 2, 7: 6, 8: 6}

EVEN_FAMILIES = frozenset({2, 4, 6, 8})


class KloostermanValue:
    """A finite sum of exact roots of unity, one term per h coprime to k."""

    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms: Sequence[RootOfUnity]):
        self.k = k
        self.terms = tuple(terms)

    def __len__(self) -> int:
        return len(self.terms)

    def value(self, ctx):
        """Complex embedding, summed in fixed (ascending-h) term order."""
        total = ctx.mp.mpc(0)
        for t in self.terms:
            total += t.embed(ctx)
        return total

    def abs(self, ctx):
        return abs(self.value(ctx))

    def __repr__(self) -> str:  # pragma: no cover
        return f"KloostermanValue(k={self.k}, {len(self.terms)} terms)"


def units(k: int) -> List[int]:
    """Residues h in [0,k) coprime to k (just [0] for k=1)."""
    if k == 1:
        return [0]
    return [h for h in range(k) if gcd(h, k) == 1]


def classical_K(k: int, n: int, m: int) -> KloostermanValue:
    """K_k(n,m) = sum_h e^{-(2 pi i/k)(n h - m h')}, h h' == -1 (mod k)."""
    if k < 1:
        raise ValueError("k must be positive")
    terms = []
    for h in units(k):
        hp = (-mod_inverse(h, k)) % k if k > 1 else 0
        terms.append(RootOfUnity(Fraction(-(n * h - m * hp), k)))
    return KloostermanValue(k, terms)


def rademacher_A(k: int, n: int) -> KloostermanValue:
    """A_k(n) = sum_h omega_{h,k} e^{-2 pi i n h/k}."""
    if k < 1:
        raise ValueError("k must be positive")
    terms = [RootOfUnity(omega(h, k).rho - Fraction(n * h, k)) for h in units(k)]
    return KloostermanValue(k, terms)


def _family_term_rho(family: int, k: int, h: int, nu: Optional[int],
                     n: int, m: int, k8_phase: int) -> Fraction:
    """Exact angle of the h-term of K^[family](...; n, m)."""
    case, d, mdiv = FAMILY_CASE[family], FAMILY_D[family], FAMILY_MDIV[family]
    pair = make_cusp_pair(h, k, d)
    hp = pair.hprime
    rho = ratio_from_omega(case, pair).rho
    if family in (1, 3):
        rho += Fraction((2 - 3 * k) * hp, 8)      # e^{(pi i/2)(1 - 3k/2) h'}
    elif family in (5, 7):
        rho += Fraction(3 * hp, 8 * k)            # e^{3 pi i h'/(4k)}
    else:
        s = k8_phase if family == 8 else 1
        rho += Fraction((-3 * nu * nu + s * nu) * hp, 2 * k)
    rho += Fraction(-n * h, k) + Fraction(m * (hp // mdiv), k)
    return rho


def family_K(family: int, k: int, nu: Optional[int], n: int, m: int = 0,
             *, k8_phase: int = 1) -> KloostermanValue:
    """K^[family](nu; n, m) as an exact sum; nu only for even families.

    The congruence class of k must match the family; h' is the canonical lift
    with FAMILY_D[family] | h', and the fractional phases h'/3, h'/2, h'/6 in
    the m-argument are exact integers by that divisibility.
    """
    if family not in FAMILY_CASE:
        raise ValueError(f"family must be 1..8, got {family}")
    if CASE_OF_GCD[gcd(k, 6)] != FAMILY_CASE[family]:
        raise ValueError(
            f"k={k} (gcd(k,6)={gcd(k, 6)}) does not belong to family {family}")
    if family in EVEN_FAMILIES:
        if nu is None:
            raise ValueError(f"family {family} requires nu")
    elif nu is not None:
        raise ValueError(f"family {family} takes no nu")
    if k8_phase not in (1, -1):
        raise ValueError("k8_phase must be +1 or -1")
    terms = [
        RootOfUnity(_family_term_rho(family, k, h, nu, n, m, k8_phase))
        for h in units(k)
    ]
    return KloostermanValue(k, terms)


def script_K(k: int, n: int) -> KloostermanValue:
    """The weight-0 multiplier combination twisted by e^{-2 pi i n h/k}.

    Defined for gcd(k,6)=1; per h the multiplier is
    omega_{h,k} omega_{2h,k} omega_{6h,k} / omega_{3h,k}^3 (arguments reduced
    mod k).  Its value at k=1 is +1.
    """
    if gcd(k, 6) != 1:
        raise ValueError(f"script_K requires gcd(k,6)=1, got k={k}")
    terms = []
    for h in units(k):
        if k == 1:
            rho = Fraction(0)
        else:
            rho = (
                omega(h, k).rho
                + omega(2 * h % k, k).rho
                + omega(6 * h % k, k).rho
                - 3 * omega(3 * h % k, k).rho
            )
        terms.append(RootOfUnity(rho - Fraction(n * h, k)))
    return KloostermanValue(k, terms)


def _exact_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"non-integer {what} shift: {x}")
    return x.numerator


def reduce_to_classical(family: int, k: int, n: int, m: int) -> Tuple[int, int, int]:
    """Shifted arguments (n', m', sign) with K^[family](n,m) = sign * K_k(n',m').

    Available for the three odd families that collapse to the classical sum:

        family 1 (6|k):        sign -1,  n' = n - (5k+18)k/72,
                               m' = m + (k/4)(1 - 3k/2)
        family 3 (gcd(k,6)=2): sign +1,  n' = [3]_k (n - k(k+2)/8) mod k,
                               m' = m - (k^2+2)/6 + (3k/4)(1 - 3k/2)
        family 7 (gcd(k,6)=1): sign (-1)^{(k-1)/2},  n' = [24]_k n mod k,
                               m' = (5k^2+22)/3 + 4m

    ([c]_k is the inverse of c mod k.)  Every shift is integral for valid k;
    a non-integral shift raises rather than rounding silently.
    """
    if family not in (1, 3, 7):
        raise ValueError("reduction available for families 1, 3, 7 only")
    if CASE_OF_GCD[gcd(k, 6)] != FAMILY_CASE[family]:
        raise ValueError(f"k={k} does not belong to family {family}")
    if family == 1:
        nprime = _exact_int(Fraction(n) - Fraction((5 * k + 18) * k, 72), "n")
        mprime = _exact_int(Fraction(m) + Fraction(k * (2 - 3 * k), 8), "m")
        return nprime, mprime, -1
    if family == 3:
        shift = _exact_int(Fraction(k * (k + 2), 8), "n")
        nprime = (mod_inverse(3, k) * (n - shift)) % k if k > 1 else 0
        mprime = _exact_int(
            Fraction(m) - Fraction(k * k + 2, 6) + Fraction(3 * k * (2 - 3 * k), 8), "m")
        return nprime, mprime, 1
    nprime = (mod_inverse(24, k) * n) % k if k > 1 else 0
    mprime = _exact_int(Fraction(5 * k * k + 22, 3), "m") + 4 * m
    sign = -1 if (k - 1) // 2 % 2 else 1
    return nprime, mprime, sign


# ----------------------------------------------------------------------
# cached per-k structure used by the report and by the formula module


@lru_cache(maxsize=None)
def family_structure(k: int, family: int, k8_phase: int = 1):
    """Per-h data for a family at fixed k: (hs, hps, base_rhos).

    base_rhos are the angles with n = m = 0 and no nu-phase: the omega-ratio
    plus, for odd families, their fixed extra phase.  Even-family nu-phases
    and the -n h/k twist are layered on top by the consumers.
    """
    case, d = FAMILY_CASE[family], FAMILY_D[family]
    if CASE_OF_GCD[gcd(k, 6)] != case:
        raise ValueError(f"k={k} does not belong to family {family}")
    hs = tuple(units(k))
    pairs = [make_cusp_pair(h, k, d) for h in hs]
    hps = tuple(p.hprime for p in pairs)
    rhos = []
    for h, pair in zip(hs, pairs):
        rho = ratio_from_omega(case, pair).rho
        if family in (1, 3):
            rho += Fraction((2 - 3 * k) * pair.hprime, 8)
        elif family in (5, 7):
            rho += Fraction(3 * pair.hprime, 8 * k)
        rhos.append(rho % 1)
    return hs, hps, tuple(rhos)


def _roots_of_unity_row(k: int, ctx):
    """[e^{2 pi i j/k} for j in 0..k-1] at the context precision."""
    if k == 1:
        return [ctx.mp.mpc(1)]
    base = ctx.mp.expjpi(ctx.real(Fraction(2, k)))
    row = [ctx.mp.mpc(1)]
    for _ in range(k - 1):
        row.append(row[-1] * base)
    return row


def family_values_for_n(family: int, k: int, n: int, ctx, *,
                        k8_phase: int = 1, m: int = 0):
    """Embedded values of K^[family](nu; n, m) for nu = 1..k (even families)
    or the single value (odd families), computed via shared per-k tables.

    Matches ``family_K(...).value(ctx)`` term for term; the table route just
    avoids recomputing the omega-ratios for every (nu, n).
    """
    hs, hps, rhos = family_structure(k, family, k8_phase)

    def embed(rho: Fraction):
        return ctx.mp.expjpi(ctx.real(2 * (rho % 1)))

    twist = [embed(Fraction(-n * h, k) + Fraction(m * (hp // FAMILY_MDIV[family]), k))
             for h, hp in zip(hs, hps)]
    base = [embed(rho) for rho in rhos]
    if family not in EVEN_FAMILIES:
        total = ctx.mp.mpc(0)
        for b, t in zip(base, twist):
            total += b * t
        return total
    roots = _roots_of_unity_row(2 * k, ctx)
    s = k8_phase if family == 8 else 1
    out = []
    for nu in range(1, k + 1):
        c = (-3 * nu * nu + s * nu) % (2 * k)
        total = ctx.mp.mpc(0)
        for b, t, hp in zip(base, twist, hps):
            total += b * t * roots[(c * hp) % (2 * k)]
        out.append(total)
    return out


# ----------------------------------------------------------------------
# bound-shape diagnostics


def bound_report(family: int, k_max: int, n_max: int, epsilon: float, ctx
                 ) -> Tuple[List[tuple], float]:
    """Ratios |K^[family]| / (n^{1/3} k^{2/3+epsilon}) over a grid.

    Returns (rows, max_ratio) with rows (family, k, n, nu, abs_value, ratio);
    nu is None for odd families.  Diagnostic only: the expected growth bound
    carries an ineffective constant, so this reports the observed shape.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    mp = ctx.mp
    rows: List[tuple] = []
    max_ratio = 0.0
    ks = [k for k in range(1, k_max + 1)
          if CASE_OF_GCD[gcd(k, 6)] == FAMILY_CASE[family]]
    for k in ks:
        hs, hps, rhos = family_structure(k, family)
        roots2k = _roots_of_unity_row(2 * k, ctx)

        def embed(rho):
            return mp.expjpi(ctx.real(2 * (rho % 1)))

        base = [embed(r) for r in rhos]
        if family in EVEN_FAMILIES:
            nu_tables = []
            for nu in range(1, k + 1):
                c = (-3 * nu * nu + nu) % (2 * k)
                nu_tables.append([b * roots2k[(c * hp) % (2 * k)]
                                  for b, hp in zip(base, hps)])
        for n in range(1, n_max + 1):
            twist = [roots2k[(-2 * n * h) % (2 * k)] for h in hs]
            denom = float(mp.power(n, mp.mpf(1) / 3)
                          * mp.power(k, mp.mpf(2) / 3 + ctx.real(epsilon)))
            if family in EVEN_FAMILIES:
                for nu in range(1, k + 1):
                    total = mp.mpc(0)
                    for b, t in zip(nu_tables[nu - 1], twist):
                        total += b * t
                    a = float(abs(total))
                    ratio = a / denom
                    rows.append((family, k, n, nu, a, ratio))
                    max_ratio = max(max_ratio, ratio)
            else:
                total = mp.mpc(0)
                for b, t in zip(base, twist):
                    total += b * t
                a = float(abs(total))
                ratio = a / denom
                rows.append((family, k, n, None, a, ratio))
                max_ratio = max(max_ratio, ratio)
    return rows, max_ratio


def write_bound_report_csv(rows: Iterable[tuple], fp) -> None:
    """CSV with header family,k,n,nu,abs_value,ratio (nu empty for odd families)."""
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(["family", "k", "n", "nu", "abs_value", "ratio"])
    for family, k, n, nu, a, ratio in rows:
        w.writerow([family, k, n, "" if nu is None else nu,
                    repr(a), repr(ratio)])
