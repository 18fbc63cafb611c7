"""Independent reference implementations used by the test suite.

Everything in this file is deliberately written from first principles with a
different algorithm than the package uses, so that agreement between the two
is evidence rather than tautology: partition counts come from the pentagonal
recurrence instead of product expansion, the restricted counts from direct
recursive enumeration instead of the generating-function DP, Dedekind sums
from the literal double sum, and Kloosterman sums from float64 cmath off the
raw definitions.
"""

import cmath
import math
from fractions import Fraction
from functools import lru_cache


def pentagonal_p(N):
    """p(0..N) via Euler's pentagonal-number recurrence (exact ints)."""
    p = [1] + [0] * N
    for n in range(1, N + 1):
        total = 0
        j = 1
        while True:
            g1 = j * (3 * j - 1) // 2
            g2 = j * (3 * j + 1) // 2
            if g1 > n:
                break
            sign = 1 if j % 2 else -1
            total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            j += 1
        p[n] = total
    return p


def p2_by_enumeration(n):
    """Count partitions of n with no two consecutive part sizes, by direct
    recursion over the smallest part used.  Exponential-ish; keep n <= ~60."""

    @lru_cache(maxsize=None)
    def count(remaining, min_part, banned):
        # partitions of `remaining` into parts >= min_part, where part size
        # `banned` (== last used part + 1, or 0) must be skipped
        if remaining == 0:
            return 1
        total = 0
        for part in range(min_part, remaining + 1):
            if part == banned:
                continue
            # any number of copies of `part`
            copies = 1
            while copies * part <= remaining:
                total += count(remaining - copies * part, part + 1, part + 1)
                copies += 1
        return total

    result = count(n, 1, 0)
    count.cache_clear()
    return result


def dedekind_sum(h, k):
    """s(h,k) = sum_{j=1}^{k-1} ((j/k))((hj/k)) as an exact Fraction."""

    def saw(x):
        if x.denominator == 1:
            return Fraction(0)
        return x - Fraction(math.floor(x)) - Fraction(1, 2)

    return sum((saw(Fraction(j, k)) * saw(Fraction(h * j, k))
                for j in range(1, k)), Fraction(0))


def naive_classical_K(k, n, m):
    """K_k(n,m) by float64 cmath straight off the definition."""
    if k == 1:
        return 1 + 0j
    total = 0j
    for h in range(1, k):
        if math.gcd(h, k) != 1:
            continue
        hp = (-pow(h, -1, k)) % k
        total += cmath.exp(-2j * cmath.pi * (n * h - m * hp) / k)
    return total


def naive_rademacher_A(k, n):
    """A_k(n) with the eta multiplier built from the Dedekind-sum formula
    omega = exp(pi i s(h,k)), float64."""
    if k == 1:
        return 1 + 0j
    total = 0j
    for h in range(1, k):
        if math.gcd(h, k) != 1:
            continue
        s = float(dedekind_sum(h, k))
        total += cmath.exp(1j * cmath.pi * s - 2j * cmath.pi * n * h / k)
    return total
