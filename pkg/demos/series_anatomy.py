#!/usr/bin/env python3
"""Break the convergent series for one n into per-k contributions.

Shows which congruence classes of k carry weight, how quickly the terms
decay, and how the partial sums settle into the integer.

Run:  python3 demos/series_anatomy.py [n]
"""

import sys
from math import gcd

from radex import default_bits, make_context, p2_counts, theorem_term

CLASSES_OF_GCD = {
    1: ("gcd1_modular", "gcd1_mock"),
    2: ("gcd2",),
    3: ("gcd3",),
    6: (),
}


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 30
    ctx = make_context(default_bits(n))
    truth = p2_counts(n)[n]

    total = ctx.mp.mpc(0)
    print(f"n = {n}, exact p2(n) = {truth}\n")
    print(f"{'k':>3}  {'classes':<24} {'term':>14}  {'running sum':>16}")
    for k in range(1, 25):
        classes = CLASSES_OF_GCD[gcd(k, 6)]
        term = sum((theorem_term(c, k, n, ctx) for c in classes),
                   start=ctx.mp.mpc(0))
        total += term
        label = " + ".join(classes) if classes else "(empty: 6 | k)"
        print(f"{k:>3}  {label:<24} {float(term.real):>14.6f}  "
              f"{float(total.real):>16.9f}")

    print(f"\nafter k = 24 the sum sits {abs(float(total.real) - truth):.2e} "
          f"from the integer; multiples of 6 contribute nothing at all.")


if __name__ == "__main__":
    main()
