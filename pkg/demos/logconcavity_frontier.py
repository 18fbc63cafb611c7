#!/usr/bin/env python3
"""Map where p2(n)^2 >= p2(n-1) p2(n+1) fails, and where it stops failing.

The violations are exactly the odd n below a finite frontier.  With --plot
(needs matplotlib) the log-ratio log(p2(n)^2 / (p2(n-1) p2(n+1))) is saved
to logconcavity.png so the odd/even split is visible.

Run:  python3 demos/logconcavity_frontier.py [--hi N] [--plot]
"""

import argparse
from math import log

from radex import logconcavity_scan, p2_counts


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--hi", type=int, default=1200, help="scan 2..HI")
    ap.add_argument("--plot", action="store_true",
                    help="save log-ratio plot to logconcavity.png")
    args = ap.parse_args()

    bad = logconcavity_scan(2, args.hi)
    odd = [n for n in bad if n % 2]
    print(f"scanned n = 2..{args.hi}: {len(bad)} violations")
    print(f"  all odd: {len(odd) == len(bad)}")
    print(f"  first: {bad[:6]} ...  last: {bad[-3:]}")
    print(f"  frontier: no violation beyond n = {max(bad)}")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        counts = p2_counts(args.hi + 1)
        ns = range(2, args.hi + 1)
        ratio = [2 * log(counts[n]) - log(counts[n - 1]) - log(counts[n + 1])
                 for n in ns]
        fig, ax = plt.subplots(figsize=(9, 4))
        ax.axhline(0.0, color="grey", lw=0.7)
        ax.plot([n for n in ns if n % 2 == 0],
                [r for n, r in zip(ns, ratio) if n % 2 == 0],
                ".", ms=2, label="even n")
        ax.plot([n for n in ns if n % 2],
                [r for n, r in zip(ns, ratio) if n % 2],
                ".", ms=2, label="odd n")
        ax.set_xlabel("n")
        ax.set_ylabel("log ratio")
        ax.set_title("log-concavity defect of p2")
        ax.legend()
        fig.tight_layout()
        fig.savefig("logconcavity.png", dpi=150)
        print("wrote logconcavity.png")


if __name__ == "__main__":
    main()
