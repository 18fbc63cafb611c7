"""Command-line front end: batch evaluation, oracles, verification suites.

Subcommands
-----------
p2            evaluate the convergent p2-series, print certificates
p             evaluate the classical series for the unrestricted p(n)
oracle        exact integer coefficient tables (kinds: p, p2, alpha, r)
verify        run an invariant suite: multipliers, kloosterman, mordell,
              decomposition, logconcavity
bound-report  growth-shape table for one Kloosterman family (CSV-friendly)

Exit codes: 0 success, 1 usage/configuration error, 2 stabilization or
verification failure.  Output is byte-identical across runs with the same
configuration: fixed-order reduction, fixed float formatting, no timestamps.
--threads is accepted for interface compatibility and validated, but
evaluation is single-threaded; results do not depend on its value.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from fractions import Fraction
from math import gcd
from typing import List, Optional, Tuple

from .formula import (FormulaConfig, default_k_max, logconcavity_scan,
                      p2_exact, rademacher_p)
from .integrals import J_full, J_star
from .kloosterman import (FAMILY_CASE, bound_report, classical_K, family_K,
                          reduce_to_classical, write_bound_report_csv)
from .multiplier import (CASE_D, CASE_OF_GCD, make_cusp_pair,
                         ratio_closed_form, ratio_from_omega)
from .numerics import default_bits, default_bits_classical, make_context
from .qseries import f_series, p2_counts, partition_counts, xi_series

__all__ = ["main"]

ORACLE_CAP = 2000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


# ----------------------------------------------------------------------
# shared option plumbing


def _add_series_flags(sp, with_variants: bool):
    target = sp.add_mutually_exclusive_group(required=True)
    target.add_argument("--n", type=int, help="single argument n >= 1")
    target.add_argument("--range", dest="range_", metavar="A..B",
                        help="inclusive range of arguments, e.g. 1..100")
    sp.add_argument("--k-max", type=int, default=None,
                    help="series truncation; values below 8 are raised to 8, "
                         "where the stabilization window spans the whole run "
                         "and short runs honestly report non-stabilized")
    sp.add_argument("--bits", default="auto",
                    help="working precision in bits, or 'auto' for the "
                         "policy at the largest requested n "
                         "(env RADEX_BITS overrides)")
    sp.add_argument("--tol", default=None,
                    help="total quadrature error budget (decimal string)")
    sp.add_argument("--output", choices=("json", "csv", "plain"),
                    default="plain")
    sp.add_argument("--threads", default="auto",
                    help="accepted and validated; evaluation is "
                         "single-threaded and output never depends on it")
    sp.add_argument("--check", action="store_true",
                    help="compare every rounded value against the exact "
                         "coefficient oracle")
    if with_variants:
        sp.add_argument("--k1-sign", type=int, choices=(1, -1), default=1)
        sp.add_argument("--k8-phase", type=int, choices=(1, -1), default=1)


def _parse_range(args) -> Tuple[int, int]:
    if args.n is not None:
        if args.n < 1:
            raise UsageError("--n must be >= 1")
        return args.n, args.n
    m = re.fullmatch(r"(\d+)\.\.(\d+)", args.range_)
    if not m:
        raise UsageError("--range must look like A..B")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo < 1 or hi < lo:
        raise UsageError("--range needs 1 <= A <= B")
    return lo, hi


def _resolve_bits(args, n_top: int, classical: bool) -> int:
    raw = os.environ.get("RADEX_BITS", "").strip() or args.bits
    if raw == "auto":
        return (default_bits_classical if classical else default_bits)(n_top)
    try:
        bits = int(raw)
    except ValueError:
        raise UsageError(f"--bits must be an integer or 'auto', got {raw!r}")
    if bits < 64:
        raise UsageError("--bits must be at least 64")
    return bits


def _validate_threads(args):
    if args.threads == "auto":
        return
    try:
        t = int(args.threads)
    except ValueError:
        raise UsageError("--threads must be an integer or 'auto'")
    if t < 1:
        raise UsageError("--threads must be >= 1")


def _fmt(x) -> str:
    return format(float(x), ".6e")


# ----------------------------------------------------------------------
# p2 / p


def _emit_certificates(certs, checks, args) -> None:
    if args.output == "json":
        payload = []
        for cert, expect in zip(certs, checks):
            d = cert.to_json_dict()
            if args.check:
                d["check"] = (cert.rounded == expect)
            payload.append(d)
        doc = payload[0] if args.n is not None else payload
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return
    if args.output == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        head = ["n", "value", "stabilized", "k_used", "residual",
                "im_residue"]
        if args.check:
            head.append("check")
        w.writerow(head)
        for cert, expect in zip(certs, checks):
            row = [cert.n, cert.rounded, str(cert.stabilized).lower(),
                   cert.k_used,
                   _fmt(abs(cert.final_value - cert.rounded)),
                   _fmt(cert.im_residue)]
            if args.check:
                row.append("ok" if cert.rounded == expect else "mismatch")
            w.writerow(row)
        return
    name = certs[0].series
    for cert, expect in zip(certs, checks):
        line = (f"{name}({cert.n}) = {cert.rounded}  "
                f"stabilized={'yes' if cert.stabilized else 'no'} "
                f"k_used={cert.k_used} "
                f"residual={_fmt(abs(cert.final_value - cert.rounded))}")
        if args.check:
            line += ("  check=ok" if cert.rounded == expect
                     else f"  check=MISMATCH(expected {expect})")
        sys.stdout.write(line + "\n")


def cmd_p2(args) -> int:
    lo, hi = _parse_range(args)
    _validate_threads(args)
    bits = _resolve_bits(args, hi, classical=False)
    ctx = make_context(bits)
    config = FormulaConfig(k1_sign=args.k1_sign, k8_phase=args.k8_phase)
    k_max = args.k_max
    if k_max is not None and k_max < 8:
        k_max = 8
    quad_tol = Fraction(args.tol) if args.tol is not None else None
    expected = p2_counts(hi) if args.check else [None] * (hi + 1)
    certs = []
    for n in range(lo, hi + 1):
        certs.append(p2_exact(n, k_max=k_max, ctx=ctx, config=config,
                              quad_tol=quad_tol))
    _emit_certificates(certs, [expected[c.n] for c in certs], args)
    ok = all(c.stabilized for c in certs)
    if args.check:
        ok = ok and all(c.rounded == expected[c.n] for c in certs)
    return 0 if ok else 2


def cmd_p(args) -> int:
    lo, hi = _parse_range(args)
    _validate_threads(args)
    bits = _resolve_bits(args, hi, classical=True)
    ctx = make_context(bits)
    k_max = args.k_max
    if k_max is not None and k_max < 8:
        k_max = 8
    expected = partition_counts(hi) if args.check else [None] * (hi + 1)
    certs = [rademacher_p(n, k_max=k_max, ctx=ctx)
             for n in range(lo, hi + 1)]
    _emit_certificates(certs, [expected[c.n] for c in certs], args)
    ok = all(c.stabilized for c in certs)
    if args.check:
        ok = ok and all(c.rounded == expected[c.n] for c in certs)
    return 0 if ok else 2


# ----------------------------------------------------------------------
# oracle


def cmd_oracle(args) -> int:
    if args.to < 0:
        raise UsageError("--to must be >= 0")
    if args.to > ORACLE_CAP:
        raise UsageError(f"--to exceeds the oracle cap {ORACLE_CAP}")
    N = args.to
    if args.kind == "p":
        values = partition_counts(N)
    elif args.kind == "p2":
        values = p2_counts(N)
    elif args.kind == "alpha":
        values = f_series(N).coeffs
    else:
        values = xi_series(N).coeffs
    if args.output == "json":
        doc = {"schema": "1", "kind": args.kind, "to": N,
               "values": list(values)}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    elif args.output == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["n", "value"])
        for n, v in enumerate(values):
            w.writerow([n, v])
    else:
        sys.stdout.write(",".join(str(v) for v in values) + "\n")
    return 0


# ----------------------------------------------------------------------
# verify suites


def _suite_multipliers(args) -> Tuple[int, List[str]]:
    k_max = args.k_max or 60
    checked = 0
    failures = []
    for k in range(1, k_max + 1):
        case = CASE_OF_GCD[gcd(k, 6)]
        d = CASE_D[case]
        for h in range(k if k > 1 else 1):
            if k > 1 and gcd(h, k) != 1:
                continue
            pair = make_cusp_pair(h if k > 1 else 0, k, d)
            checked += 1
            if ratio_closed_form(case, pair) != ratio_from_omega(case, pair):
                failures.append(f"case={case} h={pair.h} k={k}")
    return checked, failures


def _suite_kloosterman(args) -> Tuple[int, List[str]]:
    """Exact equality of the family reductions with the classical sum.

    Both sides are finite multisets of rational angles; a reduction with
    sign -1 shifts every angle by 1/2.  Equality of the multisets is the
    strongest form of the identity and needs no floating point at all.
    """
    from collections import Counter
    k_max = args.k_max or 50
    nm = 10
    checked = 0
    failures = []
    for family in (1, 3, 7):
        ks = [k for k in range(1, k_max + 1)
              if CASE_OF_GCD[gcd(k, 6)] == FAMILY_CASE[family]]
        for k in ks:
            for n in range(nm + 1):
                for m in range(nm + 1):
                    lhs = family_K(family, k, None, n, m)
                    nn, mm, sign = reduce_to_classical(family, k, n, m)
                    rhs = classical_K(k, nn, mm)
                    shift = Fraction(0) if sign == 1 else Fraction(1, 2)
                    checked += 1
                    left = Counter(t.rho % 1 for t in lhs.terms)
                    right = Counter((t.rho + shift) % 1 for t in rhs.terms)
                    if left != right:
                        failures.append(
                            f"family={family} k={k} n={n} m={m}")
    return checked, failures


def _mordell_gap_constant(bits: int) -> float:
    """max over the test grid of |J_full - J_star| * dist(pi/2, beta mod pi),
    the fitted constant of the truncation estimate."""
    ctx = make_context(bits)
    mp = ctx.mp
    worst = mp.mpf(0)
    grid = []
    for b, ks in ((Fraction(5, 36), (2, 4)), (Fraction(1, 6), (3, 9)),
                  (Fraction(1, 18), (5, 7))):
        for k in ks:
            grid.append((b, k))
    for b, k in grid:
        for nu in range(1, k + 1):
            beta = ctx.pi * (nu - mp.mpf(1) / 6) / k
            dist = abs(ctx.pi / 2 - beta)
            # beta <= pi(k - 1/6)/k < pi, so distance to pi/2 mod pi is
            # attained at pi/2 itself
            for z in (mp.mpc(k) / 64,
                      k * mp.mpc(mp.mpf(1) / 64, -mp.mpf(3) / 128),
                      k * mp.mpc(mp.mpf(1) / 100, mp.mpf(1) / 200)):
                gap = abs(J_full(b, k, nu, z, ctx) - J_star(b, k, nu, z, ctx))
                worst = max(worst, gap * dist)
    return float(worst)


def _suite_mordell(args) -> Tuple[int, List[str]]:
    c1 = _mordell_gap_constant(96)
    c2 = _mordell_gap_constant(160)
    failures = []
    if not (c1 > 0 and c2 > 0):
        failures.append("degenerate gap constant")
    elif abs(c1 - c2) > 0.2 * max(c1, c2):
        failures.append(
            f"gap constant unstable under refinement: {c1:.6f} vs {c2:.6f}")
    return 2, failures


def _suite_decomposition(args) -> Tuple[int, List[str]]:
    to = args.to or 300
    from .qseries import g1_series, g2_series
    p2 = p2_counts(to)
    a4 = g1_series(to).coeffs
    b43 = g2_series(to).coeffs
    failures = [f"n={n}" for n in range(to + 1)
                if 4 * p2[n] != a4[n] + 3 * b43[n]]
    return to + 1, failures


def _suite_logconcavity(args) -> Tuple[int, List[str]]:
    to = args.to or 2000
    if to < 3:
        raise UsageError("--to must be >= 3 for logconcavity")
    violations = logconcavity_scan(2, to)
    failures = [f"even n={n}" for n in violations if n % 2 == 0]
    failures += [f"n={n} >= 482" for n in violations if n >= 482]
    return to - 1, failures


_SUITES = {
    "multipliers": _suite_multipliers,
    "kloosterman": _suite_kloosterman,
    "mordell": _suite_mordell,
    "decomposition": _suite_decomposition,
    "logconcavity": _suite_logconcavity,
}


def cmd_verify(args) -> int:
    checked, failures = _SUITES[args.suite](args)
    passed = not failures
    if args.output == "json":
        doc = {"schema": "1", "suite": args.suite, "passed": passed,
               "checked": checked, "failures": failures}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(
            f"suite={args.suite} checked={checked} "
            f"passed={'yes' if passed else 'no'} failures={len(failures)}\n")
        for f in failures[:20]:
            sys.stdout.write(f"  FAIL {f}\n")
    return 0 if passed else 2


# ----------------------------------------------------------------------
# bound-report


def cmd_bound_report(args) -> int:
    if args.family not in FAMILY_CASE:
        raise UsageError("--family must be 1..8")
    if args.k_max is None or args.k_max < 1:
        raise UsageError("--k-max is required and must be >= 1")
    to = args.to or 20
    eps = float(Fraction(args.epsilon))
    if eps <= 0:
        raise UsageError("--epsilon must be positive")
    ctx = make_context(96)
    rows, max_ratio = bound_report(args.family, args.k_max, to, eps, ctx)
    if args.output == "json":
        doc = {"schema": "1", "family": args.family, "k_max": args.k_max,
               "n_max": to, "epsilon": args.epsilon,
               "max_ratio": max_ratio,
               "rows": [list(r) for r in rows]}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        write_bound_report_csv(rows, sys.stdout)
    return 0


# ----------------------------------------------------------------------
# wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="radex", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("p2", help="consecutive-part-free partition counts")
    _add_series_flags(sp, with_variants=True)
    sp.set_defaults(func=cmd_p2)

    sp = sub.add_parser("p", help="unrestricted partition counts")
    _add_series_flags(sp, with_variants=False)
    sp.set_defaults(func=cmd_p)

    sp = sub.add_parser("oracle", help="exact coefficient tables")
    sp.add_argument("kind", choices=("p", "p2", "alpha", "r"))
    sp.add_argument("--to", type=int, required=True,
                    help=f"highest index (<= {ORACLE_CAP})")
    sp.add_argument("--output", choices=("json", "csv", "plain"),
                    default="plain")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("verify", help="invariant suites")
    sp.add_argument("suite", choices=sorted(_SUITES))
    sp.add_argument("--k-max", type=int, default=None)
    sp.add_argument("--to", type=int, default=None)
    sp.add_argument("--output", choices=("json", "plain"), default="plain")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bound-report",
                        help="Kloosterman growth-shape table")
    sp.add_argument("--family", type=int, required=True)
    sp.add_argument("--k-max", type=int, required=True)
    sp.add_argument("--to", type=int, default=None,
                    help="largest n in the grid (default 20)")
    sp.add_argument("--epsilon", default="0.01")
    sp.add_argument("--output", choices=("json", "csv"), default="csv")
    sp.set_defaults(func=cmd_bound_report)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"radex: error: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"radex: error: {exc}\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
