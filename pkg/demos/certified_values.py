"""Evaluate a handful of p2(n) values and inspect their certificates.

Run:  python3 demos/certified_values.py
"""

from radex import default_bits, make_context, p2_counts, p2_exact

ns = [1, 5, 10, 25, 60, 100]
oracle = p2_counts(max(ns))

print(f"{'n':>4} {'p2(n)':>14} {'k used':>7} {'residual':>11} {'oracle ok':>9}")
for n in ns:
    cert = p2_exact(n, ctx=make_context(default_bits(n)))
    resid = abs(float(cert.final_value) - cert.rounded)
    ok = "yes" if cert.rounded == oracle[n] else "NO"
    print(f"{n:>4} {cert.rounded:>14} {cert.k_used:>7} {resid:>11.2e} {ok:>9}")

big = p2_exact(500)
print(f"\np2(500) = {big.rounded}")
print(f"  stabilized after k = {big.k_used}, residual "
      f"{abs(float(big.final_value) - big.rounded):.2e}, "
      f"imaginary residue {float(big.im_residue):.2e}")
