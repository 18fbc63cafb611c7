"""Quadrature engine and the two oscillatory-free integral kernels.

Two kinds of integrals appear in the convergent p2-series and its supporting
estimates:

* the finite-interval kernel ``script_I`` — a Bessel-weighted integral over
  [-1,1] against a complex-shifted cosh in the denominator; one such integral
  per (k, nu) pair feeds the series assembly, and
* the real-line Gaussian integral ``mordell_I`` with complex scale z, together
  with its exponentially-weighted variants ``J_full`` and ``J_star`` whose
  difference is the quantity the truncation estimate controls.

The workhorse is Gauss-Legendre quadrature at context precision with
node-count doubling and interval bisection (``adaptive_quadrature``).  The
integrands here are analytic in a neighbourhood of the integration interval
(the cosh zeros sit at distance >= sqrt(3)/(6 sqrt(b)) >= 0.7 from [-1,1] for
every family weight b used), so fixed-N Gauss-Legendre converges
geometrically and the doubling step gives an honest, strongly conservative
error estimate.  A tanh-sinh rule (``tanh_sinh_quadrature``) provides a
structurally independent second scheme; property tests require the two to
agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from .numerics import PrecisionContext, bessel_i, complex_cosh, make_context

__all__ = [
    "QuadratureError",
    "QuadratureResult",
    "IntegralSpec",
    "compute_gauss_legendre_nodes",
    "adaptive_quadrature",
    "tanh_sinh_quadrature",
    "script_I",
    "mordell_I",
    "J_full",
    "J_star",
    "DEFAULT_EVAL_CAP",
]

DEFAULT_EVAL_CAP = 1 << 20

# (N, bits) -> (nodes, weights); nodes are plain mpf values, so they can be
# shared freely between contexts of the same bit size
_node_cache: Dict[Tuple[int, int], Tuple[tuple, tuple]] = {}


class QuadratureError(RuntimeError):
    """Raised when refinement hits the evaluation cap before reaching tol."""


@dataclass
class QuadratureResult:
    """Outcome of one quadrature: value, error estimate, and work done.

    error_estimate sums the last refinement differences of every accepted
    subinterval — an upper-bound-style proxy, usually far above the true
    error for analytic integrands.
    """

    value: object
    error_estimate: object
    evaluations: int


@dataclass(frozen=True)
class IntegralSpec:
    """Parameters of one finite-interval kernel integral.

    b is the exponential weight of the originating series term (5/36, 1/6,
    1/18 for the growing kernels; negative weights such as -1/12 occur in
    decaying variants), k the modulus, nu the shift index in [1,k] — the
    fixed representative every consumer must share — and n the target
    argument.  The growing-kernel evaluator rejects b <= 0 itself.
    """

    b: Fraction
    k: int
    nu: int
    n: int

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("weight b must be nonzero")
        if self.k < 1:
            raise ValueError("k must be positive")
        if not 1 <= self.nu <= self.k:
            raise ValueError(f"nu must lie in [1, k], got nu={self.nu}, k={self.k}")
        if self.n < 1:
            raise ValueError("n must be positive")


def compute_gauss_legendre_nodes(N: int, ctx: PrecisionContext):
    """Nodes and weights of the N-point Gauss-Legendre rule on [-1, 1].

    Newton iteration on the Legendre recurrence from Chebyshev initial
    guesses, run with 24 guard bits; converges in a handful of steps per
    node.  Results are cached per (N, bits).  Nodes come back in descending
    order, symmetric about 0.
    """
    if N < 2:
        raise ValueError("need at least 2 nodes")
    key = (N, ctx.bits)
    cached = _node_cache.get(key)
    if cached is not None:
        return cached
    work = make_context(ctx.bits + 24)
    mp = work.mp
    eps = mp.ldexp(1, -(ctx.bits + 12))
    xs = [mp.mpf(0)] * N
    ws = [mp.mpf(0)] * N

    def legendre_pair(x):
        # (P_N(x), P_{N-1}(x)) by upward recurrence
        p0, p1 = mp.mpf(1), x
        for j in range(2, N + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        return p1, p0

    for i in range(1, N // 2 + 1):
        x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (N + mp.mpf(1) / 2))
        for _ in range(100):
            pn, pn1 = legendre_pair(x)
            dp = N * (x * pn - pn1) / (x * x - 1)
            dx = pn / dp
            x -= dx
            if abs(dx) < eps:
                break
        pn, pn1 = legendre_pair(x)
        dp = N * (x * pn - pn1) / (x * x - 1)
        w = 2 / ((1 - x * x) * dp * dp)
        xs[i - 1], ws[i - 1] = x, w
        xs[N - i], ws[N - i] = -x, w
    if N % 2:
        # Center node x = 0; P_N(0) = 0 for odd N, so only dp is needed.
        zero = mp.mpf(0)
        pn, pn1 = legendre_pair(zero)
        dp = N * (zero * pn - pn1) / (zero * zero - 1)
        xs[N // 2] = zero
        ws[N // 2] = 2 / (dp * dp)
    result = (tuple(xs), tuple(ws))
    _node_cache[key] = result
    return result


def adaptive_quadrature(f: Callable, a, b, ctx: PrecisionContext, tol,
                        max_evals: int = DEFAULT_EVAL_CAP) -> QuadratureResult:
    """Integrate f over [a, b] to absolute tolerance tol.

    Strategy: per subinterval, Gauss-Legendre at N and 2N nodes; accept the
    finer value when the two agree within the subinterval's width-share of
    tol, keep doubling up to 128 nodes otherwise, then bisect.  Raises
    :class:`QuadratureError` if max_evals function evaluations are exhausted
    before the error budget is met.
    """
    mp = ctx.mp
    tol = ctx.real(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo_all, hi_all = mp.mpf(a), mp.mpf(b)
    if not hi_all > lo_all:
        raise ValueError("need b > a")
    total_width = hi_all - lo_all
    evals = 0

    def rule(lo, hi, N):
        nonlocal evals
        if evals + N > max_evals:
            raise QuadratureError(
                f"evaluation cap {max_evals} exceeded (interval [{lo}, {hi}])")
        nodes, weights = compute_gauss_legendre_nodes(N, ctx)
        mid = (lo + hi) / 2
        half = (hi - lo) / 2
        acc = mp.mpc(0)
        for x, w in zip(nodes, weights):
            acc += w * f(mid + half * x)
        evals += N
        return acc * half

    value = mp.mpc(0)
    err = mp.mpf(0)
    stack = [(lo_all, hi_all, None, 16)]
    while stack:
        lo, hi, prev, N = stack.pop()
        if prev is None:
            prev = rule(lo, hi, N)
        cur = rule(lo, hi, 2 * N)
        diff = abs(cur - prev)
        if diff <= tol * (hi - lo) / total_width:
            value += cur
            err += diff
        elif 2 * N < 128:
            stack.append((lo, hi, cur, 2 * N))
        else:
            mid = (lo + hi) / 2
            stack.append((lo, mid, None, 16))
            stack.append((mid, hi, None, 16))
    return QuadratureResult(value=value, error_estimate=err, evaluations=evals)


def tanh_sinh_quadrature(f: Callable, a, b, ctx: PrecisionContext) -> QuadratureResult:
    """Same integral through mpmath's tanh-sinh rule — the independent scheme
    the dual-quadrature property tests compare against."""
    count = 0

    def counted(x):
        nonlocal count
        count += 1
        return f(x)

    value, est = ctx.mp.quad(counted, [a, b], method="tanh-sinh", error=True)
    return QuadratureResult(value=value, error_estimate=est, evaluations=count)


def _default_tol(ctx: PrecisionContext):
    return ctx.mp.ldexp(1, -(ctx.bits - 16))


def script_I(spec: IntegralSpec, ctx: PrecisionContext,
             tol=None) -> QuadratureResult:
    """The finite-interval kernel

        integral_{-1}^{1} sqrt(1-x^2) * I_1((2 pi/k) sqrt(2 b n (1-x^2)))
                          / cosh(pi i (nu - 1/6)/k - (pi/k) sqrt(b/3) x) dx.

    Value is reported as a complex number; for integer parameters it is real
    (the x -> -x fold pairs each point with its conjugate denominator), which
    the property tests assert rather than assume.
    """
    mp = ctx.mp
    if spec.b <= 0:
        raise ValueError("script_I requires b > 0")
    if tol is None:
        tol = _default_tol(ctx)
    bw = ctx.real(spec.b)
    rate = ctx.pi / spec.k * mp.sqrt(bw / 3)
    beta = ctx.pi * (spec.nu - mp.mpf(1) / 6) / spec.k
    bessel_coef = 2 * ctx.pi / spec.k * mp.sqrt(2 * bw * spec.n)

    def integrand(x):
        u = 1 - x * x
        if u <= 0:
            return mp.mpc(0)
        su = mp.sqrt(u)
        denom = complex_cosh(mp.mpc(-rate * x, beta), ctx)
        return su * bessel_i(1, bessel_coef * su, ctx) / denom

    return adaptive_quadrature(integrand, -1, 1, ctx, tol)


def _truncation_radius(k: int, re_z, ctx: PrecisionContext):
    # e^{-3 pi Re(z) X^2 / k} < 2^{-(bits+16)} outside |x| > X
    mp = ctx.mp
    return mp.sqrt((ctx.bits + 16) * ctx.ln2 * k / (3 * ctx.pi * re_z))


def mordell_I(k: int, nu: int, z, ctx: PrecisionContext,
              tol=None) -> QuadratureResult:
    """The Gaussian-kernel line integral

        integral_R e^{-3 pi z x^2 / k} / cosh(pi i (nu - 1/6)/k - pi z x / k) dx

    for Re(z) > 0, truncated where the Gaussian falls below 2^{-(bits+16)}.
    The denominator never vanishes on the real line: its zeros would need
    pi(nu - 1/6)/k - pi Im(z) x / k to be an odd multiple of pi/2 at the same
    x where Re(z) x = 0, i.e. x = 0, where the offset (nu - 1/6)/k is never a
    half-integer.
    """
    mp = ctx.mp
    if k < 1 or not 1 <= nu <= k:
        raise ValueError("need k >= 1 and nu in [1, k]")
    z = mp.mpc(z)
    if not z.real > 0:
        raise ValueError("mordell_I requires Re(z) > 0")
    if tol is None:
        tol = _default_tol(ctx)
    X = _truncation_radius(k, z.real, ctx)
    beta = ctx.pi * (nu - mp.mpf(1) / 6) / k
    gauss_coef = 3 * ctx.pi * z / k
    line_coef = ctx.pi * z / k

    def integrand(x):
        w = mp.mpc(0, beta) - line_coef * x
        return ctx.mp.exp(-gauss_coef * x * x) / complex_cosh(w, ctx)

    return adaptive_quadrature(integrand, -X, X, ctx, tol)


def J_full(b: Fraction, k: int, nu: int, z, ctx: PrecisionContext, tol=None):
    """z * e^{pi b/(k z)} * mordell_I(k, nu, z) — the exact weighted integral
    whose principal part J_star approximates."""
    mp = ctx.mp
    z = mp.mpc(z)
    inner = mordell_I(k, nu, z, ctx, tol)
    return z * mp.exp(ctx.pi * ctx.real(b) / (k * z)) * inner.value


def J_star(b: Fraction, k: int, nu: int, z, ctx: PrecisionContext, tol=None):
    """The principal part

        sqrt(b/3) * integral_{-1}^{1} e^{(pi b/(k z))(1-x^2)}
                    / cosh(pi i (nu - 1/6)/k - (pi/k) sqrt(b/3) x) dx.

    J_full - J_star is uniformly small on the evaluation arcs; the size of
    the gap, measured against the distance of pi(nu-1/6)/k from pi/2 mod pi,
    is what the truncation acceptance test certifies.

    b = 0 is the trivial edge: the sqrt(b/3) prefactor kills the whole
    expression, so the value is exactly 0.  Negative b is rejected.
    """
    mp = ctx.mp
    if b < 0:
        raise ValueError("weight b must be nonnegative")
    if b == 0:
        return mp.mpc(0)
    if k < 1 or not 1 <= nu <= k:
        raise ValueError("need k >= 1 and nu in [1, k]")
    z = mp.mpc(z)
    if not z.real > 0:
        raise ValueError("J_star requires Re(z) > 0")
    if tol is None:
        tol = _default_tol(ctx)
    bw = ctx.real(b)
    rate = ctx.pi / k * mp.sqrt(bw / 3)
    beta = ctx.pi * (nu - mp.mpf(1) / 6) / k
    expo_coef = ctx.pi * bw / (k * z)

    def integrand(x):
        u = 1 - x * x
        denom = complex_cosh(mp.mpc(0, beta) - rate * x, ctx)
        return mp.exp(expo_coef * u) / denom

    res = adaptive_quadrature(integrand, -1, 1, ctx, tol)
    return mp.sqrt(bw / 3) * res.value
