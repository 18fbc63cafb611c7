"""Arbitrary-precision numeric kernel shared by every other module.

A :class:`PrecisionContext` pins the working mantissa size (in bits) and owns a
private mpmath context, so two computations at different precisions never
interfere.  Everything downstream — Bessel kernels, complex cosh, quadrature,
series summation — takes a context argument explicitly; no module touches
mpmath's global state.

The precision policy for evaluating the convergent p2-series at argument n is
:func:`default_bits`: the answer grows like e^{(2*pi/3)*sqrt(n)}, i.e. about
3.03*sqrt(n) bits of integer part, and the guard bits absorb quadrature and
summation error so that the absolute error stays far below the 0.25
integer-rounding budget.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import mpmath

__all__ = [
    "PrecisionContext",
    "make_context",
    "default_bits",
    "default_bits_classical",
    "bessel_i",
    "complex_cosh",
    "kernel_L",
]

RealLike = Union[int, float, Fraction, "mpmath.mpf"]


class PrecisionContext:
    """A fixed binary working precision plus cached constants.

    bits is the mantissa precision in binary digits (>= 64).  The wrapped
    mpmath context is exposed as ``.mp`` for arithmetic; ``pi`` and ``ln2``
    are cached at that precision.
    """

    __slots__ = ("bits", "mp", "pi", "ln2")

    def __init__(self, bits: int):
        bits = int(bits)
        if bits < 64:
            raise ValueError(f"precision must be at least 64 bits, got {bits}")
        self.bits = bits
        self.mp = mpmath.ctx_mp.MPContext()
        self.mp.prec = bits
        self.pi = self.mp.pi()
        self.ln2 = self.mp.ln(2)

    def real(self, x: RealLike):
        """Convert an int/float/Fraction/mpf to an mpf at this precision."""
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        return self.mp.mpf(x)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"PrecisionContext(bits={self.bits})"


def make_context(bits: int) -> PrecisionContext:
    """Create a context at the requested mantissa precision (>= 64 bits)."""
    return PrecisionContext(bits)


def default_bits(n: int) -> int:
    """Working precision for a p2-series evaluation at argument n."""
    return math.ceil(3.1 * math.sqrt(max(n, 1))) + 96


def default_bits_classical(n: int) -> int:
    """Working precision for the classical partition series at argument n.

    p(n) grows like e^{pi*sqrt(2n/3)} ~ 2^{3.7*sqrt(n)}, slightly faster than
    p2(n), so the integer-part allowance is a little larger.
    """
    return math.ceil(3.8 * math.sqrt(max(n, 1))) + 96


def bessel_i(ell, x, ctx: PrecisionContext):
    """Modified Bessel function I_ell(x) for ell in {1, 3/2}, x >= 0.

    Order 1 is summed from the ascending series

        I_1(x) = sum_{m>=0} (x/2)^{2m+1} / (m! (m+1)!),

    stopping once the next (all-positive) term drops below 2^{-bits-8} of the
    running sum, which bounds the tail by the same amount.  Order 3/2 uses the
    elementary closed form sqrt(2/(pi*x)) * (cosh x - sinh(x)/x) for x > 1/4;
    below that the closed form loses ~2*log2(1/x) leading bits to cancellation
    (cosh x - sinh(x)/x ~ x^2/3), so the ascending series is used instead.
    """
    mp = ctx.mp
    x = ctx.real(x)
    if x < 0:
        raise ValueError("bessel_i requires x >= 0")
    if ell == 1:
        return _bessel_series(x, 0, ctx)
    if ell * 2 == 3:  # accepts Fraction(3,2), 1.5
        if x == 0:
            return mp.mpf(0)
        if x > 0.25:
            return mp.sqrt(2 / (ctx.pi * x)) * (mp.cosh(x) - mp.sinh(x) / x)
        return _bessel_series(x, 1, ctx)
    raise ValueError(f"unsupported Bessel order {ell!r} (only 1 and 3/2)")


def _bessel_series(x, half_shift: int, ctx: PrecisionContext):
    """Ascending I-series; half_shift=0 gives order 1, half_shift=1 order 3/2.

    For order 1 the first term is x/2 and term ratio (x/2)^2/(m(m+1)).
    For order 3/2 the first term is (x/2)^{3/2}/Gamma(5/2) with
    Gamma(5/2) = (3/4)*sqrt(pi), and term ratio (x/2)^2/(m(m+3/2)).
    """
    mp = ctx.mp
    if x == 0:
        return mp.mpf(0)
    half = x / 2
    h2 = half * half
    if half_shift:
        term = half * mp.sqrt(half) / (mp.mpf(3) / 4 * mp.sqrt(ctx.pi))
    else:
        term = half
    total = term
    cutoff = mp.mpf(2) ** (-(ctx.bits + 8))
    m = 1
    while True:
        if half_shift:
            term = term * h2 / (m * (m + mp.mpf(3) / 2))
        else:
            term = term * h2 / (m * (m + 1))
        total += term
        if term < cutoff * total:
            return total
        m += 1


def complex_cosh(z, ctx: PrecisionContext):
    """cosh of a complex number: cosh(a+ib) = cosh a cos b + i sinh a sin b."""
    mp = ctx.mp
    z = mp.mpc(z)
    a, b = z.real, z.imag
    return mp.mpc(mp.cosh(a) * mp.cos(b), mp.sinh(a) * mp.sin(b))


def kernel_L(k: int, n: int, y, ctx: PrecisionContext):
    """The arc-integral kernel L_k(n, y) = (1/k) sqrt(y/n) I_1(4 pi sqrt(ny)/k).

    This is the closed form of the residue integral
    (1/(2 pi i)) \\oint exp(2 pi n w + 2 pi y/(k^2 w)) dw over a small circle
    around the origin; the tests cross-check the two routes numerically.
    """
    if k < 1 or n < 1:
        raise ValueError("kernel_L requires k >= 1 and n >= 1")
    y = ctx.real(y)
    if y <= 0:
        raise ValueError("kernel_L requires y > 0")
    mp = ctx.mp
    n_ = mp.mpf(n)
    return mp.sqrt(y / n_) / k * bessel_i(1, 4 * ctx.pi * mp.sqrt(n_ * y) / k, ctx)
