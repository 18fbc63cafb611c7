"""Exact integer power-series arithmetic: the ground-truth oracles.

Every coefficient sequence the rest of the package certifies against is
computed here with arbitrary-size integers and nothing else — no floating
point enters this module.  The central objects:

* ``partition_counts`` — p(n), coefficients of 1/(q;q)_inf;
* ``p2_counts``        — p2(n), the number of partitions of n containing no
  two consecutive integers as parts, via its product/series generating
  function; independently confirmed by the exhaustive counter
  ``p2_enumerate``;
* ``f_series``, ``chi_series``, ``omega_mock_series`` — the three classical
  third-order mock theta series f, chi, omega (coefficientwise);
* ``xi_series``, ``g1_series``, ``g2_series`` — the eta-quotient factor
  xi(q) = (-q^3;q^3)_inf/(q^2;q^2)_inf and the two pieces of the splitting

      G2(q) = g1(q) + g2(q),
      g1 = (q^6;q^6)_inf / (4 (q^2;q^2)_inf (q^3;q^3)_inf) * f(q),
      g2 = 3 (q^3;q^3)_inf^3 / (4 (q;q)_inf (q^2;q^2)_inf (q^6;q^6)_inf).

  The stored series are the integral normalizations 4*g1 and (4/3)*g2; the
  rational prefactors 1/4 and 3/4 are carried separately as exact Fractions
  so every stored coefficient stays an integer.

Implementation note: all the infinite products in sight have binomial factors
(1 ± q^j), and multiplying or dividing a truncated series by such a factor is
a single O(N) in-place pass.  The constructors below are built from those two
passes, which keeps even the degree-2000 oracles fast without any FFT.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, List, Sequence

__all__ = [
    "IntegerSeries",
    "pochhammer_inf",
    "partition_counts",
    "chi_series",
    "f_series",
    "omega_mock_series",
    "p2_counts",
    "p2_enumerate",
    "xi_series",
    "g1_series",
    "g2_series",
    "G1_PREFACTOR",
    "G2_PREFACTOR",
    "decomposition_check",
    "oracle_rows",
    "P2_ENUMERATE_CAP",
]

P2_ENUMERATE_CAP = 200

G1_PREFACTOR = Fraction(1, 4)  # g1 = G1_PREFACTOR * g1_series
G2_PREFACTOR = Fraction(3, 4)  # g2 = G2_PREFACTOR * g2_series


class IntegerSeries:
    """A power series truncated at degree ``trunc`` with exact int coefficients."""

    __slots__ = ("trunc", "coeffs")

    def __init__(self, coeffs: Sequence[int], trunc: int | None = None):
        if trunc is None:
            trunc = len(coeffs) - 1
        if trunc < 0:
            raise ValueError("truncation degree must be non-negative")
        c = list(coeffs[: trunc + 1])
        c.extend(0 for _ in range(trunc + 1 - len(c)))
        self.trunc = trunc
        self.coeffs = c

    @classmethod
    def one(cls, trunc: int) -> "IntegerSeries":
        return cls([1], trunc)

    def coeff(self, i: int) -> int:
        if i < 0 or i > self.trunc:
            raise IndexError(f"coefficient {i} outside truncation 0..{self.trunc}")
        return self.coeffs[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.trunc, tuple(self.coeffs)))

    def __add__(self, other: "IntegerSeries") -> "IntegerSeries":
        N = min(self.trunc, other.trunc)
        return IntegerSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(N + 1)], N
        )

    def __sub__(self, other: "IntegerSeries") -> "IntegerSeries":
        N = min(self.trunc, other.trunc)
        return IntegerSeries(
            [self.coeffs[i] - other.coeffs[i] for i in range(N + 1)], N
        )

    def __mul__(self, other) -> "IntegerSeries":
        if isinstance(other, int):
            return IntegerSeries([c * other for c in self.coeffs], self.trunc)
        if not isinstance(other, IntegerSeries):
            return NotImplemented
        N = min(self.trunc, other.trunc)
        out = [0] * (N + 1)
        for i, a in enumerate(self.coeffs[: N + 1]):
            if a:
                bi = other.coeffs
                for j in range(N + 1 - i):
                    b = bi[j]
                    if b:
                        out[i + j] += a * b
        return IntegerSeries(out, N)

    __rmul__ = __mul__

    def inverse(self) -> "IntegerSeries":
        """Multiplicative inverse via c'_0 = 1/c_0, c'_n = -c_0^{-1} sum c_j c'_{n-j}.

        Requires the constant term to be 1 or -1 (all series here have 1).
        """
        c0 = self.coeffs[0]
        if c0 not in (1, -1):
            raise ValueError("series inverse requires constant term +/-1")
        N = self.trunc
        out = [0] * (N + 1)
        out[0] = c0
        for n in range(1, N + 1):
            s = 0
            for j in range(1, n + 1):
                a = self.coeffs[j]
                if a:
                    s += a * out[n - j]
            out[n] = -c0 * s
        return IntegerSeries(out, N)

    def shifted(self, m: int, trunc: int) -> "IntegerSeries":
        """The series q^m * self, truncated at ``trunc``."""
        out = [0] * (trunc + 1)
        for i, c in enumerate(self.coeffs):
            if i + m > trunc:
                break
            out[i + m] = c
        return IntegerSeries(out, trunc)

    def mul_binomial(self, j: int, c: int) -> None:
        """In-place multiply by (1 + c q^j); one O(N) backward pass."""
        cs = self.coeffs
        for i in range(self.trunc, j - 1, -1):
            cs[i] += c * cs[i - j]

    def div_binomial(self, j: int, c: int) -> None:
        """In-place divide by (1 + c q^j); one O(N) forward pass."""
        cs = self.coeffs
        for i in range(j, self.trunc + 1):
            cs[i] -= c * cs[i - j]

    def __repr__(self) -> str:  # pragma: no cover
        head = ", ".join(str(c) for c in self.coeffs[:8])
        return f"IntegerSeries([{head}{', ...' if self.trunc > 7 else ''}], trunc={self.trunc})"


def pochhammer_inf(a_shift: int, step: int, sign: int, trunc: int) -> IntegerSeries:
    """The infinite product (sign * q^a_shift ; q^step)_inf, truncated.

    I.e. prod_{j>=0} (1 - sign * q^{a_shift + j*step}); sign=-1 yields factors
    (1 + q^{...}).  a_shift >= 1 so the product converges coefficientwise.
    """
    if a_shift < 1:
        raise ValueError("pochhammer_inf requires a_shift >= 1")
    if step < 1:
        raise ValueError("pochhammer_inf requires step >= 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    s = IntegerSeries.one(trunc)
    e = a_shift
    while e <= trunc:
        s.mul_binomial(e, -sign)
        e += step
    return s


def partition_counts(N: int) -> List[int]:
    """p(0..N): coefficients of 1/(q;q)_inf = prod 1/(1-q^j)."""
    s = IntegerSeries.one(N)
    for j in range(1, N + 1):
        s.div_binomial(j, -1)
    return s.coeffs


def _finite_poch_divide(s: IntegerSeries, nterms: int, step: int, sign: int, repeat: int = 1) -> None:
    """Divide ``s`` in place by prod_{t=1..nterms} (1 - sign q^{step*t})^repeat."""
    for t in range(1, nterms + 1):
        j = step * t
        if j > s.trunc:
            break
        for _ in range(repeat):
            s.div_binomial(j, -sign)


def chi_series(N: int) -> IntegerSeries:
    """chi(q) = sum_{n>=0} (-q;q)_n q^{n^2} / (-q^3;q^3)_n, truncated at N."""
    out = [0] * (N + 1)
    n = 0
    while n * n <= N:
        s = IntegerSeries.one(N - n * n)
        for t in range(1, n + 1):
            if t <= s.trunc:
                s.mul_binomial(t, 1)  # numerator factor (1 + q^t)
        _finite_poch_divide(s, n, 3, -1)  # denominator (-q^3;q^3)_n
        base = n * n
        for i, c in enumerate(s.coeffs):
            out[base + i] += c
        n += 1
    return IntegerSeries(out, N)


def f_series(N: int) -> IntegerSeries:
    """f(q) = sum_{n>=0} q^{n^2} / ((-q;q)_n)^2, truncated at N.

    Coefficients alpha(n) begin 1, 1, -2, 3, ...
    """
    out = [0] * (N + 1)
    out[0] = 1
    n = 1
    while n * n <= N:
        s = IntegerSeries.one(N - n * n)
        _finite_poch_divide(s, n, 1, -1, repeat=2)
        base = n * n
        for i, c in enumerate(s.coeffs):
            out[base + i] += c
        n += 1
    return IntegerSeries(out, N)


def omega_mock_series(N: int) -> IntegerSeries:
    """omega(q) = sum_{n>=0} q^{2n(n+1)} / ((q;q^2)_{n+1})^2, truncated at N."""
    out = [0] * (N + 1)
    n = 0
    while 2 * n * (n + 1) <= N:
        s = IntegerSeries.one(N - 2 * n * (n + 1))
        for t in range(n + 1):
            j = 2 * t + 1
            if j <= s.trunc:
                s.div_binomial(j, -1)
                s.div_binomial(j, -1)
        base = 2 * n * (n + 1)
        for i, c in enumerate(s.coeffs):
            out[base + i] += c
        n += 1
    return IntegerSeries(out, N)


def xi_series(N: int) -> IntegerSeries:
    """xi(q) = (-q^3;q^3)_inf / (q^2;q^2)_inf; coefficients r(n) = 1,0,1,1,..."""
    s = IntegerSeries.one(N)
    for j in range(3, N + 1, 3):
        s.mul_binomial(j, 1)
    for j in range(2, N + 1, 2):
        s.div_binomial(j, -1)
    return s


def p2_counts(N: int) -> List[int]:
    """p2(0..N): coefficients of xi(q) * chi(q)."""
    return (xi_series(N) * chi_series(N)).coeffs


def p2_enumerate(n: int) -> int:
    """Exhaustively count partitions of n with no consecutive integers as parts.

    Dynamic program over the largest allowed part j, carrying one bit of
    state: whether part j+1 was used (which forbids j).  This enumerates
    exactly the defining set; capped at n <= 200 since it exists as an
    independent check, not a production path.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > P2_ENUMERATE_CAP:
        raise ValueError(f"p2_enumerate is capped at n <= {P2_ENUMERATE_CAP}")
    if n == 0:
        return 1
    # ways[r][0] = count of partitions of r with parts <= j, part j unused
    # ways[r][1] = same but part j used; rolled upward from j = 0
    free = [0] * (n + 1)  # part j not used
    used = [0] * (n + 1)  # part j used at least once
    free[0] = 1
    for j in range(1, n + 1):
        new_free = [f + u for f, u in zip(free, used)]
        new_used = [0] * (n + 1)
        for r in range(j, n + 1):
            # m >= 1 copies of j require part j-1 absent, i.e. the old "free"
            # state; unrolling the m-sum gives the second term.
            new_used[r] = free[r - j] + new_used[r - j]
        free, used = new_free, new_used
    return free[n] + used[n]


def _eta_quotient(N: int, mul_steps: Sequence[int], div_steps: Sequence[int]) -> IntegerSeries:
    """prod (q^s;q^s)_inf over mul_steps divided by the same over div_steps."""
    s = IntegerSeries.one(N)
    for step in mul_steps:
        for j in range(step, N + 1, step):
            s.mul_binomial(j, -1)
    for step in div_steps:
        for j in range(step, N + 1, step):
            s.div_binomial(j, -1)
    return s


def g1_series(N: int) -> IntegerSeries:
    """The integral series 4*g1 = (q^6;q^6)_inf/((q^2;q^2)_inf (q^3;q^3)_inf) * f(q).

    g1 itself is G1_PREFACTOR (= 1/4) times this; its coefficients a(n) are the
    exact rationals g1_coefficients provides.
    """
    return _eta_quotient(N, [6], [2, 3]) * f_series(N)


def g1_coefficients(N: int) -> List[Fraction]:
    """The exact rational coefficients a(n) of g1."""
    return [G1_PREFACTOR * c for c in g1_series(N).coeffs]


def g2_series(N: int) -> IntegerSeries:
    """The integral series (4/3)*g2 = (q^3;q^3)_inf^3/((q;q)_inf (q^2;q^2)_inf (q^6;q^6)_inf).

    g2 itself is G2_PREFACTOR (= 3/4) times this.
    """
    return _eta_quotient(N, [3, 3, 3], [1, 2, 6])


def decomposition_check(N: int) -> bool:
    """Exact identity check: coefficients of G2 equal those of g1 + g2 up to q^N.

    Verified in cleared-denominator form: 4*p2(n) = (4 g1)(n) + 3 * ((4/3) g2)(n).
    """
    p2 = p2_counts(N)
    a4 = g1_series(N).coeffs
    b43 = g2_series(N).coeffs
    return all(4 * p2[i] == a4[i] + 3 * b43[i] for i in range(N + 1))


def oracle_rows(N: int) -> Iterator[tuple]:
    """Rows (n, p(n), p2(n), a4(n), r(n)) for CSV export; a4(n) = 4*a(n)."""
    p = partition_counts(N)
    p2 = p2_counts(N)
    a4 = g1_series(N).coeffs
    r = xi_series(N).coeffs
    for n in range(N + 1):
        yield (n, p[n], p2[n], a4[n], r[n])
