"""radex — certified convergent-series evaluation of restricted partitions.

p2(n) counts the partitions of n in which no two part sizes are consecutive
integers.  This package evaluates p2(n) through an exact convergent series
(and p(n) through the classical one), certifies every value against exact
integer oracles, and ships the supporting identities — multiplier ratios,
Kloosterman-sum reductions, Gaussian-integral truncation — as executable
checks.
"""

from .formula import (ConvergenceCertificate, FormulaConfig, calibrate,
                      default_k_max, leading_term, logconcavity_scan,
                      p2_exact, rademacher_p, theorem_term)
from .integrals import (IntegralSpec, J_full, J_star, QuadratureResult,
                        adaptive_quadrature, mordell_I, script_I)
from .kloosterman import (classical_K, family_K, rademacher_A,
                          reduce_to_classical, script_K)
from .multiplier import CuspPair, RootOfUnity, make_cusp_pair, omega
from .numerics import (PrecisionContext, bessel_i, default_bits, kernel_L,
                       make_context)
from .qseries import (chi_series, decomposition_check, f_series,
                      g1_series, g2_series, omega_mock_series, p2_counts,
                      p2_enumerate, partition_counts, xi_series)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceCertificate", "FormulaConfig", "calibrate", "default_k_max",
    "leading_term", "logconcavity_scan", "p2_exact", "rademacher_p",
    "theorem_term",
    "IntegralSpec", "J_full", "J_star", "QuadratureResult",
    "adaptive_quadrature", "mordell_I", "script_I",
    "classical_K", "family_K", "rademacher_A", "reduce_to_classical",
    "script_K",
    "CuspPair", "RootOfUnity", "make_cusp_pair", "omega",
    "PrecisionContext", "bessel_i", "default_bits", "kernel_L",
    "make_context",
    "chi_series", "decomposition_check", "f_series", "g1_series",
    "g2_series", "omega_mock_series", "p2_counts", "p2_enumerate",
    "partition_counts", "xi_series",
    "__version__",
]
