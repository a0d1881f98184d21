"""Continued-fraction period lengths of sqrt(d) and Hickerson's g(d)."""
from .analytic import (
    BoundEnvelope,
    ConstantsReport,
    bernoulli3_frac,
    constants_report,
    dirichlet_F,
    envelope_eq2A,
    harmonic_tail,
    htilde_at_1,
    integral_ABC,
    rhs_corollaries,
    rhs_eq3A,
    zeta,
)
from .cfperiod import PeriodResult, SurdState, isqrt, partial_quotients, period_length, period_range
from .gfunction import GTable, GWitness, g_point, g_tabulate, g_witnesses
from .modular import c_brute, c_closed, chi
from .moments import (
    DeviationReport,
    MomentAccumulator,
    VerificationReport,
    accumulate,
    deviation_count,
    figure_series,
    prime_sieve,
    verify_corollaries,
    verify_theorem1,
)

__version__ = "0.1.0"
