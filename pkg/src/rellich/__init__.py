"""Hilbert transform identities on weighted Lebesgue spaces.

Numerical toolkit around the Hilbert transform on the real line: exact
transforms for an indicator test family, principal-value and compensated
transforms by deterministic quadrature, conformal cone / Helson-Szego map
boundary data, Muckenhoupt weight machinery, and a residual engine that
checks every supported integral identity and weighted bound to tolerance.
"""

from .quadrature import (
    IntegralResult,
    QuadratureError,
    QuadratureSpec,
    Singularity,
    ToleranceNotMet,
    UndeclaredSingularityError,
    integrate,
    integrate_pv,
)
from .hilbert import (
    HilbertEvaluation,
    IndicatorCombination,
    HatFunction,
    StepFunction,
    hilbert_closed,
    hilbert_pv,
    k_transform,
    spectral_oracle,
)
from .conformal import (
    BoundaryData,
    HelsonSzegoMap,
    IdentityMap,
    MonotoneCone,
    SymmetricCone,
    psi_derivative_check,
)
from .weights import (
    ApEstimate,
    HSPair,
    ConstantWeight,
    PowerWeight,
    HSWeight,
    MapWeight,
    ap_constant,
    dyadic_grid,
    hs_bound,
    log_tail_integral,
    norm_lower_bound,
    phi,
    theorem12_constants,
)
from .identities import (
    IdentityReport,
    CATALOG,
    verify_bilinear,
    verify_bounds,
    verify_cor52,
    verify_hmw,
    verify_limit_identity,
    verify_moncones,
    verify_norm_lower_bound,
    verify_rellich,
    verify_thm41,
)
from .neumann import (
    GradientField,
    TraceReport,
    gradient,
    trace_check,
    u_f,
    verify_boundary_rellich,
)
from .report import RunReport, Scenario, emit, paper_core_suite, run_suite, sweep

__version__ = "0.1.0"
