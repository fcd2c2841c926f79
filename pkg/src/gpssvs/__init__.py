"""Generalized photon-subtracted squeezed vacuum states for f-deformed
oscillators, with quadrature/photon-number squeezing and Wigner-function
nonclassicality diagnostics.

Closed-form Fock series live in :mod:`gpssvs.states` and
:mod:`gpssvs.observables`; an independent dense-operator route in
:mod:`gpssvs.oracle` backs the :mod:`gpssvs.verify` suite.
"""

from .deform import HARMONIC, POSCHL_TELLER, CUSTOM, Nonlinearity
from .errors import (
    GpssvsError,
    TruncationError,
    ConvergenceError,
    AnnihilatedStateError,
    DimTooSmallError,
    InternalConsistencyError,
)
from .logseries import AdaptiveSum, adaptive_log_sum
from .states import (
    EVEN,
    ODD,
    SqueezeSpec,
    FockExpansion,
    pssvs,
    squeezed_vacuum,
    coefficients_by_recursion,
    choose_truncation,
    photon_distribution,
    write_state_csv,
)
from .observables import (
    QuadratureReport,
    NumberStatsReport,
    SweepRow,
    SWEEP_QUANTITIES,
    expectation_moments,
    moments_from_distribution,
    quadrature_report,
    number_stats,
    sweep,
    write_sweep_csv,
)
from .oracle import (
    OperatorWorkspace,
    build_workspace,
    squeeze_by_exponential,
    subtract_photons,
    annihilation_residual,
)
from .wigner import (
    WignerGrid,
    wigner_point,
    wigner_point_oracle,
    wigner_grid,
    negativity_metrics,
    resolve_threads,
    write_wigner_csv,
    write_wigner_matrix,
)
from .verify import CheckResult, VerifyReport, run_suite, report_to_json

__version__ = "0.1.0"

__all__ = [
    "HARMONIC", "POSCHL_TELLER", "CUSTOM", "Nonlinearity",
    "GpssvsError", "TruncationError", "ConvergenceError",
    "AnnihilatedStateError", "DimTooSmallError", "InternalConsistencyError",
    "AdaptiveSum", "adaptive_log_sum",
    "EVEN", "ODD", "SqueezeSpec", "FockExpansion",
    "pssvs", "squeezed_vacuum", "coefficients_by_recursion",
    "choose_truncation", "photon_distribution", "write_state_csv",
    "QuadratureReport", "NumberStatsReport", "SweepRow", "SWEEP_QUANTITIES",
    "expectation_moments", "moments_from_distribution",
    "quadrature_report", "number_stats", "sweep", "write_sweep_csv",
    "OperatorWorkspace", "build_workspace", "squeeze_by_exponential",
    "subtract_photons", "annihilation_residual",
    "WignerGrid", "wigner_point", "wigner_point_oracle", "wigner_grid",
    "negativity_metrics", "resolve_threads",
    "write_wigner_csv", "write_wigner_matrix",
    "CheckResult", "VerifyReport", "run_suite", "report_to_json",
    "__version__",
]
