"""Similarity solutions of the two-phase time-fractional Stefan problem."""
from .errors import (
    ConvergenceError,
    DomainError,
    FracStefanError,
    GammaPoleError,
    GridError,
    InvalidProblemError,
    NoBracketError,
    SubcriticalFluxError,
    UnderflowGuardError,
)
from .special_functions import (
    ACCURACY_ENVELOPE,
    SeriesConfig,
    WrightArgs,
    erf,
    erfc,
    gamma,
    log_wright_negative,
    mainardi,
    mainardi_increment,
    reciprocal_gamma,
    wright,
    wright_complement,
    wright_dz,
)
from .similarity import (
    ConductionSolution,
    FluxProblem,
    Material,
    SimilaritySolution,
    SolutionKind,
    TemperatureProblem,
    conduction_solution,
    critical_flux,
    derive_params,
    f1_alpha,
    f2_alpha,
    f_alpha,
    face_flux_coefficient,
    face_temperature,
    front_position,
    g_alpha,
    make_one_phase,
    solve_classical_flux,
    solve_flux,
    solve_temperature,
    temperature_gradient,
    theta_liquid,
    theta_solid,
)
from .verify import ResidualReport, build_report, caputo_l1, pde_residual, stefan_residual
from .analysis import (
    ScanReport,
    chain_inequality_margins,
    equivalence_roundtrip,
    f2_monotonicity_scan,
    interface_inequality_check,
    reverse_roundtrip,
    turan_margin,
)

__version__ = "0.1.0"
