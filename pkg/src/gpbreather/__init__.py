"""Modulated breathers of the 3D Gross-Pitaevskii equation.

Construction of exact solutions via a similarity reduction to the 1D cubic
Schroedinger equation, independent finite-difference verification, and
Strang-split spectral propagation for dynamic cross-checks.
"""

from .analytic import (
    BreatherField,
    assemble_psi,
    breather_field,
    constant_scenario,
    satsuma_yajima,
    scenario_preset,
    single_soliton,
)
from .errors import (
    ConfigError,
    ConstraintViolation,
    DivisionByZeroGauge,
    GeometryMismatch,
    GPBreatherError,
    NonFiniteDetected,
    QuadratureFailure,
    StencilOutOfWindow,
    UnknownPreset,
)
from .propagate import (
    ComplexGrid,
    EvolutionConfig,
    EvolutionResult,
    compare_fields,
    evolve,
    read_grid,
    sample_field,
    step_strang,
    write_grid,
)
from .reports import ResidualEntry, ResidualReport
from .timefunc import Constant, Harmonic, LogDerivative, Power, Product, Quotient, Sum, TimeFunction
from .transform import (
    ScenarioSpec,
    TransformBundle,
    check_constraints,
    derive_gauge_d,
    eval_eta,
    eval_nonlinearity,
    eval_potential,
    eval_rho,
    eval_tau,
    eval_zeta,
    potential_coefficients,
    transform_bundle,
)
from .verify import convergence_study, gp_residual, quasi_random_points, reduction_residual

__version__ = "0.1.0"
