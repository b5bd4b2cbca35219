"""Besov norms on the torus and non-uniform dependence for the two-component
Fornberg-Whitham system, computed pseudospectrally."""

__version__ = "0.1.0"

from .besov import BesovIndex, DyadicPartition, besov_norm, dyadic_block, pair_norm, phi_eval
from .errors import (
    ConfigError,
    InputShapeError,
    NumericalOverflowError,
    ParameterError,
    ResolutionError,
)
from .operators import Multiplier, apply_multiplier, inverse_helmholtz_dx, operator_ratio
from .solver import SolverConfig, State, Trajectory, lifespan_estimate, rhs, rk4_step, solve
from .solver import solve_linear_transport
from .spectral import (
    GridSpec,
    PeriodicFunction,
    TrigTerm,
    analyze,
    derivative,
    from_terms,
    lp_norm,
    multiply,
    synthesize,
)
from .approx import (
    SequenceParams,
    approximate_state,
    bound_constants,
    initial_state,
    predicted_distance,
    residual_defect,
    residuals_closed_form,
)
