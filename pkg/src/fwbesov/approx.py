"""
The two families of approximate FW solutions, omega = +1 / -1,

    u^{w,n}   = -w/n + n^-s sin(n x + w t)
    rho^{w,n} =  1/n + n^-s sin(n x + w t),

with their residuals in closed form

    R1 = sin(2(n x + w t)) / (2 n^{2s-1})
    R2 = n^-s cos(n x + w t) + n^{1-2s} sin(2(n x + w t)),

the dyadic bracket constants for ||sin nx||, ||cos nx|| and the separation
that the families predict between the two branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .besov import BesovIndex, besov_norm
from .errors import ParameterError, ResolutionError
from .solver import State, rhs
from .spectral import GridSpec, PeriodicFunction, TrigTerm, from_terms, lp_norm

__all__ = [
    "SequenceParams",
    "approximate_state",
    "initial_state",
    "time_derivative",
    "residuals_closed_form",
    "residual_defect",
    "bound_constants",
    "predicted_distance",
    "initial_distance",
    "cos_lp_norm",
]


@dataclass(frozen=True)
class SequenceParams:
    omega: int
    n: int
    s: float = 3.0

    def __post_init__(self):
        if self.omega not in (-1, 1):
            raise ParameterError(f"omega must be +1 or -1, got {self.omega}")
        if int(self.n) != self.n or self.n < 2:
            raise ParameterError(f"n must be an integer >= 2, got {self.n}")
        # the admissible window for s depends on p; ExperimentConfig checks it
        if not self.s > 0:
            raise ParameterError(f"s must be positive, got {self.s}")
        object.__setattr__(self, "n", int(self.n))

    def check_grid(self, grid: GridSpec):
        if 3 * 2 * self.n >= grid.N:
            raise ResolutionError(
                f"mode 2n={2 * self.n} is not below N/3 for N={grid.N}"
            )


def _wave(params: SequenceParams, t: float, amp: float, k: int = 1, kind: str = "sin"):
    return TrigTerm(amp, k * params.n, k * params.omega * t, kind)


def approximate_state(params: SequenceParams, t: float, grid: GridSpec) -> State:
    params.check_grid(grid)
    n, w, s = params.n, params.omega, params.s
    hi = _wave(params, t, n**-s)
    u = from_terms([TrigTerm(-w / n, 0, 0.0, "cos"), hi], grid)
    rho = from_terms([TrigTerm(1.0 / n, 0, 0.0, "cos"), hi], grid)
    return State(u, rho)


def initial_state(params: SequenceParams, grid: GridSpec) -> State:
    return approximate_state(params, 0.0, grid)


def time_derivative(params: SequenceParams, t: float, grid: GridSpec) -> State:
    """Exact d/dt of the approximate state: w n^-s cos(n x + w t) in both components."""
    params.check_grid(grid)
    d = from_terms([_wave(params, t, params.omega * params.n**-params.s, kind="cos")], grid)
    return State(d, d)


def residuals_closed_form(
    params: SequenceParams, t: float, grid: GridSpec
) -> tuple[PeriodicFunction, PeriodicFunction]:
    params.check_grid(grid)
    n, s = params.n, params.s
    r1 = from_terms([_wave(params, t, 1.0 / (2.0 * n ** (2 * s - 1)), k=2)], grid)
    r2 = from_terms(
        [
            _wave(params, t, n**-s, kind="cos"),
            _wave(params, t, n ** (1 - 2 * s), k=2),
        ],
        grid,
    )
    return r1, r2


def residual_defect(
    params: SequenceParams, t: float, grid: GridSpec
) -> tuple[PeriodicFunction, PeriodicFunction]:
    """Residual of the FW system on the approximate state, computed numerically.

    The spatial part comes from the solver's own right-hand side, so agreement
    with :func:`residuals_closed_form` validates the operators the solver uses.
    """
    state = approximate_state(params, t, grid)
    dt_state = time_derivative(params, t, grid)
    f = rhs(state)
    return dt_state.u - f.u, dt_state.rho - f.rho


def bound_constants(gamma: float, s: float, r: float) -> tuple[float, float]:
    """Upper constant for ||sin nx||_{B^gamma} / n^gamma, lower for ||cos nx||_{B^s} / n^s.

    upper = (log2(32/9))^{1/r} (4/3)^gamma, lower = (log2(9/8))^{1/r} (3/8)^s,
    both per unit Lp norm of the underlying sine/cosine.
    """
    r = float(r)
    if not r >= 1:
        raise ParameterError(f"r must be >= 1, got {r}")
    e = 0.0 if math.isinf(r) else 1.0 / r
    upper = math.log2(32.0 / 9.0) ** e * (4.0 / 3.0) ** gamma
    lower = math.log2(9.0 / 8.0) ** e * (3.0 / 8.0) ** s
    return upper, lower


def cos_lp_norm(p: float, grid: GridSpec | None = None) -> float:
    """||cos x||_{Lp(0, 2pi)}; sqrt(pi) for p = 2, quadrature otherwise."""
    if p == 2:
        return math.sqrt(math.pi)
    if math.isinf(p):
        return 1.0
    grid = grid or GridSpec(256)
    return lp_norm(from_terms([TrigTerm(1.0, 1, 0.0, "cos")], grid), p)


def predicted_distance(
    n: int, s: float, idx: BesovIndex, t: float, grid: GridSpec
) -> float:
    """2 n^-s (||cos nx||_{B^s} + ||cos nx||_{B^{s-1}}) |sin t| with norms at ``idx``."""
    SequenceParams(1, n, s).check_grid(grid)
    c = from_terms([TrigTerm(1.0, n, 0.0, "cos")], grid)
    total = besov_norm(c, idx) + besov_norm(c, idx.shifted(-1.0))
    return 2.0 * n**-s * total * abs(math.sin(t))


def initial_distance(n: int, s: float, idx: BesovIndex, grid: GridSpec) -> float:
    """Pair-norm distance between the omega = +1 and -1 initial data."""
    a = initial_state(SequenceParams(1, n, s), grid)
    b = initial_state(SequenceParams(-1, n, s), grid)
    return (a - b).norm(idx)
