"""
Pseudospectral method-of-lines solver for the two-component Fornberg-Whitham
system

    u_t + u u_x = (1 - d_xx)^{-1} d_x (rho - u)
    rho_t + u rho_x + rho u_x = 0

and for scalar linear transport f_t + v f_x = F on the torus. Time stepping is
classical fixed-step RK4; every product is 2/3-rule dealiased and nothing
else is filtered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .besov import BesovIndex, besov_norm, pair_norm
from .errors import InputShapeError, NumericalOverflowError, ParameterError
from .operators import INVERSE_HELMHOLTZ_DX
from .spectral import GridSpec, PeriodicFunction, _product_coeffs

__all__ = [
    "State",
    "SolverConfig",
    "Trajectory",
    "rhs",
    "rk4",
    "rk4_step",
    "solve",
    "solve_linear_transport",
    "lifespan_estimate",
    "landing_step",
]


@dataclass(frozen=True)
class State:
    """Velocity ``u`` and surface height ``rho`` on a common grid."""

    u: PeriodicFunction
    rho: PeriodicFunction

    def __post_init__(self):
        if self.u.grid != self.rho.grid:
            raise InputShapeError("u and rho live on different grids")

    @property
    def grid(self) -> GridSpec:
        return self.u.grid

    def _stack(self) -> np.ndarray:
        return np.stack([self.u.coeffs, self.rho.coeffs])

    @classmethod
    def _from_stack(cls, grid: GridSpec, c: np.ndarray) -> State:
        return cls(PeriodicFunction(grid, c[0]), PeriodicFunction(grid, c[1]))

    def __sub__(self, other: State) -> State:
        return State(self.u - other.u, self.rho - other.rho)

    def norm(self, idx: BesovIndex) -> float:
        return pair_norm(self.u, self.rho, idx)


def _landing_steps(dt: float, t_end: float, sample_times: Sequence[float]) -> int:
    steps = max(1, math.ceil(t_end / dt - 1e-9))
    for m in range(steps, 1000 * steps + 1):
        h = t_end / m
        if all(abs(t / h - round(t / h)) < 1e-9 for t in sample_times):
            return m
    raise ParameterError(
        f"no step <= {dt} lands on every sample time {list(sample_times)}"
    )


def landing_step(dt: float, t_end: float, sample_times: Sequence[float]) -> float:
    """Largest step <= dt that divides t_end and every sample time."""
    return t_end / _landing_steps(dt, t_end, sample_times)


@dataclass(frozen=True)
class SolverConfig:
    """Fixed-step integration settings.

    ``dt`` is reduced, if needed, so every sample time is hit exactly. The
    blow-up guard compares ``guard_index`` norms against ``blowup_factor``
    times the initial value every ``guard_every`` steps and at sample times.
    """

    grid: GridSpec
    dt: float
    t_end: float
    sample_times: tuple[float, ...] = ()
    blowup_factor: float = 4.0
    guard_index: BesovIndex = field(default_factory=lambda: BesovIndex(3.0, 2.0, 2.0))
    guard_every: int = 100

    def __post_init__(self):
        if not self.dt > 0 or not self.t_end > 0:
            raise ParameterError("dt and t_end must be positive")
        if self.dt > self.t_end:
            raise ParameterError(f"dt={self.dt} exceeds t_end={self.t_end}")
        times = tuple(float(t) for t in (self.sample_times or (0.0, self.t_end)))
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ParameterError("sample_times must be strictly increasing")
        if times[0] < 0 or times[-1] > self.t_end + 1e-12:
            raise ParameterError("sample_times must lie in [0, t_end]")
        if not self.blowup_factor > 1:
            raise ParameterError("blowup_factor must exceed 1")
        object.__setattr__(self, "sample_times", times)

    @property
    def n_steps(self) -> int:
        return _landing_steps(self.dt, self.t_end, self.sample_times)

    @property
    def step(self) -> float:
        return self.t_end / self.n_steps


@dataclass(frozen=True)
class Trajectory:
    """States recorded at the requested sample times.

    ``status`` is ``"completed"`` or ``"aborted-blowup"``; on abort
    ``abort_time`` is set and ``samples`` holds every sample time reached.
    """

    samples: tuple
    status: str = "completed"
    abort_time: float | None = None

    @property
    def times(self) -> list[float]:
        return [t for t, _ in self.samples]

    @property
    def states(self) -> list:
        return [s for _, s in self.samples]

    @property
    def completed(self) -> bool:
        return self.status == "completed"

    def at(self, t: float, tol: float = 1e-9):
        for ti, s in self.samples:
            if abs(ti - t) <= tol:
                return s
        raise KeyError(f"no sample at t={t}")


def _fw_rhs(c: np.ndarray, k: np.ndarray, helm_dx: np.ndarray, N: int) -> np.ndarray:
    u, rho = c
    ux = 1j * k * u
    rhox = 1j * k * rho
    du = -_product_coeffs(u, ux, N) + helm_dx * (rho - u)
    drho = -_product_coeffs(u, rhox, N) - _product_coeffs(rho, ux, N)
    out = np.stack([du, drho])
    out[:, N // 2] = 0.0
    return out


def rhs(state: State) -> State:
    """Time derivative (u_t, rho_t) of the FW system at ``state``."""
    g = state.grid
    d = _fw_rhs(state._stack(), g.modes, INVERSE_HELMHOLTZ_DX.on_grid(g), g.N)
    return State._from_stack(g, d)


def rk4(f: Callable[[float, np.ndarray], np.ndarray], t: float, c: np.ndarray, dt: float):
    """Classical four-stage Runge-Kutta update of y' = f(t, y)."""
    # overflow is reported through the typed error below
    with np.errstate(over="ignore", invalid="ignore"):
        k1 = f(t, c)
        k2 = f(t + dt / 2, c + dt / 2 * k1)
        k3 = f(t + dt / 2, c + dt / 2 * k2)
        k4 = f(t + dt, c + dt * k3)
        out = c + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise NumericalOverflowError(f"non-finite values after step at t={t + dt:g}")
    return out


def rk4_step(state: State, dt: float) -> State:
    """One classical Runge-Kutta step of the FW system."""
    if not dt > 0:
        raise ParameterError(f"dt must be positive, got {dt}")
    g = state.grid
    helm = INVERSE_HELMHOLTZ_DX.on_grid(g)
    c = rk4(lambda _t, y: _fw_rhs(y, g.modes, helm, g.N), 0.0, state._stack(), dt)
    return State._from_stack(g, c)


def _integrate(f, c0, config: SolverConfig, measure, wrap) -> Trajectory:
    n_steps, h = config.n_steps, config.step
    sample_steps = {round(t / h): t for t in config.sample_times}
    limit = config.blowup_factor * measure(c0)
    samples = []
    c = c0
    for i in range(n_steps + 1):
        if i in sample_steps or (i and i % config.guard_every == 0):
            if i and measure(c) > limit:
                return Trajectory(tuple(samples), "aborted-blowup", i * h)
            if i in sample_steps:
                samples.append((sample_steps[i], wrap(c)))
        if i < n_steps:
            c = rk4(f, i * h, c, h)
    return Trajectory(tuple(samples))


def solve(state0: State, config: SolverConfig) -> Trajectory:
    """Integrate the FW system from ``state0`` to ``config.t_end``.

    Aborts (status ``"aborted-blowup"``, no exception) once the pair norm at
    ``config.guard_index`` exceeds ``blowup_factor`` times its initial value.
    """
    g = state0.grid
    if g != config.grid:
        raise InputShapeError(f"state grid {g} differs from config grid {config.grid}")
    helm = INVERSE_HELMHOLTZ_DX.on_grid(g)
    idx = config.guard_index

    def measure(c):
        return State._from_stack(g, c).norm(idx)

    return _integrate(
        lambda _t, y: _fw_rhs(y, g.modes, helm, g.N),
        state0._stack(),
        config,
        measure,
        lambda c: State._from_stack(g, c),
    )


def solve_linear_transport(
    v: Callable[[float], PeriodicFunction],
    F: Callable[[float], PeriodicFunction] | None,
    f0: PeriodicFunction,
    config: SolverConfig,
) -> Trajectory:
    """Integrate f_t + v f_x = F with velocity and forcing given as functions of t."""
    g = f0.grid
    if g != config.grid:
        raise InputShapeError(f"f0 grid {g} differs from config grid {config.grid}")
    k = g.modes

    def f(t, c):
        out = -_product_coeffs(v(t).coeffs, 1j * k * c, g.N)
        if F is not None:
            out = out + F(t).coeffs
        out[g.N // 2] = 0.0
        return out

    idx = config.guard_index
    return _integrate(
        f,
        f0.coeffs.copy(),
        config,
        lambda c: besov_norm(PeriodicFunction(g, c), idx),
        lambda c: PeriodicFunction(g, c),
    )


def lifespan_estimate(
    u0: PeriodicFunction, rho0: PeriodicFunction, idx: BesovIndex, C: float
) -> float:
    """Guaranteed existence time C / (||u0||_{B^s} + ||rho0||_{B^{s-1}})^2.

    The constant C is not known in closed form and must be supplied. Zero
    data returns ``math.inf``.
    """
    if not C > 0:
        raise ParameterError(f"C must be positive, got {C}")
    size = pair_norm(u0, rho0, idx)
    return math.inf if size == 0 else C / size**2
