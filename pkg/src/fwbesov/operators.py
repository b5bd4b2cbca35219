"""Fourier multipliers on the torus and empirical operator-norm probes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .besov import BesovIndex, besov_norm
from .errors import ParameterError
from .spectral import GridSpec, PeriodicFunction

__all__ = [
    "Multiplier",
    "apply_multiplier",
    "inverse_helmholtz_dx",
    "IDENTITY",
    "DX",
    "INVERSE_HELMHOLTZ",
    "INVERSE_HELMHOLTZ_DX",
    "random_bandlimited",
    "operator_ratio",
]


@dataclass(frozen=True)
class Multiplier:
    """Fourier multiplier with ``symbol(j)`` acting on mode j.

    The symbol must be vectorized over integer arrays and satisfy
    symbol(-j) = conj(symbol(j)) so that real functions stay real.
    """

    symbol: Callable[[np.ndarray], np.ndarray]
    name: str = "multiplier"

    def on_grid(self, grid: GridSpec) -> np.ndarray:
        m = np.asarray(self.symbol(grid.modes), dtype=np.complex128)
        return np.broadcast_to(m, (grid.N,))


def apply_multiplier(f: PeriodicFunction, m: Multiplier) -> PeriodicFunction:
    """c_j -> symbol(j) c_j; the unpaired Nyquist mode is dropped."""
    c = m.on_grid(f.grid) * f.coeffs
    c[f.grid.nyquist_index] = 0.0
    return PeriodicFunction(f.grid, c)


IDENTITY = Multiplier(lambda j: np.ones(np.shape(j)), "identity")
DX = Multiplier(lambda j: 1j * j, "dx")
INVERSE_HELMHOLTZ = Multiplier(lambda j: 1.0 / (1.0 + j.astype(float) ** 2), "inv_helmholtz")
INVERSE_HELMHOLTZ_DX = Multiplier(
    lambda j: 1j * j / (1.0 + j.astype(float) ** 2), "inv_helmholtz_dx"
)


def inverse_helmholtz_dx(f: PeriodicFunction) -> PeriodicFunction:
    """(1 - d^2/dx^2)^{-1} d/dx, the symbol i j / (1 + j^2)."""
    return apply_multiplier(f, INVERSE_HELMHOLTZ_DX)


def random_bandlimited(
    rng: np.random.Generator, grid: GridSpec, max_mode: int, min_mode: int = 0
) -> PeriodicFunction:
    """Real function with i.i.d. Gaussian coefficients on min_mode <= |j| <= max_mode."""
    if not 0 <= min_mode <= max_mode < grid.N // 2:
        raise ParameterError(
            f"need 0 <= min_mode <= max_mode < N/2, got {min_mode}, {max_mode}"
        )
    c = np.zeros(grid.N, dtype=np.complex128)
    k = np.arange(max(min_mode, 1), max_mode + 1)
    vals = rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size)
    c[k] = vals
    c[-k] = np.conj(vals)
    if min_mode == 0:
        c[0] = rng.standard_normal()
    return PeriodicFunction(grid, c)


def operator_ratio(
    m: Multiplier,
    from_idx: BesovIndex,
    to_idx: BesovIndex,
    trials: int,
    seed: int = 0,
    grid: GridSpec | None = None,
    max_mode: int | None = None,
) -> float:
    """Largest observed ||m h||_to / ||h||_from over random band-limited h.

    Each draw is normalized to unit ``from_idx`` norm. Draws use independent
    streams spawned from ``seed``, so results are reproducible and trials can
    be split across workers.
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    grid = grid or GridSpec(256)
    max_mode = grid.N // 4 if max_mode is None else max_mode
    best = 0.0
    for child in np.random.SeedSequence(seed).spawn(trials):
        h = random_bandlimited(np.random.default_rng(child), grid, max_mode)
        h = h / besov_norm(h, from_idx)
        best = max(best, besov_norm(apply_multiplier(h, m), to_idx))
    return best
