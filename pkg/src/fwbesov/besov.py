"""
Littlewood-Paley blocks and Besov norms on the torus.

The cutoff is the standard smooth step

    chi(xi) = g(4/3 - |xi|) / (g(4/3 - |xi|) + g(|xi| - 3/4)),   g(x) = exp(-1/x) (x > 0),

which equals 1 on [-3/4, 3/4], vanishes outside (-4/3, 4/3) and is
nonincreasing in |xi|. The blocks are phi_{-1} = chi,
phi_0(xi) = chi(xi/2) - chi(xi) and phi_q(xi) = phi_0(2^-q xi), all evaluated
at |xi| so that they act as real, even Fourier multipliers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParameterError, ResolutionError
from .spectral import PeriodicFunction, _lp_from_coeffs, modes

__all__ = [
    "BesovIndex",
    "DyadicPartition",
    "chi",
    "phi_eval",
    "dyadic_block",
    "block_norms",
    "besov_norm",
    "pair_norm",
    "q_max",
    "resolution_check",
]

CHI_PLATEAU = 3.0 / 4.0
CHI_SUPPORT = 4.0 / 3.0
# relative size of coefficients above N/3 that still counts as "no energy"
TOP_OCTAVE_RTOL = 1e-11


def _g(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def chi(xi):
    """Smooth radial cutoff: 1 for |xi| <= 3/4, 0 for |xi| >= 4/3."""
    a = np.abs(np.asarray(xi, dtype=float))
    left = _g(CHI_SUPPORT - a)
    right = _g(a - CHI_PLATEAU)
    out = left / (left + right)
    return out if out.ndim else float(out)


def phi_eval(q: int, xi):
    """Value of the dyadic bump phi_q at xi (scalar or array), q >= -1."""
    q = int(q)
    if q < -1:
        raise ParameterError(f"block index must be >= -1, got {q}")
    xi = np.abs(np.asarray(xi, dtype=float))
    if q == -1:
        return chi(xi)
    scaled = xi / 2.0**q
    out = chi(scaled / 2.0) - chi(scaled)
    return out if np.ndim(out) else float(out)


def q_max(N: int) -> int:
    """Largest q whose block support (3/4 2^q, 8/3 2^q) meets |j| <= N/2."""
    q = -1
    while CHI_PLATEAU * 2.0 ** (q + 1) < N / 2:
        q += 1
    return q


@dataclass(frozen=True)
class DyadicPartition:
    """The family phi_{-1}, ..., phi_{q_max(N)} sampled on the modes of a grid.

    ``weights[q + 1, k]`` is phi_q(|modes(N)[k]|); the rows sum to one on every
    mode because the construction telescopes.
    """

    N: int

    @property
    def q_max(self) -> int:
        return q_max(self.N)

    @property
    def qs(self) -> np.ndarray:
        return np.arange(-1, self.q_max + 1)

    @property
    def weights(self) -> np.ndarray:
        return _partition_weights(self.N)


@lru_cache(maxsize=16)
def _partition_weights(N: int) -> np.ndarray:
    j = np.abs(modes(N)).astype(float)
    w = np.stack([phi_eval(q, j) for q in range(-1, q_max(N) + 1)])
    w.setflags(write=False)
    return w


@dataclass(frozen=True)
class BesovIndex:
    """Smoothness s, integrability p and summability r of a Besov norm."""

    s: float
    p: float = 2.0
    r: float = 2.0

    def __post_init__(self):
        for name in ("p", "r"):
            v = float(getattr(self, name))
            if not v >= 1:
                raise ParameterError(f"{name} must lie in [1, inf], got {v}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "s", float(self.s))

    def shifted(self, ds: float) -> BesovIndex:
        return BesovIndex(self.s + ds, self.p, self.r)


def dyadic_block(f: PeriodicFunction, q: int) -> PeriodicFunction:
    """Delta_q f: multiply coefficient j by phi_q(|j|)."""
    return PeriodicFunction(f.grid, phi_eval(q, f.grid.modes) * f.coeffs)


def resolution_check(f: PeriodicFunction):
    """Raise ResolutionError if ``f`` carries energy above the 2/3 cutoff."""
    c = np.abs(f.coeffs)
    top = np.abs(f.grid.modes) * 3 > f.grid.N
    scale = c.max(initial=0.0)
    if scale > 0 and c[top].max(initial=0.0) > TOP_OCTAVE_RTOL * scale:
        raise ResolutionError(
            "function has energy above N/3; its Besov norm would be truncated "
            f"(N={f.grid.N}, top-mode magnitude {c[top].max():.3e})"
        )


def block_norms(f: PeriodicFunction, p: float = 2.0) -> np.ndarray:
    """||Delta_q f||_Lp for q = -1 .. q_max(N), as an array indexed by q + 1."""
    resolution_check(f)
    w = _partition_weights(f.grid.N)
    if p == 2:
        return np.sqrt(2.0 * np.pi * (w**2 @ np.abs(f.coeffs) ** 2))
    return _lp_from_coeffs(w * f.coeffs, f.grid.N, float(p))


def _combine(norms: np.ndarray, s: float, r: float) -> float:
    q = np.arange(-1, norms.shape[-1] - 1)
    terms = 2.0 ** (s * q) * norms
    if math.isinf(r):
        return float(terms.max(initial=0.0))
    return float(np.sum(terms**r) ** (1.0 / r))


def besov_norm(f: PeriodicFunction, idx: BesovIndex) -> float:
    """||f||_{B^s_{p,r}} = || (2^{sq} ||Delta_q f||_Lp)_q ||_{l^r}."""
    return _combine(block_norms(f, idx.p), idx.s, idx.r)


def pair_norm(u: PeriodicFunction, rho: PeriodicFunction, idx: BesovIndex) -> float:
    """Norm on B^s_{p,r} x B^{s-1}_{p,r}: ||u||_{B^s} + ||rho||_{B^{s-1}}."""
    u._check_grid(rho)
    return besov_norm(u, idx) + besov_norm(rho, idx.shifted(-1.0))
