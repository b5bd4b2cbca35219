"""
Truncated Fourier series on the torus T = R / 2piZ.

A real 2pi-periodic function is stored by its complex Fourier coefficients

    u(x) = sum_j c_j exp(i j x),    c_j = (1/2pi) int_0^2pi exp(-i j y) u(y) dy,

for the modes j in [-N/2, N/2). Coefficient arrays use numpy FFT ordering,
so ``coeffs[k]`` holds the mode ``modes(N)[k]``. The discrete analogue of the
integral is ``fft(samples) / N``, which makes ``coeff(0)`` the mean value.

Lp norms use the non-normalized measure dx on (0, 2pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Literal

import numpy as np

from .errors import InputShapeError, ParameterError, ResolutionError

__all__ = [
    "GridSpec",
    "PeriodicFunction",
    "TrigTerm",
    "analyze",
    "synthesize",
    "from_terms",
    "constant",
    "derivative",
    "multiply",
    "lp_norm",
    "modes",
    "dealias_mask",
]


@lru_cache(maxsize=32)
def _modes(N: int) -> np.ndarray:
    k = np.fft.fftfreq(N, 1.0 / N).astype(np.int64)
    k.setflags(write=False)
    return k


def modes(N: int) -> np.ndarray:
    """Integer wavenumbers in FFT order; ``modes(N)[N // 2] == -N // 2``."""
    return _modes(N)


@lru_cache(maxsize=32)
def _dealias_mask(N: int) -> np.ndarray:
    mask = np.abs(_modes(N)) * 3 <= N
    mask.setflags(write=False)
    return mask


def dealias_mask(N: int) -> np.ndarray:
    """Boolean mask of the modes kept by the 2/3 rule, |j| <= N/3."""
    return _dealias_mask(N)


@dataclass(frozen=True)
class GridSpec:
    """Equispaced grid x_k = 2 pi k / N on [0, 2pi)."""

    N: int

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or isinstance(self.N, bool):
            raise ParameterError(f"N must be an integer, got {self.N!r}")
        if self.N < 8 or self.N % 2:
            raise ParameterError(f"N must be even and >= 8, got {self.N}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def x(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.N) / self.N

    @property
    def modes(self) -> np.ndarray:
        return _modes(self.N)

    @property
    def nyquist_index(self) -> int:
        return self.N // 2

    @property
    def max_dealiased_mode(self) -> int:
        return self.N // 3


@dataclass(frozen=True, eq=False)
class PeriodicFunction:
    """Real periodic function given by Hermitian Fourier coefficients.

    Instances are immutable: the coefficient array is copied and locked at
    construction. Use the module functions (or ``+``, ``-``, scalar ``*``)
    to build new functions.
    """

    grid: GridSpec
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.shape != (self.grid.N,):
            raise InputShapeError(
                f"expected {self.grid.N} coefficients, got shape {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def coeff(self, j: int) -> complex:
        """Coefficient of exp(i j x); zero for modes outside [-N/2, N/2)."""
        N = self.grid.N
        if not -N // 2 <= j < N // 2:
            return 0j
        return complex(self.coeffs[j % N])

    def values(self) -> np.ndarray:
        return synthesize(self)

    def hermitian_defect(self) -> float:
        """max |c_j - conj(c_-j)| over paired modes, plus |Im c_{-N/2}|."""
        c = self.coeffs
        paired = np.abs(c[1:] - np.conj(c[1:][::-1]))
        return float(max(paired.max(initial=0.0), abs(c[0].imag)))

    def _check_grid(self, other: PeriodicFunction):
        if other.grid != self.grid:
            raise InputShapeError(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other):
        if isinstance(other, PeriodicFunction):
            self._check_grid(other)
            return PeriodicFunction(self.grid, self.coeffs + other.coeffs)
        if np.isscalar(other):
            c = self.coeffs.copy()
            c[0] += other
            return PeriodicFunction(self.grid, c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return PeriodicFunction(self.grid, -self.coeffs)

    def __sub__(self, other):
        if isinstance(other, PeriodicFunction) or np.isscalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        # scalar scaling only; use multiply() for products of functions
        if np.isscalar(other) and np.isreal(other):
            return PeriodicFunction(self.grid, self.coeffs * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other) and np.isreal(other):
            return PeriodicFunction(self.grid, self.coeffs / float(other))
        return NotImplemented


@dataclass(frozen=True)
class TrigTerm:
    """``amplitude * sin(k x + phase)`` or ``amplitude * cos(k x + phase)``."""

    amplitude: float
    wavenumber: int
    phase: float = 0.0
    kind: Literal["sin", "cos"] = "sin"

    def __post_init__(self):
        if self.kind not in ("sin", "cos"):
            raise ParameterError(f"kind must be 'sin' or 'cos', got {self.kind!r}")
        if int(self.wavenumber) != self.wavenumber or self.wavenumber < 0:
            raise ParameterError(
                f"wavenumber must be a nonnegative integer, got {self.wavenumber}"
            )


def analyze(samples, grid: GridSpec) -> PeriodicFunction:
    """Fourier coefficients of grid samples, normalized so coeff(0) is the mean."""
    samples = np.asarray(samples)
    if samples.ndim != 1 or samples.shape[0] != grid.N:
        raise InputShapeError(
            f"expected {grid.N} samples, got array of shape {samples.shape}"
        )
    if np.iscomplexobj(samples):
        raise InputShapeError("samples must be real")
    return PeriodicFunction(grid, np.fft.fft(samples) / grid.N)


def synthesize(f: PeriodicFunction) -> np.ndarray:
    """Values of ``f`` at the grid nodes."""
    return np.fft.ifft(f.coeffs * f.grid.N).real


def from_terms(terms: Iterable[TrigTerm], grid: GridSpec) -> PeriodicFunction:
    """Exact coefficients of a finite trigonometric sum.

    ``a sin(kx + phi)`` puts ``a e^{i phi} / 2i`` on mode k and the conjugate on
    mode -k; cosines use ``a e^{i phi} / 2``. For k = 0 the term contributes
    ``a sin(phi)`` or ``a cos(phi)`` to the mean.
    """
    N = grid.N
    c = np.zeros(N, dtype=np.complex128)
    for term in terms:
        k = int(term.wavenumber)
        if k >= N // 2:
            raise ResolutionError(
                f"wavenumber {k} is not representable on a grid with N={N}"
            )
        a, phi = float(term.amplitude), float(term.phase)
        if k == 0:
            c[0] += a * (math.sin(phi) if term.kind == "sin" else math.cos(phi))
            continue
        rot = complex(math.cos(phi), math.sin(phi))
        ck = a * rot / 2j if term.kind == "sin" else a * rot / 2
        c[k] += ck
        c[-k] += ck.conjugate()
    return PeriodicFunction(grid, c)


def constant(value: float, grid: GridSpec) -> PeriodicFunction:
    c = np.zeros(grid.N, dtype=np.complex128)
    c[0] = value
    return PeriodicFunction(grid, c)


def derivative(f: PeriodicFunction) -> PeriodicFunction:
    """d/dx: c_j -> i j c_j, Nyquist mode dropped."""
    c = 1j * f.grid.modes * f.coeffs
    c[f.grid.nyquist_index] = 0.0
    return PeriodicFunction(f.grid, c)


def _product_coeffs(a: np.ndarray, b: np.ndarray, N: int) -> np.ndarray:
    # a, b: FFT-ordered coefficients; returns the 2/3-rule dealiased product
    mask = _dealias_mask(N)
    fa = np.fft.ifft(np.where(mask, a, 0.0) * N).real
    fb = np.fft.ifft(np.where(mask, b, 0.0) * N).real
    out = np.fft.fft(fa * fb) / N
    out[~mask] = 0.0
    return out


def multiply(f: PeriodicFunction, g: PeriodicFunction) -> PeriodicFunction:
    """Pseudospectral product with 2/3-rule truncation before and after."""
    f._check_grid(g)
    return PeriodicFunction(f.grid, _product_coeffs(f.coeffs, g.coeffs, f.grid.N))


def _lp_from_coeffs(c: np.ndarray, N: int, p: float) -> np.ndarray:
    # c may be 1-D or stacked blocks of shape (m, N)
    if p == 2:
        return np.sqrt(2.0 * np.pi * np.sum(np.abs(c) ** 2, axis=-1))
    vals = np.abs(np.fft.ifft(c * N, axis=-1).real)
    if math.isinf(p):
        return vals.max(axis=-1)
    return (2.0 * np.pi / N * np.sum(vals**p, axis=-1)) ** (1.0 / p)


def lp_norm(f: PeriodicFunction, p: float) -> float:
    """Lp(0, 2pi) norm.

    p = 2 is exact via Parseval, p = inf is the maximum over grid nodes, and
    any other p >= 1 uses the trapezoidal rule on the grid.
    """
    p = float(p)
    if not p >= 1:
        raise ParameterError(f"p must be >= 1, got {p}")
    return float(_lp_from_coeffs(f.coeffs, f.grid.N, p))
