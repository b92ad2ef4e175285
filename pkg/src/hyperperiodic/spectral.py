"""Time-periodic fields stored by their t-Fourier mode functions.

A T-periodic field ``u(x, t)`` is represented by the modes ``u_k(x)``,
``|k| <= K``, with ``u(x, t) = sum_k u_k(x) exp(i k omega t)`` and
``omega = 2 pi / T``.  Sobolev-scale norms are evaluated in mode form:

    ||u||_{H^{0,gamma}}^2 = T * sum_k (1 + k^2)^gamma ||u_k||_{L^2(0,1)}^2
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import AliasingError, GridMismatchError
from .grid import SpatialGrid
from .piecewise import PiecewiseCoefficient


@dataclass(frozen=True)
class TimeCircle:
    """Period ``T`` and mode truncation ``K`` (modes ``-K..K``)."""

    T: float
    K: int

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T > 0):
            raise ValueError("period T must be positive and finite")
        if int(self.K) != self.K or self.K < 0:
            raise ValueError("mode truncation K must be a nonnegative integer")
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "K", int(self.K))

    @property
    def omega(self) -> float:
        return 2.0 * np.pi / self.T

    @property
    def n_modes(self) -> int:
        return 2 * self.K + 1

    @property
    def ks(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    def weights(self, gamma: float) -> np.ndarray:
        """Sobolev weights ``(1 + k^2)^gamma`` in ascending ``k``."""
        gamma = _check_gamma(gamma)
        return (1.0 + self.ks.astype(float) ** 2) ** gamma


def _check_gamma(gamma) -> float:
    gamma = float(gamma)
    if not np.isfinite(gamma):
        raise ValueError("Sobolev index must be finite")
    return gamma


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Truncated t-Fourier representation ``{h_k}_{|k|<=K}`` on a spatial grid.

    ``values[k + K]`` holds the nodal values of ``h_k`` with shape
    ``grid.shape``.  ``real`` marks fields that are real-valued in time,
    which must satisfy ``h_{-k} = conj(h_k)``.
    """

    circle: TimeCircle
    grid: SpatialGrid
    values: np.ndarray
    real: bool = False

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        expected = (self.circle.n_modes,) + self.grid.shape
        if vals.shape != expected:
            raise ValueError(f"mode array has shape {vals.shape}, expected {expected}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.real:
            err = np.max(np.abs(vals - np.conj(vals[::-1])), initial=0.0)
            scale = max(1.0, np.max(np.abs(vals), initial=0.0))
            if err > 1e-12 * scale:
                raise ValueError("field flagged real but h_{-k} != conj(h_k)")

    @classmethod
    def zeros(cls, circle: TimeCircle, grid: SpatialGrid) -> SpectralField:
        return cls(circle, grid, np.zeros((circle.n_modes,) + grid.shape, complex))

    @classmethod
    def from_modes(cls, circle: TimeCircle, grid: SpatialGrid,
                   modes: Mapping[int, object], real: bool = False) -> SpectralField:
        """Build a field from a sparse map ``k -> mode function``.

        Mode functions may be a :class:`PiecewiseCoefficient`, a callable of
        ``x``, a scalar constant, or an array of nodal values.
        """
        vals = np.zeros((circle.n_modes,) + grid.shape, complex)
        for k, src in modes.items():
            k = int(k)
            if abs(k) > circle.K:
                raise ValueError(f"mode {k} outside truncation K = {circle.K}")
            vals[k + circle.K] = sample_mode(src, grid)
        return cls(circle, grid, vals, real)

    def mode(self, k: int) -> np.ndarray:
        if abs(k) > self.circle.K:
            raise IndexError(f"mode {k} outside truncation K = {self.circle.K}")
        return self.values[k + self.circle.K]

    def compatible(self, other: SpectralField) -> bool:
        return self.circle == other.circle and self.grid.same_as(other.grid)

    def _check(self, other):
        if not self.compatible(other):
            raise GridMismatchError("fields live on different grids or time circles")

    def with_values(self, values) -> SpectralField:
        return SpectralField(self.circle, self.grid, values)

    def __add__(self, other: SpectralField) -> SpectralField:
        self._check(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: SpectralField) -> SpectralField:
        self._check(other)
        return self.with_values(self.values - other.values)

    def __neg__(self) -> SpectralField:
        return self.with_values(-self.values)

    def __mul__(self, scalar) -> SpectralField:
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def mode_l2(self) -> np.ndarray:
        """``||h_k||_{L^2(0,1)}`` for every mode, ascending ``k``."""
        return np.sqrt(self.grid.l2_sq(self.values))

    def trace(self, x: float) -> np.ndarray:
        """Mode values ``h_k(x)``."""
        return self.grid.evaluate(self.values, x)


def sample_mode(src, grid: SpatialGrid) -> np.ndarray:
    if isinstance(src, PiecewiseCoefficient):
        return src.on_cells(grid.nodes, grid.points)
    if callable(src):
        return np.broadcast_to(np.asarray(src(grid.points), complex), grid.shape).copy()
    arr = np.asarray(src, dtype=complex)
    return np.broadcast_to(arr, grid.shape).copy()


# -- Fourier analysis -----------------------------------------------------


def fourier_modes(samples, K: int) -> np.ndarray:
    """Modes ``-K..K`` of samples taken at ``N`` uniform times over one period.

    ``samples`` has shape ``(..., N)``; the result has shape ``(2K + 1, ...)``.
    The discrete sum ``(1/N) sum_n u(t_n) exp(-i k omega t_n)`` equals the
    exact coefficient for trigonometric polynomials of degree <= K once
    ``N >= 2K + 1``.
    """
    samples = np.asarray(samples)
    N = samples.shape[-1]
    if N < 2 * K + 1:
        raise AliasingError(f"{N} samples cannot resolve modes |k| <= {K} (need {2 * K + 1})")
    spec = np.fft.fft(samples, axis=-1) / N
    idx = np.arange(-K, K + 1) % N
    return np.moveaxis(spec[..., idx], -1, 0)


def sample_times(circle: TimeCircle, N: int) -> np.ndarray:
    return circle.T * np.arange(N) / N


def analyze(samples, circle: TimeCircle, grid: SpatialGrid, real: bool = False) -> SpectralField:
    """Fourier-analyse nodal time series, shape ``grid.shape + (N,)``."""
    samples = np.asarray(samples)
    if samples.shape[:-1] != grid.shape:
        raise ValueError(f"samples have spatial shape {samples.shape[:-1]}, grid is {grid.shape}")
    return SpectralField(circle, grid, fourier_modes(samples, circle.K), real)


def synthesize(field: SpectralField, times) -> np.ndarray:
    """Evaluate ``sum_k h_k(x) exp(i k omega t)``; result shape ``(len(times),) + grid.shape``."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    circle = field.circle
    phase = np.exp(1j * circle.omega * np.outer(times, circle.ks))
    out = np.zeros((times.size,) + field.grid.shape, complex)
    for j in range(circle.n_modes):
        out += phase[:, j, None, None] * field.values[j]
    return out


# -- norms ----------------------------------------------------------------


def _pair(pair) -> tuple[SpectralField, SpectralField]:
    u, v = pair
    u._check(v)
    return u, v


def w_norm(pair, gamma: float) -> float:
    """W^gamma norm of ``(u, v)``: ``(T sum_k w_k (||u_k||^2 + ||v_k||^2))^(1/2)``."""
    u, v = _pair(pair)
    wk = u.circle.weights(gamma)
    sq = u.grid.l2_sq(u.values) + u.grid.l2_sq(v.values)
    return float(np.sqrt(u.circle.T * np.sum(wk * sq)))


def characteristic_derivatives(pair) -> tuple[np.ndarray, np.ndarray]:
    """Mode values of ``(d_t + d_x) u`` and ``(d_t - d_x) v``."""
    u, v = _pair(pair)
    ikw = 1j * u.circle.omega * u.circle.ks[:, None, None]
    du = u.grid.derivative(u.values) + ikw * u.values
    dv = u.grid.derivative(v.values) - ikw * v.values
    return du, dv


def v_norm(pair, gamma: float) -> float:
    """V^gamma norm: W^gamma norm plus that of the characteristic derivatives."""
    u, v = _pair(pair)
    du, dv = characteristic_derivatives((u, v))
    wk = u.circle.weights(gamma)
    sq = (u.grid.l2_sq(u.values) + u.grid.l2_sq(v.values)
          + u.grid.l2_sq(du) + u.grid.l2_sq(dv))
    return float(np.sqrt(u.circle.T * np.sum(wk * sq)))


def trace_norm(field: SpectralField, x: float, gamma: float) -> float:
    """H^{gamma-1}(S^T) norm of the trace ``t -> h(x, t)``."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"trace point x = {x} outside [0, 1]")
    vals = field.trace(x)
    wk = field.circle.weights(_check_gamma(gamma) - 1.0)
    return float(np.sqrt(field.circle.T * np.sum(wk * np.abs(vals) ** 2)))
