"""Problem data for the periodic-reflection hyperbolic system.

    u_t + u_x + a(x) u + b(x) v = f(x, t)
    v_t - v_x + c(x) u + d(x) v = g(x, t)
    u(0, t) = r0 v(0, t),   v(1, t) = r1 u(1, t),   T-periodic in t.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Mapping

import numpy as np

from .grid import DEFAULT_ORDER, SpatialGrid
from .piecewise import MAX_DEGREE, PiecewiseCoefficient, antiderivative, merge_breakpoints
from .spectral import SpectralField, TimeCircle

DEFAULT_K = 64
DEFAULT_GAMMA = 2.0


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    a: PiecewiseCoefficient
    b: PiecewiseCoefficient
    c: PiecewiseCoefficient
    d: PiecewiseCoefficient
    r0: complex
    r1: complex
    circle: TimeCircle
    gamma: float
    forcing: tuple[SpectralField, SpectralField]
    grid: SpatialGrid

    def __post_init__(self):
        object.__setattr__(self, "r0", complex(self.r0))
        object.__setattr__(self, "r1", complex(self.r1))
        object.__setattr__(self, "gamma", float(self.gamma))
        if not (np.isfinite(self.r0) and np.isfinite(self.r1)):
            raise ValueError("reflection coefficients must be finite")
        if not np.isfinite(self.gamma):
            raise ValueError("gamma must be finite")
        for name in "abcd":
            coef = getattr(self, name)
            if coef.degree > MAX_DEGREE:
                raise ValueError(f"coefficient {name!r} has degree {coef.degree} > {MAX_DEGREE}")
            if not self.grid.contains_points(coef.breakpoints):
                raise ValueError(f"grid does not refine the breakpoints of coefficient {name!r}")
        f, g = self.forcing
        for fld in (f, g):
            if fld.circle != self.circle or not fld.grid.same_as(self.grid):
                raise ValueError("forcing must live on the problem's circle and grid")

    @property
    def f(self) -> SpectralField:
        return self.forcing[0]

    @property
    def g(self) -> SpectralField:
        return self.forcing[1]

    @property
    def omega(self) -> float:
        return self.circle.omega

    @property
    def ks(self) -> np.ndarray:
        return self.circle.ks

    @cached_property
    def alpha(self) -> PiecewiseCoefficient:
        return antiderivative(self.a)

    @cached_property
    def delta(self) -> PiecewiseCoefficient:
        return antiderivative(self.d)

    @cached_property
    def alpha1(self) -> complex:
        return complex(self.alpha(1.0))

    @cached_property
    def delta1(self) -> complex:
        return complex(self.delta(1.0))

    @cached_property
    def sup_norms(self) -> dict:
        return {name: getattr(self, name).sup_abs() for name in "abcd"}

    def at_points(self, name: str) -> np.ndarray:
        """Values of coefficient ``name`` (or ``alpha``/``delta``) at the grid's Lobatto points."""
        return self._point_cache[name]

    def at_gauss(self, name: str) -> np.ndarray:
        return self._gauss_cache[name]

    @cached_property
    def _point_cache(self) -> dict:
        return {n: self._coef(n).on_cells(self.grid.nodes, self.grid.points)
                for n in ("a", "b", "c", "d", "alpha", "delta")}

    @cached_property
    def _gauss_cache(self) -> dict:
        return {n: self._coef(n).on_cells(self.grid.nodes, self.grid.gauss_points)
                for n in ("a", "b", "c", "d")}

    def _coef(self, name) -> PiecewiseCoefficient:
        return getattr(self, name)

    def with_forcing(self, f: SpectralField, g: SpectralField) -> ProblemSpec:
        return replace(self, forcing=(f, g))

    def coefficient_breakpoints(self) -> np.ndarray:
        return merge_breakpoints(self.a, self.b, self.c, self.d)


def _as_coef(c) -> PiecewiseCoefficient:
    if isinstance(c, PiecewiseCoefficient):
        return c
    return PiecewiseCoefficient.constant(c)


def default_max_width(circle: TimeCircle, coefficients) -> float:
    """Cell width resolving the fastest mode: ``h * (K omega + sum ||coef||_inf) <= 1``."""
    rate = circle.K * circle.omega + sum(c.sup_abs() for c in coefficients)
    return min(0.125, 1.0 / max(rate, 1.0))


def make_problem(a=0.0, b=0.0, c=0.0, d=0.0, r0=0.0, r1=0.0, *, period: float = 1.0,
                 K: int = DEFAULT_K, gamma: float = DEFAULT_GAMMA,
                 f: Mapping[int, object] | None = None, g: Mapping[int, object] | None = None,
                 order: int = DEFAULT_ORDER, refine: int = 0, max_width: float | None = None,
                 extra_breakpoints=()) -> ProblemSpec:
    """Assemble a :class:`ProblemSpec` on an automatically refined grid.

    Coefficients may be :class:`PiecewiseCoefficient` instances or constants.
    ``f`` and ``g`` map a mode index to a mode function (see
    :meth:`SpectralField.from_modes`); breakpoints of piecewise forcing modes
    are merged into the grid.
    """
    coefs = [_as_coef(x) for x in (a, b, c, d)]
    circle = TimeCircle(period, K)
    f = dict(f or {})
    g = dict(g or {})
    forcing_pw = [m for m in list(f.values()) + list(g.values())
                  if isinstance(m, PiecewiseCoefficient)]
    bps = merge_breakpoints(*coefs, *forcing_pw, extra=extra_breakpoints)
    if max_width is None:
        max_width = default_max_width(circle, coefs)
    grid = SpatialGrid.covering(bps, max_width, order=order, refine=refine)
    fld_f = SpectralField.from_modes(circle, grid, f)
    fld_g = SpectralField.from_modes(circle, grid, g)
    return ProblemSpec(*coefs, r0, r1, circle, gamma, (fld_f, fld_g), grid)
