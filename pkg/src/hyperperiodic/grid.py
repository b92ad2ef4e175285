"""Spatial discretisation of (0, 1): cells carrying Gauss-Lobatto interpolants.

Every mode function is stored by its values at the ``order + 1``
Legendre-Gauss-Lobatto points of each cell.  The cell endpoints are among
these points, so nodal values and traces are read off directly, and values
on either side of a cell boundary may differ (right-hand sides are allowed
to jump at section interfaces).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from numpy.polynomial import legendre

DEFAULT_ORDER = 12


def barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def interpolation_matrix(nodes, weights, targets) -> np.ndarray:
    """Matrix mapping values at ``nodes`` to the interpolant at ``targets``."""
    targets = np.asarray(targets, dtype=float).ravel()
    diff = targets[:, None] - nodes[None, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    terms = weights[None, :] / diff
    mat = terms / terms.sum(axis=1, keepdims=True)
    hit = exact.any(axis=1)
    mat[hit] = exact[hit].astype(float)
    return mat


@dataclass(frozen=True)
class _Reference:
    lobatto: np.ndarray
    bary: np.ndarray
    diff: np.ndarray
    gauss: np.ndarray
    gauss_weights: np.ndarray
    to_gauss: np.ndarray


@lru_cache(maxsize=None)
def reference_element(order: int) -> _Reference:
    """Reference data on [-1, 1] for interpolants of the given polynomial order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    interior = legendre.Legendre.basis(order).deriv().roots().real
    lob = np.concatenate([[-1.0], np.sort(interior), [1.0]])
    w = barycentric_weights(lob)
    D = (w[None, :] / w[:, None]) / (lob[:, None] - lob[None, :] + np.eye(order + 1))
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    # exact for squared residuals involving cubic coefficients
    gx, gw = legendre.leggauss(order + 4)
    return _Reference(lob, w, D, gx, gw, interpolation_matrix(lob, w, gx))


@dataclass(frozen=True, eq=False)
class SpatialGrid:
    """Partition ``0 = nodes[0] < ... < nodes[M] = 1`` with per-cell interpolants."""

    nodes: np.ndarray
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float).ravel()
        if nodes.size < 2 or nodes[0] != 0.0 or nodes[-1] != 1.0:
            raise ValueError("grid nodes must start at 0 and end at 1")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("grid nodes must be strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "order", int(self.order))
        reference_element(self.order)

    @classmethod
    def uniform(cls, cells: int, order: int = DEFAULT_ORDER) -> SpatialGrid:
        return cls(np.linspace(0.0, 1.0, cells + 1), order)

    @classmethod
    def covering(cls, breakpoints, max_width: float, order: int = DEFAULT_ORDER,
                 refine: int = 0) -> SpatialGrid:
        """Grid containing every breakpoint, each segment split into equal cells of width <= max_width."""
        bp = np.unique(np.concatenate([[0.0, 1.0], np.asarray(breakpoints, float).ravel()]))
        pieces = []
        for lo, hi in zip(bp[:-1], bp[1:]):
            n = max(1, int(np.ceil((hi - lo) / max_width - 1e-12))) * 2 ** refine
            pieces.append(np.linspace(lo, hi, n + 1)[:-1])
        return cls(np.concatenate(pieces + [[1.0]]), order)

    @property
    def cells(self) -> int:
        return self.nodes.size - 1

    @property
    def shape(self) -> tuple:
        return (self.cells, self.order + 1)

    @property
    def ref(self) -> _Reference:
        return reference_element(self.order)

    @cached_property
    def widths(self) -> np.ndarray:
        return np.diff(self.nodes)

    def map_reference(self, xi) -> np.ndarray:
        """Physical coordinates, shape (M, len(xi)), of reference points ``xi`` in every cell."""
        xi = np.asarray(xi, dtype=float)
        return self.nodes[:-1, None] + 0.5 * self.widths[:, None] * (1.0 + xi[None, :])

    @cached_property
    def points(self) -> np.ndarray:
        return self.map_reference(self.ref.lobatto)

    @cached_property
    def gauss_points(self) -> np.ndarray:
        return self.map_reference(self.ref.gauss)

    @cached_property
    def quad_weights(self) -> np.ndarray:
        return 0.5 * self.widths[:, None] * self.ref.gauss_weights[None, :]

    def same_as(self, other: SpatialGrid) -> bool:
        return self is other or (
            self.order == other.order and np.array_equal(self.nodes, other.nodes)
        )

    def contains_points(self, pts, atol=1e-14) -> bool:
        pts = np.asarray(pts, dtype=float).ravel()
        dist = np.abs(pts[:, None] - self.nodes[None, :]).min(axis=1)
        return bool(np.all(dist <= atol))

    # -- operations on nodal values of shape (..., M, P) ------------------

    def to_gauss(self, values) -> np.ndarray:
        return values @ self.ref.to_gauss.T

    def derivative(self, values) -> np.ndarray:
        return (values @ self.ref.diff.T) * (2.0 / self.widths)[:, None]

    def integrate_gauss(self, gvalues) -> np.ndarray:
        """Integral over (0, 1) of a function given at the Gauss points."""
        return np.sum(gvalues * self.quad_weights, axis=(-2, -1))

    def l2_sq(self, values) -> np.ndarray:
        g = self.to_gauss(values)
        return self.integrate_gauss((g * np.conj(g)).real)

    def locate(self, x: float) -> int:
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"x = {x} outside [0, 1]")
        return int(np.clip(np.searchsorted(self.nodes, x, side="right") - 1, 0, self.cells - 1))

    def evaluate(self, values, x: float) -> np.ndarray:
        """Interpolant of nodal ``values`` (..., M, P) at the point ``x``."""
        j = self.locate(x)
        xi = 2.0 * (x - self.nodes[j]) / self.widths[j] - 1.0
        row = interpolation_matrix(self.ref.lobatto, self.ref.bary, [xi])[0]
        return values[..., j, :] @ row
