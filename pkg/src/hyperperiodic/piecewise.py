"""Piecewise polynomial coefficients on (0, 1).

Coefficients of the hyperbolic system are bounded functions of x that are
smooth between a finite set of breakpoints (one piece per laser section).
Each piece is a complex polynomial stored by ascending powers of the global
coordinate x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

MAX_DEGREE = 3


@dataclass(frozen=True, eq=False)
class PiecewiseCoefficient:
    """Complex piecewise polynomial ``c(x)`` on ``[0, 1]``.

    Parameters
    ----------
    breakpoints : array_like, shape (n + 1,)
        Strictly increasing, first entry 0, last entry 1.
    coeffs : array_like, shape (n, m)
        Row ``i`` holds the ascending polynomial coefficients (in ``x``) of the
        piece on ``[breakpoints[i], breakpoints[i + 1]]``.
    """

    breakpoints: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=float).ravel()
        cf = np.array(self.coeffs, dtype=complex)
        if cf.ndim == 1:
            cf = cf[:, None]
        if bp.size < 2:
            raise ValueError("need at least two breakpoints")
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if cf.shape[0] != bp.size - 1:
            raise ValueError(
                f"piece count {cf.shape[0]} != breakpoint count - 1 = {bp.size - 1}"
            )
        if not np.all(np.isfinite(cf)):
            raise ValueError("coefficients must be finite")
        bp.setflags(write=False)
        cf.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "coeffs", cf)

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value) -> PiecewiseCoefficient:
        return cls([0.0, 1.0], [[complex(value)]])

    @classmethod
    def zero(cls) -> PiecewiseCoefficient:
        return cls.constant(0.0)

    @classmethod
    def piecewise_constant(cls, breakpoints, values) -> PiecewiseCoefficient:
        """One constant value per section."""
        values = np.asarray(values, dtype=complex).ravel()
        return cls(breakpoints, values[:, None])

    @classmethod
    def piecewise_linear(cls, nodes, values) -> PiecewiseCoefficient:
        """Continuous interpolant of ``values`` at ``nodes``."""
        x = np.asarray(nodes, dtype=float)
        y = np.asarray(values, dtype=complex)
        slope = np.diff(y) / np.diff(x)
        c0 = y[:-1] - slope * x[:-1]
        return cls(x, np.stack([c0, slope], axis=1))

    # -- basic queries ----------------------------------------------------

    @property
    def n_pieces(self) -> int:
        return self.coeffs.shape[0]

    @property
    def degree(self) -> int:
        nz = np.nonzero(np.any(self.coeffs != 0, axis=0))[0]
        return int(nz[-1]) if nz.size else 0

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def piece_index(self, x) -> np.ndarray:
        """Index of the piece containing ``x``; breakpoints belong to the piece on their right."""
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        return np.clip(idx, 0, self.n_pieces - 1)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = self.piece_index(x)
        out = np.zeros(x.shape, dtype=complex)
        for i in range(self.n_pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = P.polyval(x[mask], self.coeffs[i])
        return out

    def on_cells(self, cell_nodes, pts) -> np.ndarray:
        """Evaluate at ``pts`` (shape (M, Q)) where row j lies in cell j of ``cell_nodes``.

        The piece is chosen by the cell midpoint, so values at a cell
        boundary that is also a breakpoint come from the piece owning the cell.
        """
        cell_nodes = np.asarray(cell_nodes, dtype=float)
        mid = 0.5 * (cell_nodes[:-1] + cell_nodes[1:])
        cf = self.coeffs[self.piece_index(mid)]
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(pts.shape, dtype=complex)
        for m in range(cf.shape[1] - 1, -1, -1):
            out = out * pts + cf[:, m:m + 1]
        return out

    def eval_piece(self, i: int, x):
        return P.polyval(np.asarray(x, dtype=float), self.coeffs[i])

    def real_part(self) -> PiecewiseCoefficient:
        return PiecewiseCoefficient(self.breakpoints, self.coeffs.real)

    def scaled(self, factor) -> PiecewiseCoefficient:
        return PiecewiseCoefficient(self.breakpoints, self.coeffs * factor)

    def integral(self) -> complex:
        """Exact value of the integral over (0, 1)."""
        return complex(antiderivative(self)(1.0))

    def sup_abs(self) -> float:
        """Essential supremum of ``|c|`` on (0, 1).

        Exact: ``|p|^2`` is a real polynomial on each piece, maximised over
        the piece endpoints and the real critical points inside the piece.
        """
        best = 0.0
        for i in range(self.n_pieces):
            lo, hi = self.breakpoints[i], self.breakpoints[i + 1]
            c = self.coeffs[i]
            sq = P.polymul(c, np.conj(c)).real
            cand = [lo, hi]
            der = P.polyder(sq)
            if der.size and np.any(der):
                roots = P.polyroots(P.polytrim(der)) if np.any(der[1:]) else []
                for r in np.atleast_1d(roots):
                    if abs(r.imag) < 1e-12 and lo < r.real < hi:
                        cand.append(r.real)
            vals = np.abs(P.polyval(np.array(cand), c))
            best = max(best, float(vals.max()))
        return best


def antiderivative(c: PiecewiseCoefficient) -> PiecewiseCoefficient:
    """Continuous piecewise antiderivative of ``c`` vanishing at x = 0.

    Each piece gains one polynomial degree; the integration constants are
    chosen so the result is continuous across breakpoints.
    """
    bp = c.breakpoints
    pieces = np.zeros((c.n_pieces, c.coeffs.shape[1] + 1), complex)
    value_at_left = 0.0 + 0.0j
    for i in range(c.n_pieces):
        # polyint trims all-zero input, so copy into a fixed-width row
        q = P.polyint(c.coeffs[i])
        pieces[i, :q.size] = q
        pieces[i, 0] += value_at_left - P.polyval(bp[i], pieces[i])
        value_at_left = P.polyval(bp[i + 1], pieces[i])
    return PiecewiseCoefficient(bp, pieces)


def merge_breakpoints(*coefficients, extra=()) -> np.ndarray:
    """Sorted union of all breakpoints (and ``extra`` points) in [0, 1]."""
    pts = [np.asarray(extra, dtype=float).ravel()]
    pts += [c.breakpoints for c in coefficients]
    merged = np.unique(np.concatenate(pts + [np.array([0.0, 1.0])]))
    return merged
