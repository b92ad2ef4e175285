"""Shooting oracle for the coupled mode problems.

Integrates the full 2x2 mode system

    u' = f_k - (a + i k omega) u - b v
    v' = -g_k + (d + i k omega) v + c u

with a fixed-step sixth-order Runge-Kutta method (Butcher's 7-stage
scheme), cell by cell so that coefficient discontinuities only ever sit at
step boundaries.  A particular solution from zero data and a homogeneous
solution from ``(u, v)(0) = (r0, 1)`` are combined to satisfy
``v(1) = r1 u(1)``.  Nothing here shares code with the explicit formula in
:mod:`hyperperiodic.modes`.
"""

from __future__ import annotations

import numpy as np

from .errors import OracleSingular
from .grid import interpolation_matrix
from .modes import ModeSolution, coupled_residuals
from .problem import ProblemSpec

# Butcher (1964), 7 stages, order 6
RK6_C = np.array([0.0, 1 / 3, 2 / 3, 1 / 3, 1 / 2, 1 / 2, 1.0])
RK6_A = [
    [],
    [1 / 3],
    [0.0, 2 / 3],
    [1 / 12, 1 / 3, -1 / 12],
    [-1 / 16, 9 / 8, -3 / 16, -3 / 8],
    [0.0, 9 / 8, -3 / 8, -3 / 4, 1 / 2],
    [9 / 44, -9 / 11, 63 / 44, 18 / 11, 0.0, -16 / 11],
]
RK6_B = np.array([11 / 120, 0.0, 27 / 40, 27 / 40, -4 / 15, -4 / 15, 11 / 120])

STEP_PHASE = 0.05


def rk6_step(rhs, x, y, h):
    """One step of the 7-stage sixth-order explicit Runge-Kutta scheme."""
    stages = []
    for i, ci in enumerate(RK6_C):
        yi = y
        for aij, kj in zip(RK6_A[i], stages):
            if aij:
                yi = yi + h * aij * kj
        stages.append(rhs(x + ci * h, yi, i))
    out = y
    for bi, ki in zip(RK6_B, stages):
        if bi:
            out = out + h * bi * ki
    return out


def _rate(spec: ProblemSpec, ks) -> float:
    s = spec.sup_norms
    return float(np.max(np.abs(ks))) * spec.omega + s["a"] + s["b"] + s["c"] + s["d"] + 1.0


def oracle_solve_modes(spec: ProblemSpec, ks, F=None, G=None, step_phase: float = STEP_PHASE):
    """Solve the coupled mode problems for all ``ks`` simultaneously.

    Returns nodal arrays ``(U, V)`` of shape ``(len(ks),) + grid.shape``.
    Raises :class:`OracleSingular` when the boundary matching fails for some mode.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=int))
    grid = spec.grid
    ref = grid.ref
    if F is None:
        F = np.stack([spec.f.mode(k) for k in ks])
    if G is None:
        G = np.stack([spec.g.mode(k) for k in ks])
    nk = ks.size
    ikw = 1j * spec.omega * ks.astype(float)
    hmax = step_phase / _rate(spec, ks)
    coefs = {n: getattr(spec, n) for n in "abcd"}

    # state[:, 0] particular, state[:, 1] homogeneous; last axis (u, v)
    state = np.zeros((nk, 2, 2), complex)
    state[:, 1, 0] = spec.r0
    state[:, 1, 1] = 1.0
    U = np.zeros((nk, 2) + grid.shape, complex)
    V = np.zeros((nk, 2) + grid.shape, complex)

    for m in range(grid.cells):
        xl, width = grid.nodes[m], grid.widths[m]
        pts = grid.points[m]
        mid = xl + 0.5 * width
        piece = {n: c.coeffs[c.piece_index(mid)] for n, c in coefs.items()}
        # all stage abscissae of this cell, evaluated in one shot
        seg_steps = []
        for j in range(pts.size - 1):
            n_sub = max(1, int(np.ceil((pts[j + 1] - pts[j]) / hmax)))
            h = (pts[j + 1] - pts[j]) / n_sub
            seg_steps += [(pts[j] + i * h, h) for i in range(n_sub)]
        starts = np.array([s for s, _ in seg_steps])
        hs = np.array([h for _, h in seg_steps])
        xs = starts[:, None] + RK6_C[None, :] * hs[:, None]        # (steps, 7)
        zeta = 2.0 * (xs - xl) / width - 1.0
        L = interpolation_matrix(ref.lobatto, ref.bary, zeta.ravel())
        f_st = (F[:, m, :] @ L.T).reshape(nk, *xs.shape)
        g_st = (G[:, m, :] @ L.T).reshape(nk, *xs.shape)
        cv = {n: np.polynomial.polynomial.polyval(xs, p) for n, p in piece.items()}

        step_no = 0

        def rhs(x, y, stage):
            a, b, c, d = (cv[n][step_no, stage] for n in "abcd")
            u, v = y[..., 0], y[..., 1]
            du = -(a + ikw[:, None]) * u - b * v
            dv = (d + ikw[:, None]) * v + c * u
            du[:, 0] += f_st[:, step_no, stage]
            dv[:, 0] -= g_st[:, step_no, stage]
            return np.stack([du, dv], axis=-1)

        U[:, :, m, 0] = state[..., 0]
        V[:, :, m, 0] = state[..., 1]
        j = 0
        for step_no, (x0, h) in enumerate(seg_steps):
            state = rk6_step(rhs, x0, state, h)
            if np.isclose(x0 + h, pts[j + 1], rtol=0.0, atol=1e-14 * max(1.0, width)):
                j += 1
                U[:, :, m, j] = state[..., 0]
                V[:, :, m, j] = state[..., 1]

    pu, pv = U[:, 0, -1, -1], V[:, 0, -1, -1]
    hu, hv = U[:, 1, -1, -1], V[:, 1, -1, -1]
    den = hv - spec.r1 * hu
    scale = np.abs(hv) + np.abs(spec.r1 * hu)
    bad = np.abs(den) <= 1e-12 * np.maximum(scale, 1e-300)
    if np.any(bad):
        raise OracleSingular(f"boundary matching singular for mode k = {int(ks[np.argmax(bad)])}")
    s = (spec.r1 * pu - pv) / den
    Uo = U[:, 0] + s[:, None, None] * U[:, 1]
    Vo = V[:, 0] + s[:, None, None] * V[:, 1]
    return Uo, Vo


def oracle_collocation_solve(spec: ProblemSpec, k: int, fk=None, gk=None) -> ModeSolution:
    """Independent solution of the coupled mode-``k`` problem (see module docstring)."""
    F = spec.f.mode(k)[None] if fk is None else np.asarray(fk, complex)[None]
    G = spec.g.mode(k)[None] if gk is None else np.asarray(gk, complex)[None]
    U, V = oracle_solve_modes(spec, [k], F, G)
    ru, rv, bc = coupled_residuals(spec, [k], U, V, F, G)
    return ModeSolution(int(k), U[0], V[0], float(ru[0]), float(rv[0]), float(bc[0]))
