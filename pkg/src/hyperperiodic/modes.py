"""Per-mode boundary value problems and their explicit solution.

For each Fourier mode ``k`` the decoupled system (``b = c = 0``) reads

    u_k' + (a + i k omega) u_k = f_k,      v_k' - (d + i k omega) v_k = -g_k,
    u_k(0) = r0 v_k(0),                    v_k(1) = r1 u_k(1),

and is solved in closed form by variation of constants with the boundary
determinant ``Delta_k = exp(i k omega + delta(1)) - r0 r1 exp(-i k omega - alpha(1))``,
where ``alpha`` and ``delta`` are the antiderivatives of ``a`` and ``d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre

from .errors import NondegeneracyViolation
from .grid import interpolation_matrix
from .problem import ProblemSpec

DEGENERACY_FLOOR = 1e-12
TOL_BC = 1e-10
TOL_RES = 1e-8
SUBINTERVAL_GAUSS = 16
_CHUNK = 4_000_000


def delta_k(spec: ProblemSpec, k: int) -> complex:
    """Boundary determinant of mode ``k``."""
    return complex(_deltas(spec, np.array([k]))[0])


def _deltas(spec: ProblemSpec, ks) -> np.ndarray:
    kw = 1j * spec.omega * np.asarray(ks, dtype=float)
    return np.exp(kw + spec.delta1) - spec.r0 * spec.r1 * np.exp(-kw - spec.alpha1)


def delta_lower_bound(spec: ProblemSpec) -> float:
    """k-independent lower bound ``|exp(Re delta(1)) - |r0 r1| exp(-Re alpha(1))|`` for ``|Delta_k|``."""
    return abs(np.exp(spec.delta1.real) - abs(spec.r0 * spec.r1) * np.exp(-spec.alpha1.real))


def degeneracy_floor(spec: ProblemSpec) -> float:
    return DEGENERACY_FLOOR * max(1.0, np.exp(spec.delta1.real))


@dataclass(frozen=True, eq=False)
class ModeProblem:
    k: int
    fk: np.ndarray
    gk: np.ndarray
    alpha: np.ndarray
    delta: np.ndarray
    delta_k: complex


@dataclass(frozen=True, eq=False)
class ModeSolution:
    k: int
    uk: np.ndarray
    vk: np.ndarray
    residual_u: float
    residual_v: float
    bc_residual: float


def mode_problem(spec: ProblemSpec, k: int, fk=None, gk=None) -> ModeProblem:
    """Mode-``k`` data; forcing defaults to the spec's ``f_k``, ``g_k``."""
    fk = spec.f.mode(k) if fk is None else np.broadcast_to(np.asarray(fk, complex), spec.grid.shape)
    gk = spec.g.mode(k) if gk is None else np.broadcast_to(np.asarray(gk, complex), spec.grid.shape)
    return ModeProblem(int(k), fk, gk, spec.at_points("alpha"), spec.at_points("delta"),
                       delta_k(spec, k))


@lru_cache(maxsize=None)
def _partial_rule(order: int, sub: int):
    """Sub-points and weights for integrals from a cell's left end to each Lobatto point.

    Returns reference coordinates ``zeta`` (P, sub * n), weights ``W``
    (P, sub * n) such that ``int_{x_L}^{x_j} phi = h * sum_q W[j, q] phi(zeta[j, q])``,
    and the Lobatto interpolation matrix at all ``zeta``.
    """
    from .grid import reference_element

    ref = reference_element(order)
    eta, w = legendre.leggauss(SUBINTERVAL_GAUSS)
    frac = (np.arange(sub)[:, None] + 0.5 * (1.0 + eta[None, :])) / sub
    span = 1.0 + ref.lobatto
    zeta = -1.0 + span[:, None] * frac.ravel()[None, :]
    W = (span[:, None] / (4.0 * sub)) * np.tile(w, sub)[None, :]
    L = interpolation_matrix(ref.lobatto, ref.bary, zeta.ravel())
    return zeta, W, L


def subdivisions(spec: ProblemSpec, k: int) -> int:
    """Oscillation-resolving subcell count: ``max(1, ceil(|k| omega h_max / pi))``."""
    return max(1, int(np.ceil(abs(k) * spec.omega * spec.grid.widths.max() / np.pi)))


def _cumulative(spec, ks, values, sign, primitive, sub):
    """``int_0^x exp(sign (i k omega y + primitive(y))) values_k(y) dy`` at all Lobatto points."""
    grid = spec.grid
    zeta, W, L = _partial_rule(grid.order, sub)
    P = grid.order + 1
    y = grid.map_reference(zeta.ravel())                        # (M, Q)
    prim = primitive.on_cells(grid.nodes, y)                      # (M, Q)
    kw = 1j * spec.omega * np.asarray(ks, float)[:, None, None]
    vals_y = values @ L.T                                         # (nk, M, Q)
    phi = np.exp(sign * (kw * y + prim)) * vals_y
    phi = phi.reshape(phi.shape[:-1] + (P, -1))
    part = np.einsum("...mjq,jq->...mj", phi, W) * grid.widths[:, None]
    totals = part[..., -1]
    offsets = np.cumsum(totals, axis=-1) - totals
    return part + offsets[..., None]


def green_modes(spec: ProblemSpec, ks, F, G):
    """Explicit decoupled solution for several modes at once.

    ``F`` and ``G`` hold nodal values of ``f_k`` and ``g_k`` with shape
    ``(len(ks),) + grid.shape``.  Returns ``(U, V, Delta)``.
    """
    ks = np.asarray(ks, dtype=int)
    F = np.asarray(F, complex)
    G = np.asarray(G, complex)
    deltas = _deltas(spec, ks)
    floor = degeneracy_floor(spec)
    bad = np.abs(deltas) < floor
    if np.any(bad):
        k = int(ks[np.argmax(bad)])
        raise NondegeneracyViolation(
            f"|Delta_{k}| = {abs(deltas[np.argmax(bad)]):.3e} below floor {floor:.1e}: "
            "condition |r0 r1| != exp(int (Re a + Re d)) fails"
        )
    U = np.empty(F.shape, complex)
    V = np.empty(G.shape, complex)
    subs = np.array([subdivisions(spec, k) for k in ks])
    x = spec.grid.points
    al = spec.at_points("alpha")
    de = spec.at_points("delta")
    per_mode = F[0].size * SUBINTERVAL_GAUSS * max(1, subs.max())
    chunk = max(1, _CHUNK // per_mode)
    for s in np.unique(subs):
        idx_all = np.nonzero(subs == s)[0]
        for start in range(0, idx_all.size, chunk):
            idx = idx_all[start:start + chunk]
            kk = ks[idx]
            Fc = _cumulative(spec, kk, F[idx], 1.0, spec.alpha, int(s))
            Gc = _cumulative(spec, kk, G[idx], -1.0, spec.delta, int(s))
            kw = 1j * spec.omega * kk.astype(float)
            F1 = Fc[:, -1, -1]
            G1 = Gc[:, -1, -1]
            w = spec.r1 * np.exp(-kw - spec.alpha1) * F1 + np.exp(kw + spec.delta1) * G1
            v0 = w / deltas[idx]
            kwx = kw[:, None, None] * x
            U[idx] = np.exp(-kwx - al) * (Fc + spec.r0 * v0[:, None, None])
            V[idx] = np.exp(kwx + de) * (v0[:, None, None] - Gc)
    return U, V, deltas


def coupled_residuals(spec: ProblemSpec, ks, U, V, F, G):
    """L^2 residuals of the full coupled mode equations and boundary mismatch.

    Returns arrays ``(res_u, res_v, res_bc)`` over the given modes.
    """
    grid = spec.grid
    ikw = 1j * spec.omega * np.asarray(ks, float)[:, None, None]
    ug, vg = grid.to_gauss(U), grid.to_gauss(V)
    dug, dvg = grid.to_gauss(grid.derivative(U)), grid.to_gauss(grid.derivative(V))
    fg, gg = grid.to_gauss(F), grid.to_gauss(G)
    a, b, c, d = (spec.at_gauss(n) for n in "abcd")
    ru = dug + (a + ikw) * ug + b * vg - fg
    rv = dvg - (d + ikw) * vg - c * ug + gg
    res_u = np.sqrt(grid.integrate_gauss(np.abs(ru) ** 2))
    res_v = np.sqrt(grid.integrate_gauss(np.abs(rv) ** 2))
    bc = np.abs(U[:, 0, 0] - spec.r0 * V[:, 0, 0]) + np.abs(V[:, -1, -1] - spec.r1 * U[:, -1, -1])
    return res_u, res_v, bc


def mode_residual(sol: ModeSolution, mp: ModeProblem, spec: ProblemSpec):
    """``(||eq_u||, ||eq_v||, bc mismatch)`` of a mode solution against the coupled system."""
    ru, rv, bc = coupled_residuals(spec, [mp.k], sol.uk[None], sol.vk[None],
                                   mp.fk[None], mp.gk[None])
    return float(ru[0]), float(rv[0]), float(bc[0])


def _solution(spec, mp, uk, vk) -> ModeSolution:
    ru, rv, bc = coupled_residuals(spec, [mp.k], uk[None], vk[None], mp.fk[None], mp.gk[None])
    return ModeSolution(mp.k, uk, vk, float(ru[0]), float(rv[0]), float(bc[0]))


def mode_green_solve(mp: ModeProblem, spec: ProblemSpec) -> ModeSolution:
    """Solve the decoupled mode-``k`` problem by the explicit variation-of-constants formula.

    Raises
    ------
    NondegeneracyViolation
        If ``|Delta_k|`` is below ``1e-12 * max(1, exp(Re delta(1)))``.
    """
    U, V, _ = green_modes(spec, [mp.k], mp.fk[None], mp.gk[None])
    return _solution(spec, mp, U[0], V[0])
