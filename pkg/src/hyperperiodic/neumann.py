"""Coupled solution by fixed-point iteration on ``s = -A^{-1} B s + A^{-1}(f, g)``.

``A`` is the decoupled operator ``(d_t + d_x + a, d_t - d_x + d)`` with the
reflection conditions (inverted mode by mode in :mod:`hyperperiodic.modes`);
``B(u, v) = (b v, c u)`` couples the two waves.  The iteration sums the
Neumann series of ``(I + A^{-1} B)^{-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceFailure, NoCertificateConvergenceFailure, NondegeneracyViolation
from .modes import coupled_residuals, degeneracy_floor, delta_lower_bound, green_modes
from .problem import ProblemSpec
from .spectral import SpectralField, v_norm, w_norm

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200
RATIO_SLACK = 0.05
NOISE_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class SolveReport:
    solution: tuple[SpectralField, SpectralField]
    iterations: int
    contraction_bound: float
    observed_ratio: float
    final_residual: float
    apriori_ratio: float
    forcing_norm: float
    converged: bool
    ratios: tuple = ()
    increments: tuple = ()
    residuals: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.contraction_bound < 1.0

    def scalars(self) -> dict:
        return {
            "iterations": self.iterations,
            "contraction_bound": self.contraction_bound,
            "certified": self.certified,
            "observed_ratio": self.observed_ratio,
            "final_residual": self.final_residual,
            "max_mode_residual": max(
                (float(np.max(self.residuals[n])) for n in ("residual_u", "residual_v")
                 if n in self.residuals), default=0.0),
            "max_bc_residual": float(np.max(self.residuals.get("bc_residual", 0.0))),
            "apriori_ratio": self.apriori_ratio,
            "converged": self.converged,
        }


def apply_Ainv(forcing, spec: ProblemSpec) -> tuple[SpectralField, SpectralField]:
    """Decoupled solve ``A^{-1}(f1, f2)`` for every mode ``|k| <= K``."""
    f1, f2 = forcing
    U, V, _ = green_modes(spec, spec.ks, f1.values, f2.values)
    return f1.with_values(U), f1.with_values(V)


def apply_B(pair, spec: ProblemSpec) -> tuple[SpectralField, SpectralField]:
    """``(b v, c u)``: pointwise in x, so modes are not mixed."""
    u, v = pair
    return (u.with_values(spec.at_points("b") * v.values),
            u.with_values(spec.at_points("c") * u.values))


def contraction_bound(spec: ProblemSpec) -> float:
    """Explicit upper bound for ``||A^{-1} B||`` in V^gamma (certified contraction if < 1)."""
    s = spec.sup_norms
    lb = delta_lower_bound(spec)
    if lb <= degeneracy_floor(spec):
        raise NondegeneracyViolation("contraction bound undefined: boundary determinant bound is 0")
    coupling = s["b"] + s["c"]
    if coupling == 0.0:
        return 0.0
    ad = s["a"] + s["d"]
    r = (1.0 + abs(spec.r0)) * (1.0 + abs(spec.r1))
    return float((1.0 + np.exp(3.0 * ad) * (1.0 + r / lb) * (1.0 + ad)) * coupling)


def _vnorm(vals_u, vals_v, spec):
    f = spec.f
    return v_norm((f.with_values(vals_u), f.with_values(vals_v)), spec.gamma)


def neumann_iterate(spec: ProblemSpec, max_iter: int = DEFAULT_MAX_ITER,
                    tol: float = DEFAULT_TOL) -> SolveReport:
    """Iterate ``s^{n+1} = -A^{-1} B s^n + s^0`` from ``s^0 = A^{-1}(f, g)``.

    Stops once the V^gamma norm of the increment drops below
    ``tol * ||s^0||_{V^gamma}``.  A contraction bound >= 1 does not stop the
    iteration; it only leaves the result uncertified.  Increment ratios are
    recorded only while increments stay above ``1e-12 * ||s^0||``.

    Raises
    ------
    NondegeneracyViolation
        If the decoupled operator is not invertible.
    NoCertificateConvergenceFailure
        If an uncertified problem does not converge within ``max_iter``.
    ConvergenceFailure
        If a certified problem does not converge within ``max_iter``.
    """
    bound = contraction_bound(spec)
    ks = spec.ks
    b = spec.at_points("b")
    c = spec.at_points("c")
    U0, V0, _ = green_modes(spec, ks, spec.f.values, spec.g.values)
    norm0 = _vnorm(U0, V0, spec)
    U, V = U0, V0
    ratios, increments = [], []
    iterations = 0
    converged = False
    coupled = bool(np.any(b) or np.any(c))
    while iterations < max_iter:
        iterations += 1
        if coupled:
            Bu, Bv = green_modes(spec, ks, b * V, c * U)[:2]
            Un, Vn = U0 - Bu, V0 - Bv
        else:
            Un, Vn = U0, V0
        inc = _vnorm(Un - U, Vn - V, spec)
        # ratios of increments at the rounding floor are noise, not contraction
        if increments and inc > NOISE_FLOOR * norm0:
            ratios.append(inc / increments[-1])
        increments.append(inc)
        U, V = Un, Vn
        if inc <= tol * norm0:
            converged = True
            break
        if not np.isfinite(inc):
            break

    res_u, res_v, res_bc = coupled_residuals(spec, ks, U, V, spec.f.values, spec.g.values)
    wk = spec.circle.weights(spec.gamma)
    final_residual = float(np.sqrt(spec.circle.T * np.sum(wk * (res_u ** 2 + res_v ** 2 + res_bc ** 2))))
    u = spec.f.with_values(U)
    v = spec.f.with_values(V)
    fnorm = w_norm(spec.forcing, spec.gamma)
    ratio = v_norm((u, v), spec.gamma) / fnorm if fnorm > 0 else 0.0
    report = SolveReport(
        solution=(u, v),
        iterations=iterations,
        contraction_bound=bound,
        observed_ratio=max(ratios, default=0.0),
        final_residual=final_residual,
        apriori_ratio=ratio,
        forcing_norm=fnorm,
        converged=converged,
        ratios=tuple(ratios),
        increments=tuple(increments),
        residuals={"k": ks.copy(), "residual_u": res_u, "residual_v": res_v, "bc_residual": res_bc},
    )
    if not converged:
        msg = (f"no convergence after {iterations} iterations "
               f"(contraction bound {bound:.3g}, last increment {increments[-1]:.3g})")
        if bound >= 1.0:
            raise NoCertificateConvergenceFailure(msg + "; problem is also uncertified", report)
        raise ConvergenceFailure(msg, report)
    return report


def apriori_ratio(report: SolveReport) -> float:
    """``||(u, v)||_{V^gamma} / ||(f, g)||_{W^gamma}``, or 0 for zero forcing."""
    if report.forcing_norm == 0.0:
        return 0.0
    return report.apriori_ratio
