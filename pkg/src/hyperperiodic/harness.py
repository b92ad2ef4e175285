"""Run orchestration, result files and manufactured-solution checks."""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as P

from .conditions import assemble_report
from .errors import (ConvergenceFailure, NoCertificateConvergenceFailure,
                     NondegeneracyViolation, OracleSingular)
from .modes import _deltas, coupled_residuals
from .neumann import DEFAULT_MAX_ITER, DEFAULT_TOL, neumann_iterate
from .oracle import oracle_solve_modes
from .problem import ProblemSpec
from .spectral import SpectralField, synthesize, v_norm, w_norm

log = logging.getLogger(__name__)

REPORT_SCHEMA = "hyperperiodic/report/v1"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_DIVERGED = 4
EXIT_INTERNAL = 5

MODES_HEADER = ["k", "x", "re_u", "im_u", "re_v", "im_v"]
RESIDUALS_HEADER = ["k", "residual_u", "residual_v", "bc_residual", "abs_delta_k"]
SYNTH_HEADER = ["t", "x", "re_u", "im_u", "re_v", "im_v"]


@dataclass
class RunOptions:
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    tol_res: float = 1e-8
    tol_bc: float = 1e-10
    emit_samples: bool = False
    check_only: bool = False
    oracle: bool = False
    sample_times: int | None = None


@dataclass
class RunArtifact:
    out_dir: Path
    status: str
    exit_code: int
    report: dict = field(default_factory=dict)

    @property
    def files(self) -> list[Path]:
        return sorted(p for p in self.out_dir.iterdir() if p.is_file())


def _num(x):
    """JSON-safe float: non-finite values become strings."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    return x


def _fmt(x: float) -> str:
    return repr(float(x))


def unique_points(spec: ProblemSpec):
    """Grid points without duplicated cell interfaces, and their flat indices."""
    M, Pn = spec.grid.shape
    idx = [(m, j) for m in range(M) for j in range(Pn - 1)] + [(M - 1, Pn - 1)]
    cells = np.array([i for i, _ in idx])
    nodes = np.array([j for _, j in idx])
    return spec.grid.points[cells, nodes], cells, nodes


def write_modes_csv(path, spec, U, V):
    x, ci, ni = unique_points(spec)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MODES_HEADER)
        for row, k in enumerate(spec.ks):
            u = U[row][ci, ni]
            v = V[row][ci, ni]
            for xi, ui, vi in zip(x, u, v):
                w.writerow([int(k), _fmt(xi), _fmt(ui.real), _fmt(ui.imag),
                            _fmt(vi.real), _fmt(vi.imag)])


def write_residuals_csv(path, spec, res_u, res_v, res_bc):
    deltas = np.abs(_deltas(spec, spec.ks))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESIDUALS_HEADER)
        for i, k in enumerate(spec.ks):
            w.writerow([int(k), _fmt(res_u[i]), _fmt(res_v[i]), _fmt(res_bc[i]), _fmt(deltas[i])])


def write_synth_csv(path, spec, u: SpectralField, v: SpectralField, n_times: int):
    times = spec.circle.T * np.arange(n_times) / n_times
    su = synthesize(u, times)
    sv = synthesize(v, times)
    x, ci, ni = unique_points(spec)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SYNTH_HEADER)
        for it, t in enumerate(times):
            uu = su[it][ci, ni]
            vv = sv[it][ci, ni]
            for xi, ui, vi in zip(x, uu, vv):
                w.writerow([_fmt(t), _fmt(xi), _fmt(ui.real), _fmt(ui.imag),
                            _fmt(vi.real), _fmt(vi.imag)])


def _problem_summary(spec: ProblemSpec) -> dict:
    return {"period": spec.circle.T, "truncation": spec.circle.K, "gamma": spec.gamma,
            "r0": [spec.r0.real, spec.r0.imag], "r1": [spec.r1.real, spec.r1.imag],
            "grid_cells": spec.grid.cells, "grid_order": spec.grid.order}


def write_report(out_dir: Path, report: dict):
    (out_dir / "report.json").write_text(json.dumps(_num(report), indent=2, sort_keys=True) + "\n")


def run_solve(spec: ProblemSpec, out_dir, options: RunOptions | None = None) -> RunArtifact:
    """Check conditions, solve, and write ``report.json`` plus CSV tables to ``out_dir``.

    ``report.json`` is written on every path, with ``status`` one of
    ``certified-converged``, ``uncertified-converged``, ``oracle``,
    ``check-only``, ``degenerate``, ``uncertified-diverged``,
    ``not-converged`` or ``internal-error``.
    """
    options = options or RunOptions()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {"schema": REPORT_SCHEMA, "problem": _problem_summary(spec),
              "options": {"tol": options.tol, "max_iter": options.max_iter,
                          "tol_res": options.tol_res, "tol_bc": options.tol_bc,
                          "check_only": options.check_only, "oracle": options.oracle,
                          "emit_samples": options.emit_samples},
              "certificate": None, "solve": None, "error": None}

    def finish(status, code):
        report["status"] = status
        report["exit_code"] = code
        write_report(out_dir, report)
        log.info("run finished: %s (exit %d)", status, code)
        return RunArtifact(out_dir, status, code, report)

    try:
        cert = assemble_report(spec)
        report["certificate"] = cert.to_dict()
        if not cert.nondegenerate:
            report["error"] = "nondegeneracy condition fails: |r0 r1| = exp(int (Re a + Re d))"
            return finish("degenerate", EXIT_DEGENERATE)
        if options.check_only:
            return finish("check-only", EXIT_OK)

        if options.oracle:
            U, V = oracle_solve_modes(spec, spec.ks)
            u, v = spec.f.with_values(U), spec.f.with_values(V)
            status = "oracle"
            scalars = {"iterations": 0, "contraction_bound": cert.contraction,
                       "certified": cert.contraction_passed, "converged": True}
        else:
            rep = neumann_iterate(spec, max_iter=options.max_iter, tol=options.tol)
            u, v = rep.solution
            U, V = u.values, v.values
            status = "certified-converged" if rep.certified else "uncertified-converged"
            scalars = rep.scalars()
            scalars["ratios"] = list(rep.ratios)

        res_u, res_v, res_bc = coupled_residuals(spec, spec.ks, U, V, spec.f.values, spec.g.values)
        wk = spec.circle.weights(spec.gamma)
        scalars["final_residual"] = float(np.sqrt(
            spec.circle.T * np.sum(wk * (res_u ** 2 + res_v ** 2 + res_bc ** 2))))
        scalars["max_mode_residual"] = float(max(res_u.max(), res_v.max()))
        scalars["max_bc_residual"] = float(res_bc.max())
        scalars["residuals_within_tolerance"] = bool(
            scalars["max_mode_residual"] < options.tol_res and scalars["max_bc_residual"] < options.tol_bc)
        fnorm = w_norm(spec.forcing, spec.gamma)
        scalars["forcing_w_norm"] = fnorm
        scalars["solution_v_norm"] = v_norm((u, v), spec.gamma)
        scalars["apriori_ratio"] = scalars["solution_v_norm"] / fnorm if fnorm > 0 else 0.0
        report["solve"] = scalars

        write_modes_csv(out_dir / "modes.csv", spec, U, V)
        write_residuals_csv(out_dir / "residuals.csv", spec, res_u, res_v, res_bc)
        synth = out_dir / "synth.csv"
        if options.emit_samples:
            n_t = options.sample_times or max(16, 4 * spec.circle.K + 4)
            write_synth_csv(synth, spec, u, v, n_t)
        elif synth.exists():
            synth.unlink()
        return finish(status, EXIT_OK)
    except NondegeneracyViolation as exc:
        report["error"] = str(exc)
        return finish("degenerate", EXIT_DEGENERATE)
    except NoCertificateConvergenceFailure as exc:
        report["error"] = str(exc)
        if exc.report is not None:
            report["solve"] = exc.report.scalars()
        return finish("uncertified-diverged", EXIT_DIVERGED)
    except ConvergenceFailure as exc:
        report["error"] = str(exc)
        if exc.report is not None:
            report["solve"] = exc.report.scalars()
        return finish("not-converged", EXIT_DIVERGED)
    except OracleSingular as exc:
        report["error"] = str(exc)
        return finish("internal-error", EXIT_INTERNAL)
    except Exception as exc:  # noqa: BLE001 - every failure must leave a report
        log.exception("internal error")
        report["error"] = f"{type(exc).__name__}: {exc}"
        return finish("internal-error", EXIT_INTERNAL)


# -- manufactured solutions ----------------------------------------------


@dataclass(frozen=True)
class ManufacturedResult:
    passed: bool
    relative_error: float
    error_norm: float
    truth_norm: float
    iterations: int
    message: str = ""


def manufactured_truth(spec: ProblemSpec, rng: np.random.Generator, degree: int = 3,
                       amplitude: float = 1.0):
    """Random polynomial mode pairs satisfying both reflection conditions exactly.

    Returns nodal arrays ``(U, V, F, G)`` where ``F, G`` are obtained by
    applying the full mode operator to the truth.
    """
    grid = spec.grid
    x = grid.points
    ks = spec.ks
    U = np.zeros((ks.size,) + grid.shape, complex)
    V = np.zeros_like(U)
    F = np.zeros_like(U)
    G = np.zeros_like(U)
    a, b, c, d = (spec.at_points(n) for n in "abcd")
    for i, k in enumerate(ks):
        scale = amplitude / (1.0 + k * k)
        pv = scale * (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))
        pu = scale * (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))
        pu[0] = spec.r0 * pv[0]
        # shift v by a multiple of x: keeps v(0), fixes v(1) = r1 u(1)
        pv[1] += spec.r1 * P.polyval(1.0, pu) - P.polyval(1.0, pv)
        u = P.polyval(x, pu)
        v = P.polyval(x, pv)
        du = P.polyval(x, P.polyder(pu))
        dv = P.polyval(x, P.polyder(pv))
        ikw = 1j * k * spec.omega
        U[i], V[i] = u, v
        F[i] = du + (a + ikw) * u + b * v
        G[i] = -dv + (d + ikw) * v + c * u
    return U, V, F, G


def manufactured_test(spec_template: ProblemSpec, seed: int, tol_mms: float = 1e-7,
                      degree: int = 3, amplitude: float = 1.0,
                      tol: float = 1e-13, max_iter: int = DEFAULT_MAX_ITER) -> ManufacturedResult:
    """Recover a random exact solution from its manufactured forcing.

    Passes when ``||error||_{V^gamma} < tol_mms * ||truth||_{V^gamma}`` (or
    ``< tol_mms`` absolutely for a zero truth).
    """
    rng = np.random.default_rng(seed)
    spec = spec_template
    U, V, F, G = manufactured_truth(spec, rng, degree, amplitude)
    spec = spec.with_forcing(spec.f.with_values(F), spec.f.with_values(G))
    try:
        rep = neumann_iterate(spec, max_iter=max_iter, tol=tol)
    except (ConvergenceFailure, NondegeneracyViolation) as exc:
        return ManufacturedResult(False, float("inf"), float("inf"), float("nan"), 0, str(exc))
    u, v = rep.solution
    truth = (u.with_values(U), u.with_values(V))
    err = v_norm((u - truth[0], v - truth[1]), spec.gamma)
    tn = v_norm(truth, spec.gamma)
    rel = err / tn if tn > 0 else err
    return ManufacturedResult(bool(rel < tol_mms), rel, err, tn, rep.iterations)
