"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""

import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from hyperperiodic import (SpectralField, TimeCircle, analyze, check_coef_minus, check_coef_plus,
                           check_nondegeneracy, coef_plus_margins, coef_minus_margins,
                           contraction_bound, delta_lower_bound, green_modes, make_problem,
                           manufactured_test, mode_green_solve, mode_problem, neumann_iterate,
                           synthesize, trace_norm, v_norm, w_norm)
from hyperperiodic.conditions import assemble_report, search_coef_plus
from hyperperiodic.document import parse_problem
from hyperperiodic.grid import SpatialGrid
from hyperperiodic.modes import _deltas
from hyperperiodic.oracle import oracle_solve_modes

import suites

ROOT = Path(__file__).resolve().parents[1]
LASER = ROOT / "problems" / "laser_three_section.json"


@pytest.fixture
def report_line(capsys):
    def emit(number, passed, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
    return emit


def _l2(grid, values):
    return np.sqrt(grid.l2_sq(values))


def test_criterion_1_decoupled_oracle_equivalence(report_line):
    specs = suites.decoupled_suite()
    t0 = time.perf_counter()
    worst = 0.0
    for spec in specs:
        # batched form of oracle_collocation_solve (same integrator, all k at once)
        U, V = oracle_solve_modes(spec, spec.ks)
        for i, k in enumerate(spec.ks):
            sol = mode_green_solve(mode_problem(spec, int(k)), spec)
            err = max(_l2(spec.grid, sol.uk - U[i]), _l2(spec.grid, sol.vk - V[i]))
            worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-8 and elapsed < 30.0
    report_line(1, ok, f"{len(specs)} specs, max L2 difference {worst:.2e} (< 1e-8), "
                       f"{elapsed:.1f} s (< 30 s)")
    assert worst < 1e-8
    assert elapsed < 30.0


def test_criterion_2_coupled_neumann_vs_oracle(report_line):
    specs = suites.coupled_suite()
    t0 = time.perf_counter()
    worst = 0.0
    worst_ratio_gap = -np.inf
    for spec in specs:
        bound = contraction_bound(spec)
        assert bound < 0.5
        rep = neumann_iterate(spec)
        U, V = oracle_solve_modes(spec, spec.ks)
        u, v = rep.solution
        for i in range(spec.ks.size):
            err = max(_l2(spec.grid, u.values[i] - U[i]), _l2(spec.grid, v.values[i] - V[i]))
            worst = max(worst, err)
        if rep.ratios:
            worst_ratio_gap = max(worst_ratio_gap, max(rep.ratios) - bound)
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-6 and worst_ratio_gap <= 0.05 and elapsed < 60.0
    report_line(2, ok, f"{len(specs)} specs, max per-mode L2 difference {worst:.2e} (< 1e-6), "
                       f"max(ratio - bound) {worst_ratio_gap:.3f} (<= 0.05), {elapsed:.1f} s (< 60 s)")
    assert worst < 1e-6
    assert worst_ratio_gap <= 0.05
    assert elapsed < 60.0


def test_criterion_3_manufactured_solutions(report_line):
    templates = suites.coupled_suite()
    errors = []
    for seed, spec in enumerate(templates):
        assert contraction_bound(spec) < 1.0
        res = manufactured_test(spec, seed)
        errors.append(res.relative_error)
    worst = max(errors)
    ok = worst < 1e-7
    report_line(3, ok, f"{len(errors)} manufactured problems, max relative V^gamma error {worst:.2e} (< 1e-7)")
    assert worst < 1e-7


def test_criterion_4_determinant_lower_bound(report_line):
    ks = np.arange(-64, 65)
    violations = 0
    checked = 0
    for spec in suites.decoupled_suite() + suites.coupled_suite():
        if not check_nondegeneracy(spec)[0]:
            continue
        lb = delta_lower_bound(spec)
        violations += int(np.sum(np.abs(_deltas(spec, ks)) < lb - 1e-12))
        checked += 1
    ok = violations == 0 and checked == 70
    report_line(4, ok, f"{checked} specs x 129 modes, {violations} violations of |Delta_k| >= lower bound")
    assert checked == 70
    assert violations == 0


def test_criterion_5_uniform_mode_bound(report_line):
    worst = 0.0
    for spec in suites.decoupled_suite():
        big = make_problem(spec.a, spec.b, spec.c, spec.d, spec.r0, spec.r1,
                           period=spec.circle.T, K=64)
        grid = big.grid
        ks = np.arange(0, 65)
        # the same spatial profile in every mode, normalised to ||f_k|| + ||g_k|| = 1
        x = grid.points
        fk = (1.0 + x - 2.0 * x ** 2) * (x < 0.6) + 0.5j
        gk = np.cos(3.0 * x) - 0.25j * x
        norm = _l2(grid, fk) + _l2(grid, gk)
        F = np.broadcast_to(fk / norm, (ks.size,) + grid.shape)
        G = np.broadcast_to(gk / norm, (ks.size,) + grid.shape)
        U, V, _ = green_modes(big, ks, F, G)
        sup = np.max(np.abs(U) + np.abs(V), axis=(1, 2))
        worst = max(worst, sup.max() / sup[:9].max())
    ok = worst <= 1.1
    report_line(5, ok, f"max_k sup|u_k|+|v_k| / max_(k<=8) = {worst:.4f} (<= 1.1) over 50 specs")
    assert worst <= 1.1


def _smooth_forcing(spec_args, K, N=64):
    a, b, c, d, r0, r1 = spec_args
    spec = make_problem(a, b, c, d, r0, r1, K=K)
    grid, circle = spec.grid, spec.circle
    t = circle.T * np.arange(N) / N
    x = grid.points[..., None]
    fs = np.exp(np.cos(circle.omega * t)) * (1.0 + x) + 0.3j * np.sin(2 * circle.omega * t) * x
    gs = np.exp(-x) * np.cos(circle.omega * t + 0.4) ** 2
    return spec.with_forcing(analyze(fs, circle, grid), analyze(gs, circle, grid))


def test_criterion_6_apriori_ratio_stability(report_line):
    homog, trunc = 0.0, 0.0
    for args in suites.dissipative_suite():
        spec = _smooth_forcing(args, K=8)
        assert check_coef_plus(spec) is not None
        r = neumann_iterate(spec, tol=1e-13).apriori_ratio
        assert np.isfinite(r) and r > 0
        scaled = spec.with_forcing(spec.f * 1e3, spec.g * 1e3)
        r_scaled = neumann_iterate(scaled, tol=1e-13).apriori_ratio
        r_double = neumann_iterate(_smooth_forcing(args, K=16), tol=1e-13).apriori_ratio
        homog = max(homog, abs(r_scaled - r) / r)
        trunc = max(trunc, abs(r_double - r) / r)
    ok = homog < 1e-9 and trunc < 0.05
    report_line(6, ok, f"10 specs: scaling by 1e3 changes ratio by {homog:.1e} (< 1e-9), "
                       f"doubling K by {100 * trunc:.2f}% (< 5%)")
    assert homog < 1e-9
    assert trunc < 0.05


def test_criterion_7_spectral_identities(report_line):
    checks = {}
    # Parseval round trip on a trigonometric polynomial of degree K
    circle = TimeCircle(2.0, 5)
    grid = SpatialGrid.uniform(4, order=8)
    N = 2 * circle.K + 1
    t = circle.T * np.arange(N) / N
    rng = np.random.default_rng(7)
    coef = rng.standard_normal((2 * circle.K + 1,)) + 1j * rng.standard_normal(2 * circle.K + 1)
    x = grid.points[..., None]
    samples = sum(coef[j] * np.exp(1j * k * circle.omega * t) * (1 + x) ** (j % 3)
                  for j, k in enumerate(circle.ks))
    back = np.moveaxis(synthesize(analyze(samples, circle, grid), t), 0, -1)
    checks["parseval round trip"] = np.max(np.abs(back - samples)) / np.max(np.abs(samples))

    def field(circle, grid, modes):
        return SpectralField.from_modes(circle, grid, modes)

    g8 = SpatialGrid.uniform(4, order=8)
    c2pi = TimeCircle(2 * np.pi, 3)
    c1 = TimeCircle(1.0, 3)
    zero = field(c1, g8, {})
    checks["w_norm zero"] = w_norm((zero, zero), 1.3)
    checks["w_norm constant, T=2pi"] = abs(w_norm((field(c2pi, g8, {0: 1.0}), field(c2pi, g8, {})), 0.7)
                                           - np.sqrt(2 * np.pi))
    checks["w_norm u_1=1, gamma=2"] = abs(w_norm((field(c1, g8, {1: 1.0}), zero), 2.0) - 2.0)
    checks["v_norm zero"] = v_norm((zero, zero), 2.0)
    checks["v_norm u_0=x"] = abs(v_norm((field(c1, g8, {0: lambda x: x}), zero), 0.0) - np.sqrt(4 / 3))
    # hand value: |u_1|^2 + |i omega u_1|^2 = 1 + omega^2 (the weight is 1 at gamma = 0)
    checks["v_norm u_1=1"] = abs(v_norm((field(c1, g8, {1: 1.0}), zero), 0.0) ** 2
                                 - (1 + (2 * np.pi) ** 2)) / (1 + (2 * np.pi) ** 2)
    checks["trace_norm zero"] = trace_norm(zero, 0.3, 2.0)
    checks["trace_norm u_0=x at 1"] = abs(trace_norm(field(c1, g8, {0: lambda x: x}), 1.0, 1.0) - 1.0)
    checks["trace_norm u_1=x at 1/2"] = abs(trace_norm(field(c1, g8, {1: lambda x: x}), 0.5, 2.0)
                                            - np.sqrt(0.5))
    bad = {k: v for k, v in checks.items() if not v < 1e-12}
    report_line(7, not bad, f"{len(checks)} identities, worst {max(checks.values()):.1e} (< 1e-12)"
                            + (f"; failing: {sorted(bad)}" if bad else ""))
    assert not bad


def _spec(a=0.0, b=0.0, c=0.0, d=0.0, r0=0.0, r1=0.0):
    return make_problem(a, b, c, d, r0, r1, K=0)


def test_criterion_8_condition_ground_truth(report_line):
    results = {}

    ok, margin = check_nondegeneracy(_spec(r0=0.5, r1=0.5))
    results["nondegeneracy pass 0.75"] = ok and margin == 0.75
    ok, margin = check_nondegeneracy(_spec(r0=1, r1=1))
    results["nondegeneracy equality"] = (not ok) and margin == 0.0
    ok, margin = check_nondegeneracy(_spec(a=1.0, r0=np.e, r1=1.0))
    results["nondegeneracy |r0 r1| = e"] = (not ok) and margin <= 1e-14

    spec = _spec(a=2, d=2, b=1, c=1)
    results["plus (1/2,1/2) margins (2,2)"] = coef_plus_margins(spec, 0.5, 0.5) == (2.0, 2.0)
    w = check_coef_plus(spec)
    results["plus a=d=2,b=c=1 passes"] = w is not None and w.margin == 2.0
    spec = _spec(a=0, d=0, b=1, c=1)
    results["plus a=d=0,b=c=1 fails <= -2"] = (check_coef_plus(spec) is None
                                               and search_coef_plus(spec).margin == -2.0)
    # a=2, d=1/2, b=1, c=1/2: second margin is -(1/2)^(2(1-q)) < 0 for every q.
    # Closed-form supremum over (p, q): y^2 + 12 y - 4 = 0 with y = 4^q.
    spec = _spec(a=2, d=0.5, b=1, c=0.5)
    y = -6 + np.sqrt(40)
    sup_margin = -y / 4
    grid_best = max(min(3 - 4.0 ** (-q), -(4.0 ** (q - 1))) for q in np.linspace(-2, 2, 17))
    w = search_coef_plus(spec)
    results["plus a=2,d=1/2,b=1,c=1/2 per grid oracle"] = (
        check_coef_plus(spec) is None and grid_best <= w.margin <= sup_margin)

    spec = _spec(a=-2, d=-2, r0=0.5, r1=0.5)
    m1, m2 = coef_minus_margins(spec, 0, 0.3, -0.7)
    results["minus m=0 margins (4+2ln4, 4)"] = (abs(m1 - (4 + 2 * np.log(4))) < 1e-14
                                                and abs(m2 - 4.0) < 1e-14
                                                and check_coef_minus(spec, 0) is not None)
    spec = _spec(r0=1, r1=1)
    m1, m2 = coef_minus_margins(spec, 0, 0.5, 0.5)
    results["minus boundary margins 0"] = (abs(m1) <= 1e-14 and abs(m2) <= 1e-14
                                           and check_coef_minus(spec, 0) is None
                                           and check_coef_minus(spec, 1) is None)
    try:
        check_coef_minus(_spec(r0=0.5, r1=0.0), 0)
        results["minus r1=0 inapplicable"] = False
    except Exception as exc:  # noqa: BLE001
        results["minus r1=0 inapplicable"] = type(exc).__name__ == "ConditionInapplicable"

    rep = assemble_report(_spec(a=2, d=2, b=0.1, c=0.1, r0=0.5, r1=0.5))
    # the contraction bound here is ~2.1e5 (hand formula), so only uniqueness applies
    results["report a=d=2,b=c=1/10"] = (rep.applicable_theorems == ["uniqueness+apriori"]
                                        and abs(rep.contraction - 212542.51201943) < 1e-4)
    rep = assemble_report(_spec(a=0.3, d=-0.1, r0=0.5, r1=0.5))
    results["report b=c=0 existence"] = "existence+neumann" in rep.applicable_theorems and rep.contraction == 0
    rep = assemble_report(_spec(a=5, d=5, r0=2.0, r1=0.1))
    results["report |r0|=2 no uniqueness"] = "uniqueness+apriori" not in rep.applicable_theorems

    bad = sorted(k for k, v in results.items() if not v)
    report_line(8, not bad, f"{len(results)} worked examples reproduced"
                            + (f"; failing: {bad}" if bad else ""))
    assert not bad


def test_criterion_9_cli_end_to_end(report_line, tmp_path):
    outs = []
    for run in range(2):
        out = tmp_path / f"run{run}"
        proc = subprocess.run([sys.executable, "-m", "hyperperiodic", "--problem", str(LASER),
                               "--out", str(out)], capture_output=True, text=True)
        outs.append((proc, out))
    proc, out = outs[0]
    report = json.loads((out / "report.json").read_text())
    residual = report["solve"]["final_residual"]
    headers = {name: (out / name).read_text().splitlines()[0] for name in ("modes.csv", "residuals.csv")}
    headers_ok = (headers["modes.csv"] == "k,x,re_u,im_u,re_v,im_v"
                  and headers["residuals.csv"] == "k,residual_u,residual_v,bc_residual,abs_delta_k"
                  and not (out / "synth.csv").exists())
    stable = all((outs[0][1] / n).read_bytes() == (outs[1][1] / n).read_bytes()
                 for n in ("modes.csv", "residuals.csv", "report.json"))

    # oracle reference for the same document
    spec = parse_problem(LASER)
    U, V = oracle_solve_modes(spec, spec.ks)
    rows = np.loadtxt(out / "modes.csv", delimiter=",", skiprows=1)
    diff = 0.0
    for i, k in enumerate(spec.ks):
        sel = rows[:, 0] == k
        xs = rows[sel, 1]
        u_ref = np.array([spec.grid.evaluate(U[i], x) for x in xs])
        v_ref = np.array([spec.grid.evaluate(V[i], x) for x in xs])
        diff = max(diff, np.max(np.abs(rows[sel, 2] + 1j * rows[sel, 3] - u_ref)),
                   np.max(np.abs(rows[sel, 4] + 1j * rows[sel, 5] - v_ref)))

    ok = (proc.returncode == 0 and report["status"] == "certified-converged" and residual < 1e-8
          and headers_ok and stable and diff < 1e-8)
    report_line(9, ok, f"exit {proc.returncode}, status {report['status']}, residual {residual:.2e} "
                       f"(< 1e-8), headers {'ok' if headers_ok else 'WRONG'}, "
                       f"byte-stable {stable}, max |CLI - oracle| {diff:.1e}")
    assert proc.returncode == 0, proc.stderr
    assert report["status"] == "certified-converged"
    assert residual < 1e-8
    assert headers_ok
    assert stable
    assert diff < 1e-8
