import numpy as np
import pytest

from hyperperiodic import OracleSingular, make_problem
from hyperperiodic.modes import mode_green_solve, mode_problem
from hyperperiodic.oracle import oracle_collocation_solve, oracle_solve_modes, rk6_step

import suites

# frozen from oracle_solve_modes at step_phase 0.05 (agrees with step_phase 0.01 to 2e-15)
COUPLED_REF = {
    0.0: (0.009735450043696274, 0.019470900087392547),
    0.5: (0.3183140140936272, 0.06703590952680286),
    1.0: (0.42872856319927427, 0.2143642815996371),
}


@pytest.mark.parametrize("rhs, y0, exact", [
    (lambda x, y, stage: np.array([y[1], -y[0]]), [0.0, 1.0], np.sin(2.0)),
    (lambda x, y, stage: np.array([np.cos(3 * x) * y[0], 0 * y[1]]), [1.0, 0.0], np.exp(np.sin(6.0) / 3)),
])
def test_rk6_is_sixth_order(rhs, y0, exact):
    errs = []
    for n in (16, 32, 64):
        y = np.array(y0)
        h = 2.0 / n
        for i in range(n):
            y = rk6_step(rhs, i * h, y, h)
        errs.append(abs(y[0] - exact))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(rates > 5.5)


def test_oracle_zero_forcing():
    s = make_problem(a=0.3, b=0.2, c=-0.1, d=0.1, r0=0.4, r1=0.2, K=1)
    U, V = oracle_solve_modes(s, s.ks)
    assert np.all(U == 0) and np.all(V == 0)


def test_oracle_matches_green_when_decoupled():
    s = suites.decoupled_suite()[3]
    for k in (-8, 0, 5):
        sol = mode_green_solve(mode_problem(s, k), s)
        ref = oracle_collocation_solve(s, k)
        assert np.sqrt(s.grid.l2_sq(sol.uk - ref.uk)) < 1e-8
        assert np.sqrt(s.grid.l2_sq(sol.vk - ref.vk)) < 1e-8


def test_single_mode_wrapper_equals_batched():
    s = suites.coupled_suite()[0]
    U, V = oracle_solve_modes(s, s.ks)
    for i, k in enumerate(s.ks[::4]):
        sol = oracle_collocation_solve(s, int(k))
        j = int(k) + s.circle.K
        assert np.allclose(sol.uk, U[j], atol=1e-12)
        assert np.allclose(sol.vk, V[j], atol=1e-12)


def test_oracle_coupled_reference_and_residuals():
    s = make_problem(a=2, d=2, b=0.1, c=0.1, r0=0.5, r1=0.5, K=0, f={0: 1.0})
    sol = oracle_collocation_solve(s, 0)
    for x, (u, v) in COUPLED_REF.items():
        assert s.grid.evaluate(sol.uk, x) == pytest.approx(u, abs=1e-13)
        assert s.grid.evaluate(sol.vk, x) == pytest.approx(v, abs=1e-13)
    assert sol.residual_u < 1e-8 and sol.residual_v < 1e-8 and sol.bc_residual < 1e-10


def test_oracle_singular():
    s = make_problem(r0=1.0, r1=1.0, K=0, f={0: 1.0})
    with pytest.raises(OracleSingular):
        oracle_solve_modes(s, [0])
