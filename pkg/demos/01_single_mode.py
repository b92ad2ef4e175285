"""
One Fourier mode at a time
==========================

Each time-Fourier mode of the periodic problem is a two-point boundary
value problem in x.  Without coupling (b = c = 0) it is solved in closed
form; here the closed form is compared against a shooting solution of the
same mode problem.
"""

import numpy as np

from hyperperiodic import PiecewiseCoefficient, make_problem
from hyperperiodic.modes import delta_k, delta_lower_bound, mode_green_solve, mode_problem
from hyperperiodic.oracle import oracle_collocation_solve

# two-section damping, one gain section, complex reflections
a = PiecewiseCoefficient.piecewise_constant([0, 0.4, 1], [0.8, -0.3 + 0.5j])
d = PiecewiseCoefficient.piecewise_constant([0, 0.7, 1], [0.2, 1.0])
spec = make_problem(a, 0, 0, d, r0=0.6j, r1=-0.5, period=2 * np.pi, K=8,
                    f={k: (lambda x, k=k: np.cos(k * x)) for k in range(-8, 9)})

# the boundary determinant never drops below its k-independent bound
print("lower bound on |Delta_k|:", delta_lower_bound(spec))
for k in (0, 1, 4, 8):
    print(f"  k = {k}:  |Delta_k| = {abs(delta_k(spec, k)):.6f}")

# closed form against shooting, mode by mode
print("\n  k   ||u_green - u_shoot||   bc residual")
for k in range(-8, 9, 4):
    green = mode_green_solve(mode_problem(spec, k), spec)
    shoot = oracle_collocation_solve(spec, k)
    diff = np.sqrt(spec.grid.l2_sq(green.uk - shoot.uk))
    print(f"{k:3d}   {diff:.2e}               {green.bc_residual:.1e}")

# the explicit solution is linear in the forcing
mp = mode_problem(spec, 3)
twice = mode_green_solve(mode_problem(spec, 3, fk=2 * mp.fk, gk=2 * mp.gk), spec)
once = mode_green_solve(mp, spec)
print("\nlinearity defect:", np.max(np.abs(twice.uk - 2 * once.uk)))
