"""Seeded random problem families shared by the unit and acceptance tests."""

from functools import lru_cache

import numpy as np

from hyperperiodic import PiecewiseCoefficient, contraction_bound, delta_lower_bound, make_problem


def random_breakpoints(rng, max_pieces=4):
    n = int(rng.integers(1, max_pieces + 1))
    inner = np.sort(rng.choice(np.arange(1, 20), size=n - 1, replace=False)) / 20.0
    return np.concatenate([[0.0], inner, [1.0]])


def random_pc(rng, scale, imag=0.3, max_pieces=4):
    bp = random_breakpoints(rng, max_pieces)
    vals = scale * (rng.uniform(-1, 1, bp.size - 1) + 1j * imag * rng.uniform(-1, 1, bp.size - 1))
    return PiecewiseCoefficient.piecewise_constant(bp, vals)


def random_reflection(rng, rmax):
    return rmax * rng.uniform(0, 1) * np.exp(2j * np.pi * rng.uniform())


def random_forcing(rng, K, active=None):
    """Random cubic mode functions, amplitude decaying like 1/(1+k^2)."""
    active = range(-K, K + 1) if active is None else active
    f, g = {}, {}
    for k in active:
        amp = 1.0 / (1.0 + k * k)
        f[k] = np.polynomial.Polynomial(amp * (rng.standard_normal(4) + 1j * rng.standard_normal(4)))
        g[k] = np.polynomial.Polynomial(amp * (rng.standard_normal(4) + 1j * rng.standard_normal(4)))
    return f, g


@lru_cache(maxsize=None)
def decoupled_suite(n=50, K=8, period=2 * np.pi, seed=1001):
    """``b = c = 0``, piecewise-constant ``a, d``, ``|r0|, |r1| <= 0.9``, lower bound > 0.1."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        a = random_pc(rng, 1.5)
        d = random_pc(rng, 1.5)
        r0 = random_reflection(rng, 0.9)
        r1 = random_reflection(rng, 0.9)
        f, g = random_forcing(rng, K)
        spec = make_problem(a, 0.0, 0.0, d, r0, r1, period=period, K=K, f=f, g=g)
        if delta_lower_bound(spec) > 0.1:
            out.append(spec)
    return tuple(out)


@lru_cache(maxsize=None)
def coupled_suite(n=20, K=8, period=2 * np.pi, seed=2002):
    """Coupled specs rescaled so that the contraction bound lies in (0.05, 0.45)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        a = random_pc(rng, 0.25)
        d = random_pc(rng, 0.25)
        b = random_pc(rng, 1.0, imag=1.0)
        c = random_pc(rng, 1.0, imag=1.0)
        r0 = random_reflection(rng, 0.6)
        r1 = random_reflection(rng, 0.6)
        probe = make_problem(a, b, c, d, r0, r1, period=period, K=0)
        if delta_lower_bound(probe) <= 0.1:
            continue
        target = rng.uniform(0.05, 0.45)
        s = target / contraction_bound(probe)
        b, c = b.scaled(s), c.scaled(s)
        f, g = random_forcing(rng, K)
        spec = make_problem(a, b, c, d, r0, r1, period=period, K=K, f=f, g=g)
        out.append(spec)
    return tuple(out)


@lru_cache(maxsize=None)
def dissipative_suite(n=10, K=8, seed=3003):
    """Specs with ``Re a, Re d`` large enough for the plus-condition, weak coupling."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        a = random_pc(rng, 0.5).scaled(1.0)
        a = PiecewiseCoefficient(a.breakpoints, a.coeffs + 1.2)
        d = random_pc(rng, 0.5)
        d = PiecewiseCoefficient(d.breakpoints, d.coeffs + 1.2)
        b = random_pc(rng, 0.2, imag=1.0)
        c = random_pc(rng, 0.2, imag=1.0)
        r0 = random_reflection(rng, 0.8)
        r1 = random_reflection(rng, 0.8)
        out.append((a, b, c, d, r0, r1))
    return tuple(out)
