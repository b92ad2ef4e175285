"""Checkable hypotheses for uniqueness and solvability.

* nondegeneracy: ``|r0 r1| != exp(int_0^1 (Re a + Re d) dx)``;
* dissipativity "plus": for some real ``p, q``
      ess inf [2 Re a - |b|^{2p} - |c|^{2q}] > 0,
      ess inf [2 Re d - |b|^{2(1-p)} - |c|^{2(1-q)}] > 0;
* dissipativity "minus" (``m`` in {0, 1}): with ``L = ln(1 / |r0 r1|)``
      ess inf [-2 Re a - |b/r0|^{2p} - |c/r1|^{2q}] + 2 (1 - m) L > 0,
      ess inf [-2 Re d - |b/r0|^{2(1-p)} - |c/r1|^{2(1-q)}] + 2 m L > 0;
* contraction: the explicit bound on ``||A^{-1} B||`` is below 1.

The existential search over ``(p, q)`` runs on a finite grid followed by
three rounds of local refinement with step halving, kept inside the box
spanned by the grids.  Failing to find a witness does not prove that none
exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConditionInapplicable, NondegeneracyViolation
from .modes import DEGENERACY_FLOOR
from .neumann import contraction_bound
from .piecewise import merge_breakpoints
from .problem import ProblemSpec

DEFAULT_PQ_GRID = np.linspace(-2.0, 2.0, 17)
ESSINF_SAMPLES = 64
REFINE_ROUNDS = 3

UNIQUENESS = "uniqueness+apriori"
EXISTENCE = "existence+neumann"


def check_nondegeneracy(spec: ProblemSpec) -> tuple[bool, float]:
    """Return ``(passed, |g|)`` with ``g = |r0 r1| - exp(int (Re a + Re d))``."""
    growth = np.exp(spec.a.integral().real + spec.d.integral().real)
    gap = abs(abs(spec.r0 * spec.r1) - growth)
    return bool(gap > DEGENERACY_FLOOR * max(1.0, growth)), float(gap)


@dataclass(frozen=True)
class Witness:
    """Best ``(p, q)`` found and the two ess-inf margins there."""

    p: float
    q: float
    margin_1: float
    margin_2: float

    @property
    def margin(self) -> float:
        return min(self.margin_1, self.margin_2)

    @property
    def passed(self) -> bool:
        return self.margin > 0.0

    def to_dict(self) -> dict:
        return {"passed": self.passed, "p": self.p, "q": self.q,
                "margins": [self.margin_1, self.margin_2]}


class _Samples:
    """Coefficient values at Chebyshev points (plus endpoints) of every smooth piece."""

    def __init__(self, spec: ProblemSpec, n: int = ESSINF_SAMPLES):
        bp = merge_breakpoints(spec.a, spec.b, spec.c, spec.d)
        j = np.arange(n)
        cheb = np.cos((2 * j + 1) * np.pi / (2 * n))[::-1]
        ref = np.concatenate([[-1.0], cheb, [1.0]])
        pts = bp[:-1, None] + 0.5 * np.diff(bp)[:, None] * (1.0 + ref[None, :])
        vals = {name: getattr(spec, name).on_cells(bp, pts) for name in "abcd"}
        self.re_a = vals["a"].real
        self.re_d = vals["d"].real
        self.abs_b = np.abs(vals["b"])
        self.abs_c = np.abs(vals["c"])
        self.b_zero = spec.b.is_zero()
        self.c_zero = spec.c.is_zero()


def _power(base: np.ndarray, exponent: float, dropped: bool) -> np.ndarray:
    """``base ** exponent`` with ``0 ** e = 0`` for ``e > 0`` and ``+inf`` for ``e <= 0``."""
    if dropped:
        return np.zeros_like(base)
    out = np.full(base.shape, np.inf)
    pos = base > 0
    out[pos] = base[pos] ** exponent
    if exponent > 0:
        out[~pos] = 0.0
    return out


def coef_plus_margins(spec: ProblemSpec, p: float, q: float, samples=None) -> tuple[float, float]:
    s = samples or _Samples(spec)
    m1 = 2 * s.re_a - _power(s.abs_b, 2 * p, s.b_zero) - _power(s.abs_c, 2 * q, s.c_zero)
    m2 = 2 * s.re_d - _power(s.abs_b, 2 * (1 - p), s.b_zero) - _power(s.abs_c, 2 * (1 - q), s.c_zero)
    return float(m1.min()), float(m2.min())


def coef_minus_margins(spec: ProblemSpec, m: int, p: float, q: float,
                       samples=None) -> tuple[float, float]:
    if m not in (0, 1):
        raise ValueError("m must be 0 or 1")
    if spec.r0 == 0 or spec.r1 == 0:
        raise ConditionInapplicable("dissipativity condition with reflections needs r0 r1 != 0")
    s = samples or _Samples(spec)
    B = s.abs_b / abs(spec.r0)
    C = s.abs_c / abs(spec.r1)
    log_term = np.log(1.0 / abs(spec.r0 * spec.r1))
    m1 = -2 * s.re_a - _power(B, 2 * p, s.b_zero) - _power(C, 2 * q, s.c_zero)
    m2 = -2 * s.re_d - _power(B, 2 * (1 - p), s.b_zero) - _power(C, 2 * (1 - q), s.c_zero)
    return (float(m1.min() + 2 * (1 - m) * log_term),
            float(m2.min() + 2 * m * log_term))


def _search(margins, p_grid, q_grid) -> Witness:
    p_grid = np.sort(np.asarray(p_grid, dtype=float).ravel())
    q_grid = np.sort(np.asarray(q_grid, dtype=float).ravel())
    if p_grid.size == 0 or q_grid.size == 0:
        raise ValueError("(p, q) search grids must be nonempty")

    def evaluate(p, q):
        m1, m2 = margins(p, q)
        return Witness(float(p), float(q), m1, m2)

    best = None
    for p in p_grid:
        for q in q_grid:
            w = evaluate(p, q)
            if best is None or w.margin > best.margin:
                best = w
    spacing = [np.diff(g).min() for g in (p_grid, q_grid) if g.size > 1]
    step = min(spacing) if spacing else 0.25
    for _ in range(REFINE_ROUNDS):
        step /= 2
        cands = [best]
        for dp in (-step, 0.0, step):
            for dq in (-step, 0.0, step):
                p, q = best.p + dp, best.q + dq
                # refinement stays inside the box spanned by the grids
                if (dp or dq) and p_grid[0] <= p <= p_grid[-1] and q_grid[0] <= q <= q_grid[-1]:
                    cands.append(evaluate(p, q))
        best = min(cands, key=lambda w: (-w.margin, w.p, w.q))
    return best


def search_coef_plus(spec: ProblemSpec, p_grid=DEFAULT_PQ_GRID, q_grid=DEFAULT_PQ_GRID) -> Witness:
    s = _Samples(spec)
    return _search(lambda p, q: coef_plus_margins(spec, p, q, s), p_grid, q_grid)


def search_coef_minus(spec: ProblemSpec, m: int, p_grid=DEFAULT_PQ_GRID,
                      q_grid=DEFAULT_PQ_GRID) -> Witness:
    if spec.r0 == 0 or spec.r1 == 0:
        raise ConditionInapplicable("dissipativity condition with reflections needs r0 r1 != 0")
    s = _Samples(spec)
    return _search(lambda p, q: coef_minus_margins(spec, m, p, q, s), p_grid, q_grid)


def check_coef_plus(spec: ProblemSpec, p_grid=DEFAULT_PQ_GRID,
                    q_grid=DEFAULT_PQ_GRID) -> Witness | None:
    """Best witness ``(p, q)`` if the plus-condition holds there, else ``None``."""
    w = search_coef_plus(spec, p_grid, q_grid)
    return w if w.passed else None


def check_coef_minus(spec: ProblemSpec, m: int, p_grid=DEFAULT_PQ_GRID,
                     q_grid=DEFAULT_PQ_GRID) -> Witness | None:
    """As :func:`check_coef_plus` for the reflection-weighted condition with index ``m``.

    Raises :class:`ConditionInapplicable` when ``r0 r1 = 0``.
    """
    w = search_coef_minus(spec, m, p_grid, q_grid)
    return w if w.passed else None


@dataclass(frozen=True)
class CertificateReport:
    nondegenerate: bool
    nondegeneracy_margin: float
    coef_plus: Witness
    coef_minus_m0: Witness | None
    coef_minus_m1: Witness | None
    contraction: float
    reflections_admissible: bool
    reflection_margin: float
    applicable_theorems: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def contraction_passed(self) -> bool:
        return self.contraction < 1.0

    @property
    def dissipative(self) -> bool:
        return any(w is not None and w.passed
                   for w in (self.coef_plus, self.coef_minus_m0, self.coef_minus_m1))

    def to_dict(self) -> dict:
        def wit(w):
            return {"passed": False, "inapplicable": True} if w is None else w.to_dict()

        return {
            "nondegenerate": {"passed": self.nondegenerate, "margin": self.nondegeneracy_margin},
            "coef_plus": wit(self.coef_plus),
            "coef_minus_m0": wit(self.coef_minus_m0),
            "coef_minus_m1": wit(self.coef_minus_m1),
            "contraction": {"passed": self.contraction_passed, "value": self.contraction,
                            "margin": 1.0 - self.contraction},
            "reflections_admissible": {"passed": self.reflections_admissible,
                                       "margin": self.reflection_margin},
            "applicable_theorems": list(self.applicable_theorems),
            "notes": list(self.notes),
        }


def assemble_report(spec: ProblemSpec, p_grid=DEFAULT_PQ_GRID,
                    q_grid=DEFAULT_PQ_GRID) -> CertificateReport:
    """Run every check; failures are recorded in the report, never raised."""
    notes = []
    nondeg, gap = check_nondegeneracy(spec)
    plus = search_coef_plus(spec, p_grid, q_grid)
    try:
        minus0 = search_coef_minus(spec, 0, p_grid, q_grid)
        minus1 = search_coef_minus(spec, 1, p_grid, q_grid)
    except ConditionInapplicable as exc:
        minus0 = minus1 = None
        notes.append(str(exc))
    try:
        contraction = contraction_bound(spec) if nondeg else float("inf")
    except NondegeneracyViolation as exc:
        contraction = float("inf")
        notes.append(str(exc))
    admissible = abs(spec.r0) < 1.0 and abs(spec.r1) < 1.0
    theorems = []
    dissipative = any(w is not None and w.passed for w in (plus, minus0, minus1))
    if admissible and dissipative:
        theorems.append(UNIQUENESS)
    if nondeg and contraction < 1.0:
        theorems.append(EXISTENCE)
    return CertificateReport(
        nondegenerate=nondeg,
        nondegeneracy_margin=gap,
        coef_plus=plus,
        coef_minus_m0=minus0,
        coef_minus_m1=minus1,
        contraction=contraction,
        reflections_admissible=admissible,
        reflection_margin=1.0 - max(abs(spec.r0), abs(spec.r1)),
        applicable_theorems=theorems,
        notes=notes,
    )
