"""Time-periodic solutions of 2x2 first-order hyperbolic systems.

    u_t + u_x + a u + b v = f,   v_t - v_x + c u + d v = g,   0 < x < 1,
    u(0, t) = r0 v(0, t),        v(1, t) = r1 u(1, t),

with T-periodicity in t and piecewise polynomial coefficients in x.  Each
Fourier mode in t is solved by an explicit boundary-value formula; the
coupling ``b, c`` is handled by a fixed-point iteration whose convergence
can be certified a priori.
"""

from .conditions import (CertificateReport, Witness, assemble_report, check_coef_minus,
                         check_coef_plus, check_nondegeneracy, coef_minus_margins,
                         coef_plus_margins)
from .document import ProblemDocument, parse_problem
from .errors import (AliasingError, ConditionInapplicable, ConvergenceFailure, GridMismatchError,
                     HyperperiodicError, NoCertificateConvergenceFailure, NondegeneracyViolation,
                     OracleSingular, ProblemParseError, ProblemValidationError)
from .grid import SpatialGrid
from .harness import RunArtifact, RunOptions, manufactured_test, run_solve
from .modes import (ModeProblem, ModeSolution, delta_k, delta_lower_bound, green_modes,
                    mode_green_solve, mode_problem, mode_residual)
from .neumann import SolveReport, apply_Ainv, apply_B, apriori_ratio, contraction_bound, neumann_iterate
from .oracle import oracle_collocation_solve, oracle_solve_modes
from .piecewise import PiecewiseCoefficient
from .problem import ProblemSpec, make_problem
from .spectral import (SpectralField, TimeCircle, analyze, fourier_modes, synthesize,
                       trace_norm, v_norm, w_norm)

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "CertificateReport",
    "ConditionInapplicable",
    "ConvergenceFailure",
    "GridMismatchError",
    "HyperperiodicError",
    "ModeProblem",
    "ModeSolution",
    "NoCertificateConvergenceFailure",
    "NondegeneracyViolation",
    "OracleSingular",
    "PiecewiseCoefficient",
    "ProblemDocument",
    "ProblemParseError",
    "ProblemSpec",
    "ProblemValidationError",
    "RunArtifact",
    "RunOptions",
    "SolveReport",
    "SpatialGrid",
    "SpectralField",
    "TimeCircle",
    "Witness",
    "analyze",
    "apply_Ainv",
    "apply_B",
    "apriori_ratio",
    "assemble_report",
    "check_coef_minus",
    "check_coef_plus",
    "check_nondegeneracy",
    "coef_minus_margins",
    "coef_plus_margins",
    "contraction_bound",
    "delta_k",
    "delta_lower_bound",
    "fourier_modes",
    "green_modes",
    "make_problem",
    "manufactured_test",
    "mode_green_solve",
    "mode_problem",
    "mode_residual",
    "neumann_iterate",
    "oracle_collocation_solve",
    "oracle_solve_modes",
    "parse_problem",
    "run_solve",
    "synthesize",
    "trace_norm",
    "v_norm",
    "w_norm",
]
