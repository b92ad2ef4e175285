"""Exception hierarchy for the solver pipeline."""


class HyperperiodicError(Exception):
    """Base class for all errors raised by this package."""


class AliasingError(HyperperiodicError, ValueError):
    """Too few time samples for the requested mode truncation."""


class GridMismatchError(HyperperiodicError, ValueError):
    """Fields defined on different spatial grids or time circles were combined."""


class NondegeneracyViolation(HyperperiodicError):
    """|r0 r1| equals exp(int_0^1 (Re a + Re d) dx) up to the floating point floor.

    Every per-mode boundary determinant may vanish, so the decoupled
    operator is not invertible.
    """


class OracleSingular(HyperperiodicError):
    """The shooting matrix of the coupled mode problem is singular."""


class ConvergenceFailure(HyperperiodicError):
    """The fixed point iteration did not reach its tolerance."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoCertificateConvergenceFailure(ConvergenceFailure):
    """Non-convergence on a problem whose contraction bound is >= 1."""


class ConditionInapplicable(HyperperiodicError):
    """A dissipativity condition cannot be evaluated (e.g. r0 r1 = 0)."""


class ProblemParseError(HyperperiodicError, ValueError):
    """Malformed problem document.

    ``pointer`` is a JSON pointer to the offending field (``""`` for the
    document root).
    """

    def __init__(self, message, pointer=""):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


class ProblemValidationError(ProblemParseError):
    """Well-formed document describing an inconsistent problem."""
