"""Exception hierarchy shared by every module."""


class FovError(Exception):
    """Base class for all errors raised by fovprod."""


class InvalidMatrix(FovError, ValueError):
    """Input is not a finite square complex matrix (or is malformed JSON)."""


class NonHermitianInput(FovError, ValueError):
    pass


class NonUnitary(FovError, ValueError):
    pass


class ZeroVector(FovError, ValueError):
    pass


class ConvergenceFailure(FovError, ArithmeticError):
    """An iterative eigensolver hit its iteration cap."""


class NotRadialoid(FovError):
    pass


class PeakNotAttained(FovError):
    pass


class NotNormalized(FovError, ValueError):
    pass


class HypothesisNotMet(FovError):
    """A constructive witness was requested outside the construction's hypotheses."""


class Inconclusive(FovError):
    """Every falsification strategy was exhausted without a certified witness."""
