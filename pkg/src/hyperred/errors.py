"""Exception hierarchy shared by every layer of the engine."""


class HyperredError(Exception):
    """Base class for all errors raised by hyperred."""


class ZeroDenominator(HyperredError, ZeroDivisionError):
    pass


class PreconditionViolated(HyperredError, ValueError):
    pass


class NoSolution(HyperredError, ValueError):
    pass


class NotWeaklyNormalized(PreconditionViolated):
    pass


class NotDifferentialReduced(PreconditionViolated):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedTower(HyperredError):
    pass


class UnsupportedCase(HyperredError):
    """The input is valid but outside what the decision procedures cover."""


class UnsupportedField(UnsupportedCase):
    pass


class DegreeBoundExceeded(UnsupportedCase):
    """An intermediate polynomial exceeded ``HYPERRED_MAX_DEGREE``."""


class DuplicateGenerator(HyperredError, ValueError):
    pass


class InvariantViolation(HyperredError, AssertionError):
    """An internal consistency check failed; always a bug."""
