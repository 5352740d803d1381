"""Exception types shared across the package."""


class BicsegError(Exception):
    """Base class for all library errors."""


class InvalidInput(BicsegError):
    """Input violates a documented precondition (shape, finiteness, range)."""


class InsufficientData(BicsegError):
    """Too few timesteps for the requested statistic."""


class SingularCovariance(BicsegError):
    """Covariance factorization failed; expected only when epsilon = 0."""


class EmptyScale(BicsegError):
    """A window scale does not fit the series (2*delta > T), or no scores exist."""


class TooFewPoints(BicsegError):
    """Not enough points to fit the requested mixture model."""


class ParseError(BicsegError):
    """A data file could not be parsed. Carries the offending 1-based line number."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class EmptyDataset(BicsegError):
    """A data file or manifest contained no series."""


class SchemaError(BicsegError):
    """A result document is missing or mistypes a required field."""
