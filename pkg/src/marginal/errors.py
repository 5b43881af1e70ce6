"""Exception hierarchy shared by every module."""


class MarginalError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(MarginalError, ValueError):
    """Vectors or sets whose dimensions do not line up."""


class MembershipError(MarginalError, ValueError):
    """A point was required to lie in a set and does not."""


class QualificationError(MarginalError):
    """A constraint qualification needed by a calculus rule fails."""


class SlaterError(QualificationError):
    """No point satisfies the strict inequalities of a Slater-type condition."""


class NotOptimalError(MarginalError, ValueError):
    """The anchor point is not a solution of the program at the parameter."""


class ParseError(MarginalError, ValueError):
    """Malformed problem file or rational literal."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class EngineError(MarginalError, RuntimeError):
    """Two computation routes disagreed; this indicates a bug, not bad input."""


class OracleError(EngineError):
    """The brute-force oracle hit its safety cap."""


class HypothesisWarning(UserWarning):
    """A qualification condition failed; the computed sets are only one-sided bounds."""
