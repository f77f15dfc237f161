"""Exception hierarchy.

Input problems derive from :class:`InvalidInput` (CLI exit code 2); broken
internal invariants raise :class:`InternalInvariantViolation` (exit code 3).
"""


class ActuatorDesignError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(ActuatorDesignError, ValueError):
    pass


class EmptyInput(InvalidInput):
    pass


class NonPositiveEigenvalue(InvalidInput):
    pass


class DuplicateEigenvalue(InvalidInput):
    pass


class NotSymmetric(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class DimensionTooLarge(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class NotUnitVector(InvalidInput):
    pass


class ZeroEntryActuator(InvalidInput):
    pass


class SingularGramian(InvalidInput):
    pass


class UnsupportedDimension(InvalidInput):
    pass


class SpectralRatioTooLarge(InvalidInput):
    pass


class InvalidProblem(InvalidInput):
    """Malformed problem file."""


class InternalInvariantViolation(ActuatorDesignError, RuntimeError):
    """A mathematically guaranteed property failed; indicates a bug."""


class NotConverged(ActuatorDesignError, RuntimeError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class HorizonTooShort(ActuatorDesignError, RuntimeError):
    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory
