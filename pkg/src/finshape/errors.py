"""Exception hierarchy. The CLI maps each family to an exit code."""


class FinShapeError(Exception):
    exit_code = 1


class InputError(FinShapeError, ValueError):
    """Malformed input, unknown ids, bad configuration."""

    exit_code = 2


class ScheduleError(InputError):
    pass


class CapacityError(FinShapeError):
    """A configured size cap would be exceeded."""

    exit_code = 2


class ConstructionError(FinShapeError):
    exit_code = 3


class WellDefinednessError(ConstructionError):
    pass


class ClosureError(InputError):
    pass


class NotMonotoneError(InputError):
    """Raised by validate_monotone; ``violations`` lists offending (x, y) pairs."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class VerificationFailure(FinShapeError):
    exit_code = 4


class TieWarning(UserWarning):
    """A floating-point distance fell within tolerance of a strict threshold."""
