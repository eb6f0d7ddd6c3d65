"""Exception types shared across the package."""


class DomainError(Exception):
    """Base class for mathematical-contract violations (exit code 1 in the CLI)."""


class MajorizationFailed(DomainError):
    """A construction required a majorized pair but the precondition fails.

    Carries the verdict so callers can report the violated prefix.
    """

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class NotDoublyStochastic(DomainError):
    pass


class MatchingFailed(DomainError):
    """The residual support graph admits no perfect matching above tolerance."""


class NotOrthogonal(DomainError):
    pass


class NotHermitian(DomainError):
    pass


class NotUnitary(DomainError):
    pass


class NotUnitVector(DomainError):
    pass


class NotTracePreserving(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class SchemaError(Exception):
    """Malformed or invalid serialized data (exit code 2 in the CLI).

    `field` names the offending JSON field when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
