class MatroidError(Exception):
    """Base class for every error raised by matroidflat."""


class InvalidArgumentError(MatroidError, ValueError):
    """A subset, parameter or presentation is malformed."""


class UnsupportedParameterError(InvalidArgumentError):
    pass


class GuardExceeded(MatroidError):
    """An exponential procedure refused to run past its configured cap/budget."""


class AxiomViolation(MatroidError):
    """A rank function failed (R1), (R2) or (R3); ``report`` holds the witness."""

    def __init__(self, report):
        self.report = report
        super().__init__(report.describe())


class FlatFamilyMismatch(MatroidError):
    """A flat list is not the flat family of the matroid it induces."""


class InternalConsistencyError(MatroidError):
    """An invariant that a reduction procedure relies on did not hold."""
