class HktError(Exception):
    """Base class for errors raised by hktnil."""


class InvalidLieAlgebra(HktError):
    """Structure constants fail the Jacobi identity or the metric is unusable."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class PreconditionError(HktError):
    """An operation was called on input outside its domain."""


class NotHKT(PreconditionError):
    """The hyperhermitian data does not satisfy the HKT condition."""


class ConsistencyError(HktError):
    """Two routes to the same quantity disagreed.

    Raised when an internal cross-check fails; seeing one means either the
    input is outside the theory's hypotheses or there is a bug.
    """
