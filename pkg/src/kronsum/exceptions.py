"""Exception types raised by kronsum."""


class KronsumError(Exception):
    """Base class for all kronsum errors."""


class ConstraintViolation(KronsumError, ValueError):
    """A pair or parameter set does not satisfy the trace/norm constraints.

    ``residuals`` holds the offending ``(trace_A, trace_B, norm)`` values
    when they are known.
    """

    def __init__(self, msg, residuals=None):
        super().__init__(msg)
        self.residuals = residuals


class DegenerateInputError(KronsumError, ValueError):
    """Input cannot be normalized (e.g. both matrices are multiples of I)."""


class NotHermitianError(KronsumError, ValueError):
    """A matrix expected to be Hermitian is not, within tolerance."""


class NotUnitaryError(KronsumError, ValueError):
    pass


class EigensolverError(KronsumError, ArithmeticError):
    """The eigensolver failed or returned an inconsistent spectrum."""


class InvalidFamilyError(KronsumError, ValueError):
    """A family restriction is inconsistent with the requested dimension."""
