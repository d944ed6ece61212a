"""Exception hierarchy shared by the engine, the CLI and the HTTP routes."""


class QMatrixError(Exception):
    """Base class for all expected failures. Maps to exit code 1."""

    exit_code = 1


class ParameterError(QMatrixError, ValueError):
    """Invalid algebra parameters, scalar literals or parameter tuples."""


class HypothesisError(QMatrixError):
    """An operation was called outside the parameter regime it is defined for."""


class FieldMismatchError(QMatrixError, ValueError):
    """Arithmetic between elements of different cyclotomic fields."""


class ZeroInversionError(QMatrixError, ZeroDivisionError):
    """Inversion of zero in a cyclotomic field."""


class ReductionError(QMatrixError):
    """A value has no image under the chosen reduction modulo a prime."""


class InvariantViolation(QMatrixError):
    """A proven identity failed. Always a bug; maps to exit code 2."""

    exit_code = 2
