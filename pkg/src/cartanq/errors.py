"""Exception hierarchy for cartanq."""


class CartanQError(Exception):
    """Base class for all cartanq errors."""


class OrderMismatchError(CartanQError):
    """Binary series operation received operands of unequal truncation order."""


class SeriesDomainError(CartanQError):
    """Constant-term requirement of an elementary function violated."""


class NotStrictlyPseudoconvexError(CartanQError):
    """The curvature -D Dbar log h has non-positive value at the chart center."""


class MalformedDefiningFunctionError(CartanQError):
    """Rigid defining series is not of the shape z*zb + (degree >= 4 terms)."""


class NormalFormViolationError(MalformedDefiningFunctionError):
    """Defining series violates the normal-form trace conditions."""


class RepresentationError(CartanQError):
    """Requested quantity has no exact rational representation on this chart."""


class InvalidFiberPointError(CartanQError):
    """Fiber point with lambda = 0."""


class InsufficientOrderError(CartanQError):
    """Requested verification order exceeds the available exact order."""


class InsufficientProbesError(CartanQError):
    """Too few probe values to certify the interpolated polynomial degree."""


class CalibrationError(CartanQError):
    """Internal inconsistency detected during calibration."""


class ExpressionSyntaxError(CartanQError):
    """Syntax error in an input expression; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class CoefficientFileError(CartanQError):
    """Malformed coefficient file; carries the offending line number."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class QuadratureEvaluationError(CartanQError):
    """Non-finite integrand sample; carries the offending node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node
