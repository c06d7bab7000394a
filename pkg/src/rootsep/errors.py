"""Exception types shared across the package."""


class RootSepError(Exception):
    """Base class for package errors."""


class PolynomialParseError(RootSepError, ValueError):
    """Raised when polynomial text cannot be parsed."""


class UndefinedQuantityError(RootSepError, ValueError):
    """Raised when a height, separation or exponent is not defined for the input."""


class PrecisionError(RootSepError, ArithmeticError):
    """Raised when a certificate cannot be obtained at the allowed precision."""
