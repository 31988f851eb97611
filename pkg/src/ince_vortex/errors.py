"""Exception types shared across the package."""


class InceVortexError(Exception):
    """Base class for all package errors."""


class ValidationError(InceVortexError, ValueError):
    """Raised when an index, parameter or configuration is not admissible."""


class NumericalError(InceVortexError, ArithmeticError):
    """Raised when an eigensolve or quadrature fails to converge."""
