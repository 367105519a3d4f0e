"""Exception types shared across the package."""


class CndFockError(Exception):
    """Base class for all package errors."""


class RepresentationError(CndFockError, TypeError):
    """An operation was handed a test-function form it cannot act on."""


class QuadratureError(CndFockError, ArithmeticError):
    """A quadrature failed to reach its tolerance."""

    def __init__(self, message, error_estimate=None):
        super().__init__(message)
        self.error_estimate = error_estimate


class PositivityError(CndFockError, ArithmeticError):
    """A Gram or covariance matrix is not positive semidefinite within tolerance."""

    def __init__(self, message, eigenvalue=None, witness=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue
        self.witness = witness


class ModelError(CndFockError, ValueError):
    """A CND model does not meet the structural requirement of an operation."""
