"""Exception hierarchy shared by all modules."""


class PhotonLiquidError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PhotonLiquidError, ValueError):
    """An argument lies outside the domain of the function."""


class PoleError(PhotonLiquidError, ZeroDivisionError):
    """A transform was evaluated exactly at one of its poles."""


class NumericError(PhotonLiquidError, ArithmeticError):
    """A numerical procedure failed to converge or produced an inconsistent result."""

    def __init__(self, message, coefficients=None):
        super().__init__(message)
        self.coefficients = coefficients


class CapacityError(PhotonLiquidError, ValueError):
    """A dense representation would exceed the supported size."""


class ShapeError(PhotonLiquidError, ValueError):
    """Curves or grids that must match do not."""


class EstimationError(PhotonLiquidError, ValueError):
    """Not enough data to form an estimate."""


class ValidationError(PhotonLiquidError, ValueError):
    """Input data violates a structural requirement (e.g. ordering)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
