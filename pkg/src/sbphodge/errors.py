"""Exception types raised across the package."""


class SbpHodgeError(Exception):
    """Base class for all package errors."""


class UnsupportedOrder(SbpHodgeError, ValueError):
    """Requested interior order has no shipped coefficient table."""


class GridTooSmall(SbpHodgeError, ValueError):
    """Grid has too few nodes for non-overlapping boundary closures."""


class DimensionMismatch(SbpHodgeError, ValueError):
    """Array length or shape does not match the operator."""


class KindMismatch(SbpHodgeError, ValueError):
    """Scalar field passed where a vector field is required, or vice versa."""


class WrongDimension(SbpHodgeError, ValueError):
    """Operation is undefined for the spatial dimension of the operands."""


class NullspaceDimensionUnexpected(SbpHodgeError, RuntimeError):
    """Numerical rank disagrees with the expected one-dimensional nullspace."""


class NotInImage(SbpHodgeError, ValueError):
    """Right-hand side has a component outside the image of the derivative."""


class TooLarge(SbpHodgeError, ValueError):
    """Problem exceeds the size limit of the dense rank oracle."""


class ConditionsViolated(SbpHodgeError, ValueError):
    """Compatibility conditions for the integral potential construction fail.

    Carries the list of failing condition labels in ``failed``.
    """

    def __init__(self, failed, message=None):
        self.failed = list(failed)
        super().__init__(message or f"conditions violated: {', '.join(self.failed)}")


class NotDivCurlFree(SbpHodgeError, ValueError):
    """Field is not discretely divergence and curl free at tolerance."""


class SolverStalled(SbpHodgeError, RuntimeError):
    """Iterative solver hit the iteration cap far from the requested tolerance."""


class NonFiniteEncountered(SbpHodgeError, FloatingPointError):
    """NaN or infinity appeared during an iterative solve."""


class NoPlaneNode(SbpHodgeError, ValueError):
    """Grid has no node on the requested extraction plane."""
