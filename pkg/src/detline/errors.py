"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when input data fails structural validation (shapes, d^2 != 0,
    chirality not an involution, malformed documents)."""


class SpectralBoundaryError(ArithmeticError):
    """Raised when a computation hits a numerical boundary: eigenvalues on a
    chosen branch cut, a split level lambda inside an eigenvalue cluster, or a
    singular operator where a bijective one is required."""
