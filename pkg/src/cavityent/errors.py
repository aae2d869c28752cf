"""Exception types raised across the package."""


class CavityEntError(Exception):
    """Base class for all package errors."""


class DomainError(CavityEntError, ValueError):
    """Argument outside the domain of a closed-form expression."""


class NotNormalized(DomainError):
    """Amplitude vector whose Euclidean norm is not 1."""

    def __init__(self, norm, tol=1e-9):
        self.norm = float(norm)
        self.tol = tol
        super().__init__(
            f"amplitudes are not normalized: norm = {self.norm:.12g} "
            f"(tolerance {tol:g}); pass --normalize to rescale"
        )


class NonHermitian(CavityEntError, ValueError):
    pass


class NonConvergence(CavityEntError, ArithmeticError):
    """An iterative kernel ran out of sweeps."""


class BadPartition(CavityEntError, ValueError):
    pass


class BadDims(CavityEntError, ValueError):
    pass


class ConfigError(CavityEntError, ValueError):
    pass
