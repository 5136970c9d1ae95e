"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A computation produced a non-finite value or failed to converge."""


class QuadratureError(NumericalError):
    """An integrand was non-finite at a quadrature node."""


class ConvergenceError(NumericalError):
    """The tridiagonal eigensolver hit its iteration cap."""
