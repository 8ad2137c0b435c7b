"""Exception hierarchy shared by every module of the package."""


class FracStefanError(Exception):
    """Base class for all library errors."""


class GammaPoleError(FracStefanError, ValueError):
    """Gamma evaluated at a non-positive integer."""


class ConvergenceError(FracStefanError, ArithmeticError):
    """A series or quadrature did not reach its stopping rule."""


class UnderflowGuardError(FracStefanError, ArithmeticError):
    """A denominator underflowed, so the quotient is reported as divergent."""


class DomainError(FracStefanError, ValueError):
    """Argument outside the documented domain of an operation."""


class InvalidProblemError(FracStefanError, ValueError):
    """Physical data violate a problem invariant."""


class SubcriticalFluxError(InvalidProblemError):
    """The flux coefficient does not exceed the critical value, so no phase change occurs.

    Attributes
    ----------
    q0, q_crit : float
        Supplied flux coefficient and the threshold it failed to exceed.
    """

    def __init__(self, q0: float, q_crit: float):
        self.q0 = q0
        self.q_crit = q_crit
        super().__init__(
            f"q0 = {q0!r} does not exceed the critical flux q_crit = {q_crit!r}; "
            "the problem reduces to heat conduction without phase change"
        )


class NoBracketError(FracStefanError, RuntimeError):
    """No sign change of the root function was found on the scan grid."""


class GridError(FracStefanError, ValueError):
    """A sampling grid is too small or not uniform."""
