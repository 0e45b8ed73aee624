"""Exception types shared across the package.

Each numerical routine raises a specific subclass so callers (and the CLI)
can distinguish "you asked for a value outside the domain of validity" from
"the iteration did not converge" without parsing message strings.
"""


class HalfPlaneError(ValueError):
    """A logarithmic-coordinate map was evaluated where |c * exp(-2X)| >= 1.

    The perturbation term log(1 + c*exp(-2X)) is only defined on a right
    half-plane; crossing that boundary means the base point is not deep
    enough in the escaping regime (increase sigma).
    """


class OutsideDomainError(ValueError):
    """A coordinate map was evaluated outside its guaranteed domain."""


class NoConvergenceError(RuntimeError):
    """An iterative solver exhausted its budget before meeting tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NotInEscapingSetError(ValueError):
    """The point's forward orbit did not escape within the allowed budget."""


class BranchAmbiguityError(RuntimeError):
    """Square-root branch selection during pullback was too close to call."""


class BranchPointError(ValueError):
    """An orbit hit the branch point 0, where the dilatation ratio is undefined."""


class MultipleRootsError(RuntimeError):
    """Strict mode asked for a unique fixed ray but several candidates exist."""


class DegenerateDerivativeError(ArithmeticError):
    """A finite-difference derivative was too small to divide by safely."""


class InconclusiveOrbitError(RuntimeError):
    """Orbit classification ran out of iterations without a verdict."""


class ConfigError(ValueError):
    """A configuration file was missing, unreadable, or malformed."""
