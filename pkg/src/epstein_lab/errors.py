"""Exception types shared across the package."""


class EpsteinError(Exception):
    """Base class for all library errors."""


class DomainError(EpsteinError, ValueError):
    """Argument outside the domain of the operation."""


class PoleError(DomainError):
    """Evaluation requested at (or too close to) a pole."""


class PrecisionLossError(EpsteinError):
    """Requested height is beyond what the configured arithmetic can resolve."""


class NonConvergenceError(EpsteinError):
    """A truncated series did not reach its target within the term budget."""


class ResourceError(EpsteinError):
    """A table or workspace would exceed the configured memory budget."""


class QuadratureError(EpsteinError):
    """Adaptive quadrature exhausted its refinement budget."""
