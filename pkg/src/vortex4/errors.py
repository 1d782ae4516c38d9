"""Exception hierarchy shared by every module of the package."""


class VortexError(Exception):
    """Base class for all errors raised by vortex4."""


class CollisionError(VortexError):
    """Two vortices (or their reduced images) coincide to within the guard."""


class DomainError(VortexError):
    """An input lies outside the domain of a map."""


class SingularSectorError(DomainError):
    """The projection was asked to act on a state with zero translational momentum."""


class ChartError(DomainError):
    """A point lies outside the slice chart around the equilateral equilibrium."""


class HyperbolicRegimeError(DomainError):
    """The symmetry-breaking parameter is too large for the elliptic Poincare estimate."""


class NonHolomorphicError(DomainError):
    """A coordinate change expected to be holomorphic has a nonzero d/dzbar."""


class DegenerateError(VortexError):
    """Input data carries no usable information (e.g. all section points coincide)."""


class IntegrationError(VortexError):
    """Base class for failures inside the ODE integrator."""


class StepSizeUnderflow(IntegrationError):
    """The adaptive step shrank below the resolvable limit."""


class NonFiniteError(IntegrationError):
    """The vector field returned NaN or inf."""


class NoSignChangeError(IntegrationError):
    """An event function does not change sign over the searched span."""
