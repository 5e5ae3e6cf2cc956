"""Exception types shared across the library."""


class HyperthickError(Exception):
    """Base class for all library errors."""


class DomainError(HyperthickError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BudgetError(HyperthickError):
    """A requested grid would exceed the configured node budget."""


class DegenerateBodyError(HyperthickError):
    """The body has zero or negative measure where positive measure is required."""


class InsufficientSamplingError(HyperthickError):
    """A Monte Carlo run produced no usable samples."""


class NoRootError(HyperthickError):
    """The boundary equation has no positive root along the requested direction."""


class ConvergenceError(HyperthickError):
    """An iterative solver failed to reach its tolerance."""


class OutsideSupportError(HyperthickError):
    """An axial coordinate lies outside the body's support interval."""


class PoleError(HyperthickError):
    """The meridian equation is evaluated at or beyond its pole."""


class UnboundedRegionError(HyperthickError):
    """The requested shape is open and has no bounded support."""


class ProjectionError(HyperthickError):
    """Constraint projection of a perturbed shape failed to converge."""


class GeometryError(HyperthickError):
    """A composite body's parts violate a geometric precondition."""


class RankError(HyperthickError):
    """A deformation matrix failed the rank-deficiency test.

    Carries the full singular-value spectrum for diagnosis.
    """

    def __init__(self, message: str, singular_values=None):
        super().__init__(message)
        self.singular_values = None if singular_values is None else list(singular_values)
