"""Exception hierarchy shared by the geometry, counting and statistics engines."""


class GeometryError(Exception):
    """Base class for all domain errors raised by this package."""


class DegenerateInput(GeometryError):
    """Input violates a dimensionality / nondegeneracy precondition."""


class SingularMatrix(GeometryError):
    """A matrix required to be invertible has determinant zero."""


class Infeasible(GeometryError):
    """A halfspace system has no solution."""


class Unbounded(GeometryError):
    """A halfspace system admits a recession direction."""


class NotConstant(GeometryError):
    """Two generic shifts produced different counts for a body that was
    declared almost-surely constant."""


class CellBudgetExceeded(GeometryError):
    """Exact distribution cell decomposition grew past the configured cap."""


class InsufficientSamples(GeometryError):
    """Chi-square comparison would have an expected bin count below threshold."""


class UnknownIdentity(GeometryError):
    """Verification was requested for an identity tag outside the closed set."""
