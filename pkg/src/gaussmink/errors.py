"""Exception hierarchy for the toolkit.

Every failure mode a caller is expected to branch on gets its own class so
that scans can record the error and keep going.  All of them derive from
ToolkitError; plain ValueError is reserved for out-of-domain arguments.
"""


class ToolkitError(RuntimeError):
    """Base class for diagnosable numerical failures."""


class NoRootsError(ToolkitError):
    """The constant-solution equation has no root at this level."""


class NoGoodSetError(ToolkitError):
    """No oscillation data exists for these parameters (level at or above the fold)."""


class AspectTooLargeError(ToolkitError):
    """Requested max/min ratio exceeds what the potential well admits."""


class EpsTooLargeError(ToolkitError):
    """Path level exceeds the admissible ceiling for the given lower exponent."""


class NotGoodSetError(ToolkitError):
    """Quadruple failed the level-matching or sign conditions."""


class IntegrandNegativeError(ToolkitError):
    """Half-period radicand went negative away from the endpoints."""


class HReachedZeroError(ToolkitError):
    """Trajectory support value decayed to the positivity floor."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class StepFailureError(ToolkitError):
    """Adaptive integrator could not take an acceptable step."""


class NoTurningPointError(ToolkitError):
    """Derivative never changed sign within the search window."""


class NonPositiveSupportError(ToolkitError):
    """Support function must be strictly positive."""


class HomotopyStallError(ToolkitError):
    """Continuation step size underflowed before reaching the target."""

    def __init__(self, message, t_reached=0.0):
        super().__init__(message)
        self.t_reached = t_reached


class ConvexityLostError(ToolkitError):
    """Curvature factor h'' + h stopped being positive."""


class ParityError(ToolkitError):
    """Density lacks the antipodal symmetry this exponent requires."""


class InvalidPolygonError(ToolkitError):
    """Polygon is not strictly convex with the origin in its interior."""


class QuadratureError(ToolkitError):
    """Adaptive quadrature failed to reach the requested tolerance."""
