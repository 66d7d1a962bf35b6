"""Exception types raised across the package.

Everything derives from :class:`HexpotError` so callers can catch the
package's failures with a single except clause while still being able to
distinguish the specific condition.
"""


class HexpotError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HexpotError, ValueError):
    """An argument lies outside the mathematical domain of the routine."""


class NonDistinctRoots(HexpotError):
    """The characteristic cubic has a repeated (or nearly repeated) root."""


class SectorConditionViolated(HexpotError):
    """Root layout or spectral parameter violates the admissible sector."""


class ZeroRoot(HexpotError):
    """A characteristic root is zero, so its square-root scale is undefined."""


class ConvergenceFailure(HexpotError):
    """An adaptive numerical process failed to reach the requested accuracy."""


class SingularPoint(HexpotError):
    """Kernel evaluation was requested at zero separation."""


class MissingNormal(HexpotError):
    """A kernel that differentiates along the source normal got no normal."""


class BoundViolated(HexpotError):
    """No valid exponential decay envelope exists for the requested family."""


class IrregularCurve(HexpotError):
    """Curve parameters produce a degenerate parametrization (cusp etc.)."""


class SelfIntersection(HexpotError):
    """Curve parameters produce a non-simple (self-crossing) curve."""


class CalibrationMismatch(HexpotError):
    """Numerically extrapolated jump constants disagree with the closed forms."""


class SingularJump(HexpotError):
    """The jump/normalization factors are too close to singular to invert."""


class Divergence(HexpotError):
    """The fixed-point iteration is diverging (updates keep growing)."""


class MaxIterExceeded(HexpotError):
    """The iteration hit its iteration cap before meeting the tolerance."""


class NearSingularSystem(HexpotError):
    """The dense linear system is numerically singular."""


class TooCloseToBoundary(HexpotError):
    """Field evaluation was requested inside the quadrature clearance zone."""
