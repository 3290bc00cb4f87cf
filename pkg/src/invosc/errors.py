"""Exception taxonomy shared by all invosc modules."""


class InvoscError(Exception):
    """Base class for all invosc errors."""


class PoleError(InvoscError, ValueError):
    """Evaluation requested exactly at (or too close to) a pole."""


class RegionError(InvoscError, ValueError):
    """A forced evaluation method was used outside its validity region."""


class AccuracyError(InvoscError):
    """No available method reached the requested tolerance."""


class SectorError(InvoscError, ValueError):
    """A contour rotation left the sector where the integrand decays."""


class QuadratureError(InvoscError):
    """A quadrature failed to converge to its tolerance."""


class ExtrapolationError(InvoscError):
    """A limit extrapolation (epsilon -> 0 or order -> integer) diverged."""


class ContourError(InvoscError, ValueError):
    """A closed contour encloses more singularities than intended."""


class FitConditionError(InvoscError):
    """A rational fit left a residual too large to trust its pole."""


class DomainError(InvoscError, ValueError):
    """Argument outside the operation's contractual domain (e.g. t < 0)."""


class OracleDisagreementError(InvoscError):
    """Two independent reference computations disagree beyond tolerance."""


class LeakageError(InvoscError):
    """Wavepacket mass reached the edge of the computational grid."""
