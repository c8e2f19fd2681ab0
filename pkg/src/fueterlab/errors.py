"""Exception types raised across the library."""


class FueterLabError(Exception):
    """Base class for all library errors."""


class ZeroDivisorError(FueterLabError):
    """Complex quaternion q with q*conj(q) = 0 cannot be inverted."""


class NotOrthonormalError(FueterLabError):
    """Candidate frame fails the orthonormality test."""


class DomainError(FueterLabError):
    """Evaluation point lies outside the operator's domain."""


class SingularPointError(FueterLabError):
    """Kernel evaluated at (or too close to) its singular point."""


class SingularPathError(FueterLabError):
    """Fractional kernel derivative requested along a segment that meets the singularity."""


class SingularityOnGridError(FueterLabError):
    """A quadrature node coincides with the singular point and no exclusion ball is active."""


class BoundaryTooCloseError(FueterLabError):
    """Finite-difference stencil would leave the field's box."""


class UndefinedOnBoundaryError(FueterLabError):
    """Reproduction formulas are undefined for probe points on the box boundary."""


class OrderOutOfRangeError(FueterLabError):
    """Fractional order (or an order sum) leaves the open strip 0 < Re < 1."""


class ConfigError(FueterLabError):
    """Malformed suite configuration (carries a field/line diagnostic)."""
