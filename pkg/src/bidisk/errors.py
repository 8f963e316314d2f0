"""Exception types raised by the library."""


class BidiskError(Exception):
    """Base class for all library errors."""


class BoundaryError(BidiskError, ValueError):
    """A point lies on or too close to the unit circle."""


class BoundaryDegeneracyError(BoundaryError):
    """A map image landed within the boundary margin; the caller should resample."""


class DomainMismatchError(BidiskError, ValueError):
    """A kernel was evaluated at points of the wrong arity."""


class ConsistencyError(BidiskError, ArithmeticError):
    """A numerical result violated a structural invariant beyond roundoff."""


class UnsolvableError(BidiskError, ValueError):
    """An interpolation problem has no solution."""


class MalformedTreeError(BidiskError, ValueError):
    """A map expression tree could not be evaluated or parsed."""


class ConfigError(BidiskError, ValueError):
    """Invalid verification or search configuration."""
