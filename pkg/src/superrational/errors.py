"""Exception types raised across the package."""


class SuperrationalError(Exception):
    """Base class for all errors raised by this package."""


class DifferentActionSets(SuperrationalError, ValueError):
    """The operation needs every player to share the same ordered action list."""


class DimensionMismatch(SuperrationalError, ValueError):
    pass


class NotTwoPlayers(SuperrationalError, ValueError):
    pass


class BadCoordinate(SuperrationalError, IndexError):
    pass


class TypeSetsDiffer(SuperrationalError, ValueError):
    """Players do not draw their types from one common set of labels."""


class UnknownType(SuperrationalError, KeyError):
    pass


class ModeMismatch(SuperrationalError, ValueError):
    """A pure-action object was combined with a mixed-candidate one (or vice versa)."""


class NotAPartition(SuperrationalError, ValueError):
    pass


class ParseError(SuperrationalError, ValueError):
    """Malformed game or type-space document."""


class NonConvergence(UserWarning):
    """Issued when the simplex ascent exhausts its iteration budget."""
