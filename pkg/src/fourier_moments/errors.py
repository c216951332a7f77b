"""Exception hierarchy shared by every module."""


class FourierMomentsError(Exception):
    """Base class for library errors."""


class InvalidIndexError(FourierMomentsError, ValueError):
    """A group index has the wrong length or a digit out of range."""


class GroupMismatchError(FourierMomentsError, ValueError):
    """Two operands live on different groups."""


class SideMismatchError(FourierMomentsError, ValueError):
    """A primal-domain function was passed where a spectrum was expected, or vice versa."""


class UnsupportedOperationError(FourierMomentsError, ValueError):
    """The operation is only defined for a restricted family of groups."""


class ResourceLimitError(FourierMomentsError, RuntimeError):
    """A configured size guard would be exceeded."""

    def __init__(self, what: str, needed: int, bound: int):
        self.what = what
        self.needed = needed
        self.bound = bound
        super().__init__(f"{what}: {needed} exceeds the configured bound {bound}")


class ConsistencyError(FourierMomentsError, ArithmeticError):
    """Two computations that must agree did not, beyond tolerance."""


class ParseError(FourierMomentsError, ValueError):
    """An input file could not be read; the message names the location."""
