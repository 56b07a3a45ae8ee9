"""Exception taxonomy shared by every module.

The three subclasses map onto the CLI exit codes: usage errors exit 1,
data errors exit 2, internal invariant violations exit 3.
"""


class FamstError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(FamstError):
    """The caller passed invalid arguments or misused an API."""


class DataError(FamstError):
    """An input file or payload is malformed or unreadable."""


class InternalError(FamstError):
    """An internal invariant was violated; indicates a bug upstream."""
