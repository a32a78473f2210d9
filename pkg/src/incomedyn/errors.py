"""Exception taxonomy shared across the package.

Every error raised by the library carries a ``category`` used by the
command line front end to pick an exit code and to label the run
manifest.  Categories: ``usage`` (bad arguments or configuration),
``domain`` (mathematically invalid inputs), ``numeric`` (an algorithm
failed to converge or overflowed), ``io`` (malformed or unreadable
input data).
"""


class IncomeDynError(Exception):
    """Base class for all package errors."""

    category = "usage"


class UsageError(IncomeDynError):
    """Invalid arguments, flags, or configuration."""

    category = "usage"


class DomainError(IncomeDynError):
    """Input outside the mathematical domain of an operation."""

    category = "domain"


class NumericError(IncomeDynError):
    """Numerical failure: divergence, overflow, or iteration exhaustion.

    ``estimate`` holds the best value available when the failure was
    detected, so callers can report it alongside the error.
    """

    category = "numeric"

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class InputError(IncomeDynError):
    """Malformed input data (files, streams)."""

    category = "io"
