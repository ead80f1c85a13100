"""Exception hierarchy shared by the library and the command line.

Every error carries the process exit code the CLI reports for it, the same way
the API layer maps failures to HTTP status codes.
"""


class SphereTrackError(Exception):
    """Base class for every error raised by SphereTrack.

    Raised directly when a computed object breaks one of its own invariants,
    which the CLI reports as a verification failure.
    """
    exit_code = 4


class ConfigError(SphereTrackError):
    """Invalid run configuration: bad (p, q), budgets, suite names or artifacts."""
    exit_code = 2


class CacheMismatchError(SphereTrackError):
    """A cached row disagrees with its content hash or with the running model version."""
    exit_code = 3


class VerificationFailed(SphereTrackError):
    """At least one verification suite produced a `fail` verdict."""
    exit_code = 4

    def __init__(self, message, report_path=None):
        super().__init__(message)
        self.report_path = report_path


class InvalidCurveError(SphereTrackError, ValueError):
    """A weight vector is not a normal curve, or a curve lacks a required property."""
    exit_code = 2


class PreconditionError(SphereTrackError, ValueError):
    """An operation was called outside its precondition."""
    exit_code = 2


class WordOverflowError(SphereTrackError, ValueError):
    """A free-group word grew past the configured length cap."""
    exit_code = 2
