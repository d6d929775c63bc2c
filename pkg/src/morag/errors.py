"""Exception hierarchy.

Every error carries a ``category`` used by the CLI to derive its exit code
and by the HTTP service to pick a status code:

* ``usage``   -- bad arguments or configuration (exit 64)
* ``io``      -- file system or transport failure (exit 2)
* ``missing`` -- a required artifact has not been produced yet (exit 3)
* ``data``    -- malformed or inconsistent data (exit 4)
"""


class MoragError(Exception):
    category = "data"


class UsageError(MoragError):
    category = "usage"


class ConfigError(UsageError):
    """Invalid or unknown configuration key/value."""


class IoError(MoragError):
    category = "io"


class EndpointError(IoError):
    """Transport-level failure talking to a remote endpoint."""


class MissingDependencyError(MoragError):
    category = "missing"


class ConfigurationError(MissingDependencyError):
    """A configured resource (database, lookup table) is absent."""


class DataError(MoragError):
    category = "data"


class ShapeError(DataError):
    """Array shapes or dimensions do not match the contract."""


class InsufficientFramesError(DataError):
    pass


class MalformedFeatureError(DataError):
    pass


class FrameRangeError(DataError):
    pass


class FormatError(DataError):
    """Bad magic bytes or unsupported version in a binary file."""


class CorruptFileError(DataError):
    """Truncated or internally inconsistent binary file."""


class DuplicateIdError(DataError):
    pass


class DegenerateVectorError(DataError):
    """Zero-norm vector where a direction is required."""


class InvalidMaskError(DataError):
    pass


class InvalidLatentError(DataError):
    pass


class TrainingDivergedError(DataError):
    pass


class ParseError(DataError):
    """Completion text could not be split into part descriptions.

    Carries the raw completion for diagnostics.
    """

    def __init__(self, message: str, completion: str = ""):
        super().__init__(message)
        self.completion = completion


class ParseExhaustedError(ParseError):
    pass


class InsufficientDataError(DataError):
    pass


class InvalidStatsError(DataError):
    pass


class IncompatibleSourcesError(DataError):
    pass


class EmptySourceError(DataError):
    pass


class LoadError(IoError):
    """A referenced motion payload could not be loaded."""


EXIT_CODES = {"usage": 64, "io": 2, "missing": 3, "data": 4}


def exit_code_for(err: MoragError) -> int:
    return EXIT_CODES.get(err.category, 4)
