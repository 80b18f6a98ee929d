"""Exception types shared across the pipeline.

Everything raised on bad data or bad configuration derives from
:class:`BitextFilterError` so the CLI can map it to exit code 2; genuine
usage errors (bad flags) are handled by the CLI itself with exit code 1.
"""


class BitextFilterError(Exception):
    """Base class for all data / validation errors raised by this package."""


class AlignmentError(BitextFilterError):
    """Two inputs that must be row-aligned have different lengths."""


class DecodeError(BitextFilterError):
    """A text input is not valid UTF-8."""


class ParseError(BitextFilterError):
    """A structured text file (TSV, score file, label file) is malformed."""


class FormatError(BitextFilterError):
    """A binary input has an impossible size or layout."""


class DataError(BitextFilterError):
    """Input values violate a documented invariant (NaN score, zero vector, ...)."""


class CoverageError(BitextFilterError):
    """A per-pair file does not cover every pair index exactly once."""


class ConfigError(BitextFilterError):
    """Operation invoked with an inconsistent or incomplete configuration."""


class UndefinedScoreError(BitextFilterError):
    """A score is mathematically undefined for the given inputs."""
