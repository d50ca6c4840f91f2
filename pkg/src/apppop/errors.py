"""Exception hierarchy shared across the toolkit.

CLI exit codes map onto this hierarchy: ConfigError -> 1, DataError -> 2,
anything else -> 3.
"""


class AppPopError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(AppPopError):
    """Invalid or inconsistent run configuration."""


class DataError(AppPopError):
    """Malformed, missing, or degenerate input data."""


class TransportError(DataError):
    """HTTP-level failure while fetching a remote index; retryable."""


class FormatError(DataError):
    """Remote or on-disk payload did not match the expected format."""
