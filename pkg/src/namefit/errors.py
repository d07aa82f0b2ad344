"""Error hierarchy shared across the package.

The CLI maps these onto exit codes: DataError -> 2, NumericError -> 3.
"""


class NamefitError(Exception):
    """Base class for all package errors."""


class DataError(NamefitError):
    """Invalid or unresolvable input data (corpus files, configs, tags)."""


class NumericError(NamefitError):
    """Domain violations or failures in numeric routines."""
