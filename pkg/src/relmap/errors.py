"""Exception hierarchy shared across the package."""


class RelmapError(Exception):
    """Base class for all package errors."""


class CorpusError(RelmapError):
    """Corpus ingestion or cache failure (unreadable file, bad encoding)."""


class DataError(RelmapError):
    """Malformed or inconsistent input data (problem files, tables)."""


class ConfigError(RelmapError):
    """Invalid parameter value (k < 1, t <= 0, unknown mode)."""


class TransformError(RelmapError):
    """Matrix transform cannot proceed (e.g. all-zero frequency matrix)."""


class BudgetError(RelmapError):
    """Exhaustive enumeration refused because m! exceeds the budget."""


class UsageError(RelmapError):
    """Command-line usage problem."""
