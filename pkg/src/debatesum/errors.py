"""Exception types shared across the pipeline stages."""

from __future__ import annotations


class DebatesumError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DebatesumError):
    """Input file is syntactically malformed (bad JSON, bad line format)."""

    def __init__(self, message: str, *, source: str | None = None, line: int | None = None):
        self.source = source
        self.line = line
        where = ""
        if source is not None:
            where = f" [{source}" + (f":{line}" if line is not None else "") + "]"
        super().__init__(message + where)


class ValidationError(DebatesumError):
    """Input parsed but violates a structural invariant.

    ``record`` names the offending record (topic/comment/sentence id) so the
    caller can locate it without re-parsing the file.
    """

    def __init__(self, message: str, *, record: str | None = None):
        self.record = record
        super().__init__(message + (f" (record: {record})" if record else ""))


class ConfigError(DebatesumError):
    """Pipeline configuration is unusable (missing file, bad option value)."""


class ComputationError(DebatesumError):
    """A numeric stage cannot proceed (degenerate input, undefined statistic)."""
