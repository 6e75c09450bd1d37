"""Exception hierarchy shared across the package."""


class SpiderlinkError(Exception):
    """Base class for all package errors."""


class DataFormatError(SpiderlinkError):
    """A data file is malformed (bad JSON, missing keys, wrong shapes)."""


class ValidationError(SpiderlinkError):
    """Loaded data violates an integrity constraint (duplicate ids, bad references)."""


class SqlParseError(SpiderlinkError):
    """SQL text falls outside the supported subset.

    `position` is the character offset of the offending token, when known.
    """

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class SqlResolutionError(SqlParseError):
    """A table or column reference does not resolve against the schema."""


class TransportError(SpiderlinkError):
    """A remote embedding endpoint is unreachable after retries."""


class ProtocolError(SpiderlinkError):
    """A remote embedding endpoint answered with a malformed response."""
