"""Exception types shared across the package."""


class ParseError(ValueError):
    """A tabular row could not be turned into a valid record."""

    def __init__(self, message: str, line: int | None = None, column: str | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(ValueError):
    """The table is structurally wrong (missing column, duplicate key)."""


class CorruptionError(RuntimeError):
    """Persisted index files disagree with each other."""


class ConfigError(RuntimeError):
    """Invalid or incomplete configuration (bad dimension, missing credential)."""


class GroundingError(ValueError):
    """A generated response referenced items outside the allowed set or broke the schema."""


class TransportError(RuntimeError):
    """The upstream completion service failed (network, timeout, HTTP error)."""
