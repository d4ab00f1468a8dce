"""Error types; ConfigError maps to CLI exit 1, the data errors to exit 2."""


class HarnessError(Exception):
    """Base class for harness errors."""


class ConfigError(HarnessError):
    """Invalid configuration or arguments."""


class SchemaError(HarnessError):
    """An instance record is missing a field or holds an invalid value."""

    def __init__(self, field: str, detail: str = "", line_number: int | None = None):
        where = f"line {line_number}: " if line_number is not None else ""
        msg = f"{where}field '{field}'"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.field = field
        self.line_number = line_number


class LoadError(HarnessError):
    """A model directory is missing or unreadable."""


class ResourceError(HarnessError):
    """Ran out of memory or another exhaustible resource."""
