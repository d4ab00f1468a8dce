"""Exception hierarchy shared across the toolkit.

ConfigError means the caller asked for something invalid (flags, paths,
lexicon definitions) and maps to CLI exit code 1. DataError and its
subclasses mean the input data itself is unusable and map to exit code 2.
"""


class PluralYouError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(PluralYouError):
    """Invalid configuration, arguments, or lexicon definition."""


class DataError(PluralYouError):
    """Malformed or unusable input data."""


class AlignmentError(DataError):
    """Bitext sides have different line counts."""

    def __init__(self, english_lines: int, spanish_lines: int):
        super().__init__(
            f"bitext sides are not aligned: english side has {english_lines} "
            f"lines, spanish side has {spanish_lines}"
        )
        self.english_lines = english_lines
        self.spanish_lines = spanish_lines


class EncodingError(DataError):
    """A line could not be decoded as UTF-8."""

    def __init__(self, source: str, line_number: int):
        super().__init__(f"{source}: line {line_number} is not valid UTF-8")
        self.source = source
        self.line_number = line_number


class ParseError(DataError):
    """A serialized line is not valid JSON."""

    def __init__(self, line_number: int, detail: str = ""):
        msg = f"line {line_number}: not valid JSON"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.line_number = line_number


class SchemaError(DataError):
    """A record is missing a mandatory field or holds an invalid value."""

    def __init__(self, field: str, detail: str = "", line_number: int | None = None):
        where = f"line {line_number}: " if line_number is not None else ""
        msg = f"{where}field '{field}'"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.field = field
        self.line_number = line_number


class InvalidMatchError(DataError):
    """A plural-form match does not belong to the text being masked."""


class TooSmallError(DataError):
    """Not enough instances for the requested operation."""


class EmptyClassError(DataError):
    """One of the label classes is empty where both are required."""


class DegenerateDataError(DataError):
    """Training data lacks one of the two classes."""


class CoordinateError(DataError):
    """Latitude/longitude outside the valid range."""
