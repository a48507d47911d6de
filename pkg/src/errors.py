class QrngError(Exception):
    """Base class for all pipeline errors."""


class DomainError(QrngError, ValueError):
    """Raised when an input violates a documented precondition or invariant."""


class TickOverflowError(DomainError):
    """Raised when a timestamp does not fit the unsigned 64-bit tick counter."""


class FormatError(QrngError):
    """Raised when a time-tag or bit file is malformed."""


class InputSizeError(QrngError, ValueError):
    """Raised when a statistical test receives less input than its minimum."""

    def __init__(self, test_name: str, minimum: int, actual: int) -> None:
        self.test_name = test_name
        self.minimum = minimum
        self.actual = actual
        super().__init__(f"{test_name}: input too short ({actual} bits); requires {minimum}")


class ConfigError(QrngError):
    """Raised when a pipeline configuration cannot be loaded or validated."""
