"""Exception types shared across the library."""


class FflaError(Exception):
    """Base class for all library errors."""


class DomainError(FflaError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class DimensionError(FflaError, ValueError):
    """Operand shapes do not conform."""


class SingularError(FflaError, ArithmeticError):
    """A matrix required to be invertible is singular."""


class ConfigError(FflaError, ValueError):
    """A configuration value is unusable (table too large, q too small, ...)."""


class RepresentationError(FflaError, ValueError):
    """The field representation does not support the requested kernel."""


class ParseError(FflaError, ValueError):
    """Malformed matrix file.  Carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
