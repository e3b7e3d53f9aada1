"""Exception types shared across the package.

The CLI maps these onto exit codes: OSError -> 2, validation-type errors
(ConfigError, ParseError, StructuralError, ValueError) -> 3, everything
else -> 4.
"""


class FstgecError(Exception):
    """Base class for package errors."""


class ConfigError(FstgecError):
    """Bad configuration: missing resources, out-of-range settings."""


class StructuralError(FstgecError):
    """An FST violates a structural precondition (cyclic, nondeterministic, ...)."""


class ParseError(FstgecError):
    """A text resource failed to parse. Carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResourceLimitError(FstgecError):
    """A configurable work bound (path count, joint-state count) was exceeded."""
