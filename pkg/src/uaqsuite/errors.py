"""Exception hierarchy shared across the package."""


class UaqError(Exception):
    """Base class for every error raised by this package."""


class InputError(UaqError):
    """Malformed or inconsistent caller input (unknown ids, bad budgets)."""


class ParseError(InputError):
    """A document failed to parse.

    Carries the 1-based line and column when the underlying JSON reader
    provides them, else both are None.
    """

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ClassViolationError(UaqError):
    """Instance falls outside the structural class a solver requires."""

    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = tuple(witnesses)


class ScaleLimitError(UaqError):
    """An enumeration exceeded its configured safety cap."""


class ConfigError(UaqError):
    """Unusable engine configuration (bad field size, bad mode)."""


class GenerationError(UaqError):
    """Generator could not satisfy its spec within bounded retries."""


class InternalError(UaqError):
    """Invariant breach inside the solver; always a bug, never user error."""
