"""Exception hierarchy shared by all pipeline modules.

The CLI maps these onto process exit codes: ConfigError -> 1,
InputError -> 2, StageError -> 3.
"""


class KgPrepError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(KgPrepError):
    """Invalid configuration: unknown keys, bad values, violated stage dependencies."""


class InputError(KgPrepError):
    """Unreadable or structurally invalid input data."""


class ParseError(InputError):
    """A record failed to parse. Carries optional location context."""

    def __init__(self, message: str, *, line: int | None = None, position: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
        self.position = position


class SmilesError(ParseError):
    """SMILES text rejected; ``position`` is the 0-based character index."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})", position=position)


class StageError(KgPrepError):
    """A pipeline stage could not complete under its contract."""
