"""Exceptions shared by all modules, mapped to CLI exit codes by the handlers."""


class InputError(ValueError):
    """Malformed or contract-violating input data (CLI exit 2)."""


class ParameterError(InputError):
    """A parameter outside its admissible range (CLI exit 2)."""


class VerdictFailure(Exception):
    """The computation succeeded but the checked property does not hold.

    Carries the report payload so callers can still emit it (CLI exit 3).
    """

    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload


class InconclusiveNumerics(Exception):
    """A numerical check could not resolve the question (CLI exit 4)."""

    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload
