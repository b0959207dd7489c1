from __future__ import annotations

from typing import Any


class DrillfillError(Exception):
    """Base class for every error raised by the numeric services."""


class InvalidInterval(DrillfillError, ValueError):
    pass


class DivisionByZeroInterval(DrillfillError, ZeroDivisionError):
    pass


class DomainError(DrillfillError, ValueError):
    """An argument left the real domain of a function."""

    def __init__(self, function: str, value: Any, reason: str = "") -> None:
        self.function = function
        self.value = value
        message = f"{function} is undefined on {value}"
        if reason:
            message = f"{message}: {reason}"
        super().__init__(message)


class NoStraddle(DrillfillError):
    pass


class NotMonotone(DrillfillError):
    pass


class OrderingError(DrillfillError, ValueError):
    pass


class KTooLarge(DrillfillError):
    pass


class DegenerateLattice(DrillfillError, ValueError):
    pass


class VolumeOrderError(DrillfillError, ValueError):
    pass


class UnknownFunction(DrillfillError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class UnknownGate(UnknownFunction):
    pass


class UnknownTask(UnknownFunction):
    pass


class UsageError(DrillfillError):
    """Malformed command input; the CLI exits with code 4."""


class MissingParam(UsageError):
    def __init__(self, name: str, usage: str = "") -> None:
        self.name = name
        self.usage = usage
        message = f"missing parameter --{name.replace('_', '-')}"
        if usage:
            message = f"{message}\nusage: {usage}"
        super().__init__(message)


class CuspFileError(UsageError):
    """A cusp file could not be read; ``line`` is 1-based when known."""

    def __init__(self, path: str, reason: str, line: int | None = None) -> None:
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {reason}")
