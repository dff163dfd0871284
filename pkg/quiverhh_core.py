from __future__ import annotations

from typing import Callable

StatusCallback = Callable[[str], None]


class QuiverHHError(Exception):
    """Base class for every error raised by the quiverhh modules."""


class ParseError(QuiverHHError):
    """Malformed `.bqp` / `.poset` input. `line` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


class ModelError(QuiverHHError):
    """A request that makes no sense for the given algebra or poset."""


class NotComposableError(ModelError):
    pass


class VerificationError(ModelError):
    """A checked identity failed; `violation` describes the first failure."""

    def __init__(self, message: str, violation: str | None = None) -> None:
        super().__init__(message if violation is None else f"{message}: {violation}")
        self.violation = violation


class LinalgError(QuiverHHError):
    pass


def yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1
