from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import os
from pathlib import Path
from typing import Any

from sympy import isprime
from sympy.polys.domains import GF, QQ

DEFAULT_MAX_DEGREE = 4
OUTPUT_FORMATS = ("text", "records")


@lru_cache(maxsize=None)
def _prime_field(prime: int) -> Any:
    # One domain instance per prime so elements from different calls mix.
    return GF(prime, symmetric=False)


@dataclass(frozen=True)
class FieldSpec:
    """The base field: the rationals (`q`) or a prime field (`fp:<p>`)."""

    kind: str = "q"
    prime: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "q":
            if self.prime is not None:
                raise ValueError("The rational field takes no prime.")
        elif self.kind == "fp":
            if self.prime is None or not isprime(self.prime):
                raise ValueError(f"Field characteristic must be prime, got {self.prime}.")
        else:
            raise ValueError(f"Unknown field kind: {self.kind}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("q", None)

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        raw = text.strip().lower()
        if raw in {"q", "qq"}:
            return cls.rationals()
        if raw.startswith("fp:"):
            digits = raw[3:].strip()
            if not digits.isdigit():
                raise ValueError(f"Expected fp:<prime>, got {text!r}.")
            return cls("fp", int(digits))
        raise ValueError(f"Expected q or fp:<prime>, got {text!r}.")

    @property
    def domain(self) -> Any:
        if self.kind == "q":
            return QQ
        return _prime_field(self.prime)

    def scalar(self, value: int | Fraction) -> Any:
        """Convert an exact integer or fraction into a domain element."""

        K = self.domain
        value = Fraction(value)
        if value.denominator == 1:
            return K(value.numerator)
        if self.kind == "fp" and value.denominator % self.prime == 0:
            raise ValueError(f"{value} has no image in F_{self.prime}.")
        return K(value.numerator) / K(value.denominator)

    def __str__(self) -> str:
        return "Q" if self.kind == "q" else f"F_{self.prime}"


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Path | None = None
    max_degree: int = DEFAULT_MAX_DEGREE
    field: FieldSpec = field(default_factory=FieldSpec.rationals)
    threads: int = 1
    output_format: str = "text"
    verbose: bool = False

    def __post_init__(self) -> None:
        if self.max_degree < 0:
            raise ValueError("--max-degree must be >= 0.")
        if self.threads < 1:
            raise ValueError("--threads must be >= 1.")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"--format must be one of {', '.join(OUTPUT_FORMATS)}.")


@dataclass(frozen=True)
class EnvDefaults:
    max_degree: int
    field: FieldSpec
    threads: int
    output_format: str
    verbose: bool


def _getenv(name: str) -> str:
    return os.getenv(name, "").strip()


def _int_from_env(name: str, default: int) -> int:
    raw = _getenv(name)
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be an integer, got {raw!r}.") from exc


def load_defaults_from_env() -> EnvDefaults:
    """Flag defaults from the environment. Command-line flags still win.

    Supported:
      - QUIVERHH_MAX_DEGREE=4
      - QUIVERHH_FIELD=q | fp:32003
      - QUIVERHH_THREADS=1
      - QUIVERHH_FORMAT=text | records
      - QUIVERHH_VERBOSE=1

    Blank variables are ignored.
    """

    raw_field = _getenv("QUIVERHH_FIELD")
    output_format = _getenv("QUIVERHH_FORMAT").lower() or "text"
    if output_format not in OUTPUT_FORMATS:
        raise ValueError(f"QUIVERHH_FORMAT must be one of {', '.join(OUTPUT_FORMATS)}.")

    return EnvDefaults(
        max_degree=_int_from_env("QUIVERHH_MAX_DEGREE", DEFAULT_MAX_DEGREE),
        field=FieldSpec.parse(raw_field) if raw_field else FieldSpec.rationals(),
        threads=_int_from_env("QUIVERHH_THREADS", 1),
        output_format=output_format,
        verbose=_getenv("QUIVERHH_VERBOSE").lower() in {"1", "true", "yes", "on"},
    )
