from __future__ import annotations

from pathlib import Path
from typing import Callable

import pytest

from quiverhh_algebra import BoundAlgebra, build_algebra
from quiverhh_config import FieldSpec
from quiverhh_inputs import load_poset, load_presentation, parse_presentation
from quiverhh_poset import Poset, incidence_presentation

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture
def corpus_path() -> Callable[[str], Path]:
    return lambda name: CORPUS / name


@pytest.fixture
def load_algebra() -> Callable[..., BoundAlgebra]:
    """Build the algebra of a bundled `.bqp` file, or of a `.poset` through its incidence presentation."""

    def _load(name: str, field: FieldSpec | None = None) -> BoundAlgebra:
        path = CORPUS / name
        if path.suffix == ".poset":
            presentation = incidence_presentation(load_poset(path))
        else:
            presentation = load_presentation(path)
        return build_algebra(presentation, field)

    return _load


@pytest.fixture
def algebra_from_text() -> Callable[[str], BoundAlgebra]:
    return lambda text: build_algebra(parse_presentation(text))


@pytest.fixture
def load_bundled_poset() -> Callable[[str], Poset]:
    return lambda name: load_poset(CORPUS / name)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    for name in ("QUIVERHH_MAX_DEGREE", "QUIVERHH_FIELD", "QUIVERHH_THREADS", "QUIVERHH_FORMAT", "QUIVERHH_VERBOSE"):
        monkeypatch.delenv(name, raising=False)
