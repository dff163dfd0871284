from __future__ import annotations

from fractions import Fraction

import pytest

from quiverhh_config import FieldSpec, RunConfig, load_defaults_from_env


def test_field_spec_parse():
    assert FieldSpec.parse("q") == FieldSpec.rationals()
    assert FieldSpec.parse("QQ") == FieldSpec.rationals()
    assert FieldSpec.parse("fp:7") == FieldSpec("fp", 7)
    assert str(FieldSpec.parse("fp:7")) == "F_7"
    assert str(FieldSpec.rationals()) == "Q"


@pytest.mark.parametrize("text", ["fp:4", "fp:", "fp:x", "r", "fp:1"])
def test_field_spec_rejects_bad_text(text: str):
    with pytest.raises(ValueError):
        FieldSpec.parse(text)


def test_field_spec_scalars():
    q = FieldSpec.rationals()
    assert q.scalar(Fraction(1, 3)) * q.scalar(3) == q.domain.one

    f5 = FieldSpec.parse("fp:5")
    assert f5.scalar(7) == f5.scalar(2)
    assert f5.scalar(Fraction(1, 2)) * f5.scalar(2) == f5.domain.one
    with pytest.raises(ValueError):
        f5.scalar(Fraction(1, 5))


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="hh", max_degree=-1)
    with pytest.raises(ValueError):
        RunConfig(command="hh", threads=0)
    with pytest.raises(ValueError):
        RunConfig(command="hh", output_format="xml")


def test_env_defaults(monkeypatch: pytest.MonkeyPatch):
    defaults = load_defaults_from_env()
    assert defaults.max_degree == 4
    assert defaults.field == FieldSpec.rationals()
    assert defaults.threads == 1
    assert defaults.output_format == "text"
    assert defaults.verbose is False

    monkeypatch.setenv("QUIVERHH_MAX_DEGREE", "6")
    monkeypatch.setenv("QUIVERHH_FIELD", "fp:32003")
    monkeypatch.setenv("QUIVERHH_THREADS", "3")
    monkeypatch.setenv("QUIVERHH_FORMAT", "records")
    monkeypatch.setenv("QUIVERHH_VERBOSE", "yes")
    defaults = load_defaults_from_env()
    assert defaults.max_degree == 6
    assert defaults.field == FieldSpec("fp", 32003)
    assert defaults.threads == 3
    assert defaults.output_format == "records"
    assert defaults.verbose is True


def test_env_defaults_blank_and_bad(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("QUIVERHH_MAX_DEGREE", "  ")
    assert load_defaults_from_env().max_degree == 4

    monkeypatch.setenv("QUIVERHH_MAX_DEGREE", "four")
    with pytest.raises(ValueError):
        load_defaults_from_env()
