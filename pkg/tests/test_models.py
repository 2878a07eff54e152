from __future__ import annotations

import math

import pytest
from pydantic import ValidationError

from models.cli import CliRequest, Command, OutputFormat
from models.common import format_complex, is_positive_integer, parse_complex
from models.expansion import ExpansionResult, SplitResult
from settings import Settings


@pytest.mark.parametrize(
    "text,expected",
    [
        ("2", 2),
        ("-2.5e3", -2500),
        ("10+1i", 10 + 1j),
        ("10-1i", 10 - 1j),
        ("3i", 3j),
        ("1-i", 1 - 1j),
        ("+i", 1j),
        ("0.5+2j", 0.5 + 2j),
        (" 1 + 2i ", 1 + 2j),
        (".5", 0.5),
    ],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("text", ["", "abc", "1+", "i1", "1e999", "nan", "1+2k"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValueError):
        parse_complex(text)


def test_format_complex():
    assert format_complex(20 / 3 + 0j) == "6.666666666666667"
    assert format_complex(1 - 2j) == "1.0-2.0i"
    assert format_complex(10 + 1j, 4) == "10+1i"
    assert format_complex(complex(1.0, -0.0)) == "1.0"


def test_positive_integer():
    assert is_positive_integer(5 + 0j)
    assert not is_positive_integer(5.5 + 0j)
    assert not is_positive_integer(5 + 1j)
    assert not is_positive_integer(0j)


def test_complex_fields_accept_several_spellings():
    for value in (1 + 2j, [1, 2], "1+2i"):
        assert ExpansionResult(value=value, order=0, remainder_estimate=0).value == 1 + 2j
    assert ExpansionResult(value=3, order=0, remainder_estimate=0).value == 3 + 0j


@pytest.mark.parametrize("value", [float("nan"), [1, float("inf")], [1, 2, 3], True, None])
def test_complex_fields_reject(value):
    with pytest.raises(ValidationError):
        ExpansionResult(value=value, order=0, remainder_estimate=0)


def test_complex_fields_serialize_as_pairs():
    dumped = ExpansionResult(value=1 - 2j, order=1, remainder_estimate=0.5, terms=[1 - 2j]).model_dump(
        mode="json", by_alias=True
    )
    assert dumped["value"] == [1.0, -2.0]
    assert dumped["order"] == 1
    assert dumped["terms"] == [[1.0, -2.0]]


def test_split_total():
    assert SplitResult(leading=1, exponential=0.5j, order=3).total == 1 + 0.5j


def test_cli_request_validation():
    request = CliRequest(command="eval-f", z="2", s=1, a="5+1i", output="json")
    assert request.command == Command.eval_f
    assert request.output == OutputFormat.json
    assert request.a == 5 + 1j
    with pytest.raises(ValidationError):
        CliRequest(command="eval-f", tol=0)
    with pytest.raises(ValidationError):
        CliRequest(command="sweep", samples=1)
    with pytest.raises(ValidationError):
        CliRequest(command="plot")


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("LERCH_MAX_ORDER", "10")
    monkeypatch.setenv("LERCH_QUAD_ABS_TOL", "1e-9")
    configured = Settings()
    assert configured.max_order == 10
    assert math.isclose(configured.quad_abs_tol, 1e-9)
    monkeypatch.setenv("LERCH_MAX_ORDER", "500")
    with pytest.raises(ValidationError):
        Settings()
