from __future__ import annotations

import argparse
from typing import Callable, Union

from models.cli import CliRequest, OutputFormat
from models.coefficients import CoefficientPath
from models.common import parse_complex

Rendered = Union[str, bytes]
Handler = Callable[[CliRequest], Rendered]


def complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def order_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"order must be >= 1, got {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def output_options() -> argparse.ArgumentParser:
    """Options every sub-command accepts."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--format", dest="output", choices=[f.value for f in OutputFormat], default="human")
    parent.add_argument("--out", dest="out_path", default=None, help="write output to this file instead of stdout")
    parent.add_argument("-v", "--verbose", action="store_true", help="include order, remainder and diagnostics")
    return parent


def path_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--path", choices=[p.value for p in CoefficientPath], default=CoefficientPath.auto.value)
