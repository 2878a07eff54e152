from __future__ import annotations

import argparse

from commands._common import Rendered, output_options
from models.cli import CliRequest, OutputFormat
from services import output
from services.checks import run_property_suite
from services.errors import LerchError


class PropertyFailure(LerchError):
    """Raised after rendering when at least one property failed."""

    def __init__(self, rendered: Rendered, failed: list[str]) -> None:
        super().__init__(f"{len(failed)} propert{'y' if len(failed) == 1 else 'ies'} failed: {', '.join(failed)}")
        self.rendered = rendered


def register(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser(
        "check",
        parents=[output_options()],
        help="run the identity and oracle-agreement property suite",
    )
    p.set_defaults(command="check", handler=run)


def run(request: CliRequest) -> Rendered:
    outcomes = run_property_suite()
    rendered = output.checks_to_json(outcomes) if request.output == OutputFormat.json else output.checks_to_human(outcomes)
    failed = [o.name for o in outcomes if not o.passed]
    if failed:
        raise PropertyFailure(rendered, failed)
    return rendered
