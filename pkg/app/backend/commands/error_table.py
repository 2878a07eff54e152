from __future__ import annotations

import argparse

from commands._common import Rendered, output_options
from models.cli import CliRequest, OutputFormat
from services import output
from services.validation import reproduce_error_table


def register(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser(
        "error-table",
        aliases=["table1"],
        parents=[output_options()],
        help="recompute the published relative-error table (36 cells)",
    )
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--stamp", action="store_true", help="record a UTC timestamp in the report metadata")
    p.set_defaults(command="error-table", handler=run)


def run(request: CliRequest) -> Rendered:
    report = reproduce_error_table(workers=request.workers, stamp=request.stamp)
    if request.output == OutputFormat.json:
        return output.report_to_json(report)
    if request.output == OutputFormat.csv:
        return output.report_to_csv(report)
    return output.report_to_human(report)
