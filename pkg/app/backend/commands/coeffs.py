from __future__ import annotations

import argparse

from commands._common import Rendered, complex_arg, order_arg, output_options, path_option
from models.cli import CliRequest, OutputFormat
from services import output
from services.coefficients import coefficient_table


def register(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser(
        "coeffs",
        parents=[output_options()],
        help="print the expansion coefficients C_n(z,a)",
    )
    p.add_argument("--z", type=complex_arg, required=True)
    p.add_argument("--a", type=complex_arg, required=True)
    p.add_argument("--order", type=order_arg, default=10, help="number of coefficients")
    path_option(p)
    p.set_defaults(command="coeffs", handler=run)


def run(request: CliRequest) -> Rendered:
    table = coefficient_table(request.z, request.a, request.path, request.order)
    if request.output == OutputFormat.json:
        return table.dump_json()
    if request.output == OutputFormat.csv:
        return output.table_to_csv(table)
    return output.table_to_human(table)
