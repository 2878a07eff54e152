from __future__ import annotations

import argparse

from commands._common import Rendered, complex_arg, order_arg, output_options
from models.cli import CliRequest, OutputFormat
from services import output
from services.validation import sweep_error_profile

DEFAULT_ORDERS = {"z": [1, 3, 5], "a": [2, 5, 10]}


def register(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser(
        "sweep",
        parents=[output_options()],
        help="relative error of the expansion along z (fixed a) or along a (fixed z)",
    )
    p.add_argument("--axis", choices=("z", "a"), required=True)
    p.add_argument("--samples", type=int, default=91)
    p.add_argument("--z", type=complex_arg, default=None, help="fixed z for a-axis sweeps (default 2)")
    p.add_argument("--a", type=complex_arg, default=None, help="fixed a for z-axis sweeps (default 5)")
    p.add_argument("--s", type=complex_arg, default=1 + 0j)
    p.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"), default=None)
    p.add_argument("--orders", nargs="+", type=order_arg, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(command="sweep", handler=run)


def run(request: CliRequest) -> Rendered:
    axis = request.axis or "z"
    kwargs = {}
    if request.range is not None:
        kwargs["z_range" if axis == "z" else "a_range"] = request.range
    dataset = sweep_error_profile(
        axis,
        request.samples,
        z=request.z,
        s=request.s if request.s is not None else 1,
        a=request.a,
        orders=request.orders or DEFAULT_ORDERS[axis],
        workers=request.workers,
        **kwargs,
    )
    if request.output == OutputFormat.json:
        return output.sweep_to_json(dataset)
    if request.output == OutputFormat.csv:
        return output.sweep_to_csv(dataset)
    return output.sweep_to_human(dataset)
