from __future__ import annotations

import argparse

from commands._common import Rendered, complex_arg, order_arg, output_options
from commands.eval_f import _render, _render_value
from models.cli import CliRequest
from services.expansion import expand_phi_classic
from services.oracles import phi_series


def register(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser(
        "eval-phi",
        parents=[output_options()],
        help="evaluate Phi(z,s,a) off the cut [1, inf)",
    )
    p.add_argument("--z", type=complex_arg, required=True)
    p.add_argument("--s", type=complex_arg, required=True)
    p.add_argument("--a", type=complex_arg, required=True)
    p.add_argument("--order", type=order_arg, default=8)
    p.add_argument("--method", choices=("classic", "series"), default="classic")
    p.set_defaults(command="eval-phi", handler=run)


def run(request: CliRequest) -> Rendered:
    if request.method == "series":
        return _render_value(phi_series(request.z, request.s, request.a), request, "series")
    return _render(expand_phi_classic(request.z, request.s, request.a, request.order), request)
