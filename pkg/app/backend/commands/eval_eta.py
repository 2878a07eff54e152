from __future__ import annotations

import argparse

from commands._common import Rendered, complex_arg, order_arg, output_options, positive_float
from commands.eval_f import _render
from models.cli import CliRequest
from services.expansion import EtaMethod, evaluate_eta


def register(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser(
        "eval-eta",
        parents=[output_options()],
        help="evaluate the finite sum eta(z,s,m) = sum_{n=1}^{m} z^n/n^s",
    )
    p.add_argument("--z", type=complex_arg, required=True)
    p.add_argument("--s", type=complex_arg, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--method", choices=[e.value for e in EtaMethod], default=EtaMethod.direct.value)
    p.add_argument("--order", type=order_arg, default=None, help="asymptotic truncation order")
    p.add_argument("--tol", type=positive_float, default=1e-14, help="convergent stopping tolerance")
    p.set_defaults(command="eval-eta", handler=run)


def run(request: CliRequest) -> Rendered:
    result = evaluate_eta(request.z, request.s, request.m, request.method or EtaMethod.direct, request.order, request.tol)
    return _render(result, request)
