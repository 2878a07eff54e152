from __future__ import annotations

import argparse

from commands._common import Rendered, complex_arg, order_arg, output_options, path_option, positive_float
from models.cli import CliRequest, OutputFormat
from models.common import format_complex, is_positive_integer
from models.expansion import ExpansionResult
from services import output
from services.errors import UsageError
from services.expansion import evaluate_f_convergent, expand_f, expand_f_optimal, split_f
from services.oracles import f_quadrature
from services.reference import f_reference_precise

METHODS = ("asymptotic", "convergent", "quadrature", "precise")


def register(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser(
        "eval-f",
        parents=[output_options()],
        help="evaluate F(z,s,a) = Phi(z,s,a) - Li_s(z) z^-a",
    )
    p.add_argument("--z", type=complex_arg, required=True)
    p.add_argument("--s", type=complex_arg, required=True)
    p.add_argument("--a", type=complex_arg, required=True)
    p.add_argument("--order", type=order_arg, default=None, help="truncation order (default: smallest term)")
    p.add_argument("--method", choices=METHODS, default="asymptotic")
    p.add_argument("--tol", type=positive_float, default=1e-14)
    p.add_argument("--split", action="store_true", help="print the z-only and z^(1-a) parts separately")
    path_option(p)
    p.set_defaults(command="eval-f", handler=run)


def _render(result: ExpansionResult, request: CliRequest) -> Rendered:
    if request.output == OutputFormat.json:
        return output.expansion_to_json(result)
    if request.output == OutputFormat.csv:
        return output.expansion_to_csv(result)
    return output.expansion_to_human(result, request.verbose)


def _render_value(value: complex, request: CliRequest, method: str) -> Rendered:
    if request.output == OutputFormat.json:
        return output.dumps({"value": [value.real, value.imag], "method": method})
    if request.output == OutputFormat.csv:
        return f"value_re,value_im\n{value.real:.17g},{value.imag:.17g}\n"
    return format_complex(value) + "\n"


def run(request: CliRequest) -> Rendered:
    z, s, a = request.z, request.s, request.a
    if request.split:
        order = request.order or 10
        parts = split_f(z, s, a, order)
        if request.output == OutputFormat.json:
            return output.dumps(parts.model_dump(mode="json"))
        return output.split_to_human(parts)

    method = request.method or "asymptotic"
    if method == "asymptotic":
        if request.order is None:
            return _render(expand_f_optimal(z, s, a, path=request.path), request)
        return _render(expand_f(z, s, a, request.order, request.path), request)
    if method == "convergent":
        if not is_positive_integer(a):
            raise UsageError(f"convergent method needs a positive integer a, got {format_complex(a)}")
        return _render(evaluate_f_convergent(z, s, int(a.real), request.tol, request.order), request)
    if method == "quadrature":
        return _render_value(f_quadrature(z, s, a), request, method)
    return _render_value(f_reference_precise(z, s, a), request, method)
