from __future__ import annotations

import argparse
import sys

from commands import check, coeffs, error_table, eval_eta, eval_f, eval_phi, sweep

USAGE_EXIT = 64


class CliParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def build_parser() -> CliParser:
    parser = CliParser(
        prog="lerch",
        description="Large-a expansions of the Lerch transcendent and the finite sums eta(z,s,m).",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)
    for module in (eval_f, eval_eta, eval_phi, coeffs, error_table, sweep, check):
        module.register(subparsers)
    return parser
