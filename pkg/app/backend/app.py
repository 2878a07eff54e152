from __future__ import annotations

import logging
import pathlib
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from commands import USAGE_EXIT, build_parser
from commands._common import Rendered
from commands.check import PropertyFailure
from models.cli import CliRequest
from services.errors import AccuracyError, DomainError, TruncationError, UsageError
from settings import settings

logger = logging.getLogger("app")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_DOMAIN = 2


def configure_logging() -> None:
    logging.basicConfig(level=getattr(logging, settings.log_level.upper(), logging.INFO))


def _emit(rendered: Rendered, out_path: Optional[str]) -> None:
    data = rendered.encode("utf-8") if isinstance(rendered, str) else rendered + b"\n"
    if out_path:
        pathlib.Path(out_path).write_bytes(data)
        logger.info("Wrote %d bytes to %s", len(data), out_path)
        return
    sys.stdout.write(data.decode("utf-8"))
    sys.stdout.flush()


def run(request: CliRequest, handler) -> int:
    """Execute one request and map failures to exit statuses."""
    try:
        _emit(handler(request), request.out_path)
        return EXIT_OK
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except TruncationError as exc:
        print(f"truncation: {exc} (best value {exc.best!r} after {exc.order} terms)", file=sys.stderr)
        return EXIT_FAILED
    except AccuracyError as exc:
        best = f" (best estimate {exc.best!r})" if exc.best is not None else ""
        print(f"accuracy: {exc}{best}", file=sys.stderr)
        return EXIT_FAILED
    except PropertyFailure as exc:
        _emit(exc.rendered, request.out_path)
        print(f"check: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except Exception:  # noqa: BLE001
        logger.exception("Unhandled exception in %s", request.command.value)
        return EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k != "handler" and v is not None}
    try:
        request = CliRequest.model_validate(params)
    except ValidationError as exc:
        parser.error(str(exc.errors()[0]["msg"]))
    configure_logging()
    logger.debug(
        "Config: max_order=%d coefficient_dps=%d..%d quad_abs_tol=%g quad_rel_tol=%g workers=%d",
        settings.max_order,
        settings.coefficient_dps,
        settings.coefficient_max_dps,
        settings.quad_abs_tol,
        settings.quad_rel_tol,
        settings.workers,
    )
    return run(request, args.handler)


if __name__ == "__main__":
    sys.exit(main())
