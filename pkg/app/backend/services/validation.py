from __future__ import annotations

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from models.coefficients import CoefficientPath
from models.common import is_positive_integer
from models.validation import (
    ReferenceMethod,
    ReportMetadata,
    SweepDataset,
    SweepRow,
    ValidationReport,
    ValidationRow,
)
from services.errors import AccuracyError, DegenerateReferenceError, DomainError, LerchError, UsageError
from services.expansion import expand_f, expand_f_extended
from services.oracles import eta_direct, f_quadrature
from services.reference import f_reference_extended, f_reference_precise
from settings import settings

logger = logging.getLogger("validation")

TOLERANCE_POLICY = "|rel_error - published| <= max(2% of published, one unit in its third significant digit)"
MIN_SWEEP_A = 1.01

# Published relative errors |1 - approximation/F| keyed by (z, s, a, order).
PUBLISHED: Dict[Tuple[complex, complex, complex, int], float] = {}


def _publish(z: float, s: float, a_values: Sequence[complex], rows: Dict[int, Sequence[float]]) -> None:
    for order, values in rows.items():
        for a, value in zip(a_values, values):
            PUBLISHED[(complex(z), complex(s), complex(a), order)] = value


_publish(2, 1, (5, 10, 20), {5: (7.87e-2, 2.22e-2, 6.21e-4), 10: (2.13e-2, 7.55e-3, 7.36e-5), 15: (6.69e-3, 3.68e-3, 3.24e-5)})
_publish(5, 2, (5, 10, 20), {5: (8.36e-2, 2.57e-3, 5.87e-5), 10: (2.82e-2, 2.89e-4, 1.21e-7), 15: (1.13e-2, 1.23e-4, 2.66e-9)})
_publish(2, 2, (10 + 1j, 30 + 1j, 50 + 1j), {5: (1.60e-1, 3.67e-4, 2.41e-5), 10: (9.14e-2, 1.11e-5, 3.32e-8), 15: (5.92e-2, 3.62e-6, 4.75e-10)})
_publish(5, 3, (10 + 1j, 30 + 1j, 50 + 1j), {5: (9.59e-3, 2.52e-5, 1.91e-6), 10: (2.37e-3, 1.04e-8, 5.78e-11), 15: (1.43e-3, 3.47e-11, 1.35e-14)})


@dataclass(frozen=True)
class Cell:
    z: complex
    s: complex
    a: complex
    order: int


def table_cells() -> List[Cell]:
    """The 36 published cells in block, a, order sequence."""
    return [Cell(z, s, a, n) for (z, s, a, n) in PUBLISHED]


def within_tolerance(rel_error: float, published: float) -> bool:
    unit = 10.0 ** (math.floor(math.log10(published)) - 2)
    return abs(rel_error - published) <= max(0.02 * published, unit)


def reference_value(z: complex, s: complex, a: complex, method: ReferenceMethod | str) -> complex:
    method = ReferenceMethod(method)
    z, s, a = complex(z), complex(s), complex(a)
    if method == ReferenceMethod.mixed:
        method = ReferenceMethod.direct if is_positive_integer(a) else ReferenceMethod.precise
    if method == ReferenceMethod.direct:
        if not is_positive_integer(a):
            raise UsageError(f"direct reference needs a positive integer a, got {a}")
        m = int(a.real)
        # F(z,s,m) = -z^(-m) sum_{k<m} z^k/k^s
        return -cmath.exp(-m * cmath.log(z)) * eta_direct(z, s, m - 1)
    if method == ReferenceMethod.quadrature:
        return f_quadrature(z, s, a)
    return f_reference_precise(z, s, a)


def relative_error(
    z: complex,
    s: complex,
    a: complex,
    order: int,
    reference_method: ReferenceMethod | str = ReferenceMethod.mixed,
    path: CoefficientPath | str = CoefficientPath.auto,
) -> float:
    """|1 - expand_f(z,s,a,order)/F(z,s,a)| against the chosen reference."""
    return _row(Cell(complex(z), complex(s), complex(a), order), reference_method, path).rel_error


def _reference_parts(cell: Cell, method: ReferenceMethod | str) -> Tuple[complex, complex]:
    method = ReferenceMethod(method)
    if method == ReferenceMethod.mixed and not is_positive_integer(cell.a):
        method = ReferenceMethod.precise
    if method == ReferenceMethod.precise:
        return f_reference_extended(cell.z, cell.s, cell.a)
    return reference_value(cell.z, cell.s, cell.a, method), 0j


def _row(cell: Cell, method: ReferenceMethod | str, path: CoefficientPath | str = CoefficientPath.auto) -> ValidationRow:
    reference, reference_tail = _reference_parts(cell, method)
    if abs(reference) < 1e-300:
        raise DegenerateReferenceError(f"reference for F(z={cell.z}, s={cell.s}, a={cell.a}) vanishes")
    approximation, approximation_tail = expand_f_extended(cell.z, cell.s, cell.a, cell.order, path)
    # exact when the heads are close; the tails carry what rounding dropped
    rel = abs((reference - approximation) + (reference_tail - approximation_tail)) / abs(reference)
    published = PUBLISHED.get((cell.z, cell.s, cell.a, cell.order))
    return ValidationRow(
        z=cell.z,
        s=cell.s,
        a=cell.a,
        order=cell.order,
        reference=reference,
        approximation=approximation,
        rel_error=rel,
        published=published,
        passed=published is not None and within_tolerance(rel, published),
    )


def _timestamp() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def reproduce_error_table(workers: Optional[int] = None, stamp: bool = False) -> ValidationReport:
    """Recompute every published cell: integer a against the direct sum, complex a against the precise reference."""
    cells = table_cells()
    with ThreadPoolExecutor(max_workers=workers or settings.workers) as pool:
        rows = list(pool.map(lambda cell: _row(cell, ReferenceMethod.mixed), cells))
    failed = [r for r in rows if not r.passed]
    logger.info("Error table: %d cells, %d outside tolerance", len(rows), len(failed))
    for r in failed:
        logger.warning(
            "Cell z=%s s=%s a=%s n=%d: rel_error=%.3g published=%.3g",
            r.z, r.s, r.a, r.order, r.rel_error, r.published,
        )
    return ValidationReport(
        rows=rows,
        metadata=ReportMetadata(
            reference_method=ReferenceMethod.mixed,
            tolerance_policy=TOLERANCE_POLICY,
            timestamp=_timestamp() if stamp else None,
        ),
    )


def _sweep_row(z: complex, s: complex, a: complex, abscissa: float, orders: Sequence[int]) -> SweepRow:
    method = ReferenceMethod.direct if is_positive_integer(a) else ReferenceMethod.quadrature
    try:
        reference = reference_value(z, s, a, method)
    except AccuracyError as exc:
        logger.warning("Sweep point %s: %s", abscissa, exc)
        return SweepRow(
            abscissa=abscissa,
            approximations=[None] * len(orders),
            rel_errors=[None] * len(orders),
            note=f"reference failed: {exc}",
        )
    approximations: List[Optional[complex]] = []
    errors: List[Optional[float]] = []
    notes: List[str] = []
    for order in orders:
        try:
            approx = expand_f(z, s, a, order, CoefficientPath.explicit).value
        except LerchError as exc:
            approximations.append(None)
            errors.append(None)
            notes.append(f"order {order}: {exc}")
            continue
        approximations.append(approx)
        errors.append(abs(1 - approx / reference) if abs(reference) >= 1e-300 else None)
    return SweepRow(
        abscissa=abscissa,
        reference=reference,
        approximations=approximations,
        rel_errors=errors,
        note="; ".join(notes) or None,
    )


def sweep_error_profile(
    axis: str,
    samples: int,
    *,
    z: Optional[complex] = None,
    s: complex = 1,
    a: Optional[complex] = None,
    z_range: Tuple[float, float] = (1.0, 10.0),
    a_range: Tuple[float, float] = (1.0, 10.0),
    orders: Iterable[int] = (1, 3, 5),
    workers: Optional[int] = None,
) -> SweepDataset:
    """Relative error of expand_f along z (fixed a) or along a (fixed z) for several orders."""
    orders = list(orders)
    if samples < 2:
        raise UsageError(f"samples must be >= 2, got {samples}")
    if not orders or min(orders) < 1:
        raise UsageError("orders must be positive")
    diagnostics: List[str] = ["coefficients=explicit", "approximation=expand_f"]
    s = complex(s)
    if axis == "z":
        a = complex(5 if a is None else a)
        lo, hi = z_range
        if lo < 1:
            raise DomainError("z-axis sweeps cover z >= 1")
        grid = [float(v) for v in np.linspace(lo, hi, samples)]
        points = [(complex(v), s, a, v) for v in grid]
        dataset = SweepDataset(axis="z", s=s, a=a, orders=orders, diagnostics=diagnostics)
    elif axis == "a":
        z = complex(2 if z is None else z)
        lo, hi = a_range
        if lo < MIN_SWEEP_A:
            diagnostics.append(f"a-range lower bound {lo:g} clamped to {MIN_SWEEP_A:g} (expansion needs Re a > 1)")
            lo = MIN_SWEEP_A
        if hi <= lo:
            raise DomainError(f"a-range upper bound must exceed {lo:g}")
        grid = [float(v) for v in np.linspace(lo, hi, samples)]
        points = [(z, s, complex(v), v) for v in grid]
        dataset = SweepDataset(axis="a", z=z, s=s, orders=orders, diagnostics=diagnostics)
    else:
        raise UsageError(f"axis must be 'z' or 'a', got {axis!r}")

    with ThreadPoolExecutor(max_workers=workers or settings.workers) as pool:
        rows = list(pool.map(lambda p: _sweep_row(p[0], p[1], p[2], p[3], orders), points))
    dataset.rows = rows
    logger.info("Sweep along %s: %d samples, orders %s", axis, samples, orders)
    return dataset
