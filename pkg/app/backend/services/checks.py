from __future__ import annotations

import cmath
import logging
import math
from typing import Callable, Iterable, List, Tuple

from models.coefficients import CoefficientPath
from models.validation import CheckOutcome
from services.coefficients import coeff_c, coefficient_table
from services.errors import LerchError
from services.expansion import EtaMethod, evaluate_eta, evaluate_f_convergent, hurwitz_zeta_series
from services.oracles import (
    eta_direct,
    f_quadrature,
    hurwitz_zeta_direct,
    phi_series,
    polylog_series,
    summation_by_parts_residual,
)
from services.reference import f_reference_precise

logger = logging.getLogger("checks")

Case = Tuple[str, Callable[[], float], float]


def rel_diff(x: complex, y: complex) -> float:
    scale = max(abs(x), abs(y))
    return abs(x - y) / scale if scale else 0.0


def _run(name: str, cases: Iterable[Case]) -> CheckOutcome:
    """Each case yields an error measure that must not exceed its bound."""
    worst = 0.0
    count = 0
    failures: List[str] = []
    for label, measure, bound in cases:
        count += 1
        try:
            err = measure()
        except LerchError as exc:
            failures.append(f"{label}: {exc}")
            continue
        worst = max(worst, err)
        if not err <= bound:
            failures.append(f"{label}: {err:.3g} > {bound:.3g}")
    if failures:
        logger.warning("Check %s failed %d of %d cases", name, len(failures), count)
    return CheckOutcome(
        name=name,
        passed=not failures,
        cases=count,
        worst=worst,
        detail="; ".join(failures[:5]) or None,
    )


def _path_agreement() -> Iterable[Case]:
    for z in (2, 5, 1.5):
        for a in (5, 10, 10 + 1j):
            def measure(z=z, a=a) -> float:
                ex = coefficient_table(z, a, CoefficientPath.explicit, 21).big_c
                rec = coefficient_table(z, a, CoefficientPath.recurrence, 21).big_c
                worst = max(rel_diff(x, y) for x, y in zip(ex, rec))
                if complex(a).imag == 0:
                    direct = coefficient_table(z, a, CoefficientPath.integer_direct, 21).big_c
                    worst = max(worst, max(rel_diff(x, y) for x, y in zip(ex, direct)))
                return worst

            yield f"z={z} a={a}", measure, 1e-9
    # z=1: Bernoulli branch against the recurrence
    for a in (3, 7.5):
        def at_one(a=a) -> float:
            branch = coefficient_table(1, a, CoefficientPath.explicit, 16).big_c
            rec = coefficient_table(1, a, CoefficientPath.recurrence, 16).big_c
            worst = max(rel_diff(x, y) for x, y in zip(branch, rec))
            if float(a).is_integer():
                direct = coefficient_table(1, a, CoefficientPath.integer_direct, 16).big_c
                worst = max(worst, max(rel_diff(x, y) for x, y in zip(branch, direct)))
            return worst

        yield f"z=1 a={a}", at_one, 1e-9


def _vanishing() -> Iterable[Case]:
    for z in (1, 2, 5, 0.5):
        for path in (CoefficientPath.explicit, CoefficientPath.recurrence, CoefficientPath.integer_direct):
            yield (
                f"C_n(z={z}, a=1) {path.value}",
                lambda z=z, path=path: max(abs(c) for c in coefficient_table(z, 1, path, 21).big_c),
                1e-12,
            )
        for path in (CoefficientPath.explicit, CoefficientPath.recurrence):
            def at_zero(z=z, path=path) -> float:
                big_c = coefficient_table(z, 0, path, 21).big_c
                return max(abs(big_c[0] - 1), *(abs(c) for c in big_c[1:]))

            yield f"C_n(z={z}, a=0) {path.value}", at_zero, 1e-10


def _c_recurrence() -> Iterable[Case]:
    for z in (2, 5):
        def measure(z=z) -> float:
            worst = 0.0
            q = z / (1 - z)
            for n in range(1, 16):
                rhs = q * sum((-1) ** (n - k) * coeff_c(k, z) / math.factorial(n - k) for k in range(n))
                worst = max(worst, rel_diff(coeff_c(n, z), rhs))
            return worst

        yield f"z={z}", measure, 1e-10


def _triangle_integer() -> Iterable[Case]:
    for z in (1, 2, 5):
        for s in (1, 2, 0.5):
            for m in (3, 7, 15):
                def measure(z=z, s=s, m=m) -> float:
                    direct = -cmath.exp(-m * cmath.log(z)) * eta_direct(z, s, m - 1)
                    conv = evaluate_f_convergent(z, s, m, 1e-14).value
                    quad = f_quadrature(z, s, m)
                    return max(rel_diff(direct, conv), rel_diff(direct, quad), rel_diff(conv, quad))

                yield f"z={z} s={s} m={m}", measure, 1e-8


def _triangle_disc() -> Iterable[Case]:
    for z in (0.3, -0.5):
        for s in (1.5, 2):
            for a in (2.5, 6):
                def measure(z=z, s=s, a=a) -> float:
                    series = phi_series(z, s, a) - polylog_series(z, s) * cmath.exp(-a * cmath.log(z))
                    quad = f_quadrature(z, s, a)
                    precise = f_reference_precise(z, s, a)
                    return max(rel_diff(series, quad), rel_diff(series, precise), rel_diff(quad, precise))

                yield f"z={z} s={s} a={a}", measure, 1e-8


def _eta_recursion() -> Iterable[Case]:
    for method in EtaMethod:
        for z in (1, 2, 5):
            for s in (1, 2):
                def measure(z=z, s=s, method=method) -> float:
                    # step error relative to the sums themselves; at z=1 the step is far smaller than eta
                    worst = 0.0
                    prev = evaluate_eta(z, s, 1, method, tol=1e-16).value
                    for m in range(2, 51):
                        cur = evaluate_eta(z, s, m, method, tol=1e-16).value
                        worst = max(worst, abs(cur - prev - z**m / m**s) / abs(cur))
                        prev = cur
                    return worst

                yield f"{method.value} z={z} s={s}", measure, 1e-12


def _by_parts_decay() -> Iterable[Case]:
    for z, s, m in ((2, 2, 10), (3, 1, 5)):
        def measure(z=z, s=s, m=m) -> float:
            residuals = [summation_by_parts_residual(z, s, m, d) for d in range(3, 37)]
            # growth between consecutive depths; rounding noise near the floor is tolerated
            return max(max(b - a for a, b in zip(residuals, residuals[1:])), 0.0)

        yield f"z={z} s={s} m={m}", measure, 1e-14


def _hurwitz() -> Iterable[Case]:
    yield "zeta(2,2)", lambda: rel_diff(hurwitz_zeta_series(2, 2), math.pi**2 / 6 - 1), 1e-10
    for s, m in ((2, 10), (3, 5)):
        yield (
            f"zeta({s},{m})",
            lambda s=s, m=m: rel_diff(hurwitz_zeta_series(s, m), hurwitz_zeta_direct(s, m)),
            1e-8,
        )
    for s, m in ((2, 3), (3.5, 4)):
        yield (
            f"shift s={s} m={m}",
            lambda s=s, m=m: rel_diff(hurwitz_zeta_direct(s, m) - hurwitz_zeta_direct(s, m + 1), m ** (-s)),
            1e-12,
        )


PROPERTIES: List[Tuple[str, Callable[[], Iterable[Case]]]] = [
    ("coefficient-path-agreement", _path_agreement),
    ("coefficients-vanish-at-a-0-and-1", _vanishing),
    ("c-recurrence", _c_recurrence),
    ("oracle-triangle-integer-a", _triangle_integer),
    ("oracle-triangle-unit-disc", _triangle_disc),
    ("eta-recursion", _eta_recursion),
    ("summation-by-parts-decay", _by_parts_decay),
    ("hurwitz-series", _hurwitz),
]


def run_property_suite() -> List[CheckOutcome]:
    return [_run(name, cases()) for name, cases in PROPERTIES]
