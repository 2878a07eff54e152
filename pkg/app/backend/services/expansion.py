from __future__ import annotations

import cmath
import logging
from enum import Enum
from typing import Iterator, List, Optional, Tuple

import numpy as np
from scipy import special

from models.coefficients import CoefficientPath
from models.expansion import ExpansionResult, SplitResult
from services.coefficients import c_prefix, coefficient_table, conditioning_note, mp_coefficients, resolve_path
from services.errors import DomainError, TruncationError, UsageError
from services.oracles import eta_direct
from services.precision import to_mp, working_context
from services.summation import ComplexAccumulator, compensated_sum
from settings import settings

logger = logging.getLogger("expansion")

HEURISTIC = "remainder=heuristic, not a proven bound"
EXTRA_DIGITS = 20


class EtaMethod(str, Enum):
    asymptotic = "asymptotic"
    convergent = "convergent"
    direct = "direct"


def _finite(**values: complex) -> None:
    for name, v in values.items():
        if not cmath.isfinite(complex(v)):
            raise DomainError(f"{name} must be finite, got {v!r}")


def _check_large_a(z: complex, s: complex, a: complex) -> None:
    _finite(z=z, s=s, a=a)
    if z == 0:
        raise DomainError("z must be nonzero")
    if s.real <= 0:
        raise DomainError("Re s > 0 required (large-a expansion of F)")
    if a.real <= 1:
        raise DomainError("Re a > 1 required (large-a expansion of F)")


def _integer_m(m) -> int:
    if isinstance(m, complex):
        if m.imag != 0.0 or not float(m.real).is_integer():
            raise UsageError(f"m must be an integer, got {m!r}")
        m = m.real
    if isinstance(m, float):
        if not m.is_integer():
            raise UsageError(f"m must be an integer, got {m!r}")
        m = int(m)
    if not isinstance(m, int) or isinstance(m, bool):
        raise UsageError(f"m must be an integer, got {m!r}")
    return m


def integer_direct_terms(z: complex, s: complex, m: int) -> Iterator[complex]:
    """C_n(z,m) (s)_n / m^(n+s) for n = 0, 1, ... in overflow-free scaled form.

    term_n = -m^(-s) (s)_n/n! sum_{k<m} z^(-k) (k/m)^n
    """
    ks = np.arange(1, m, dtype=float)
    weights = np.exp(-ks * cmath.log(z))
    ratio = ks / m
    powers = np.ones_like(ratio)
    lead = -cmath.exp(-s * cmath.log(m))
    w = 1 + 0j  # (s)_n / n!
    n = 0
    while True:
        yield lead * w * complex(np.sum(powers * weights))
        n += 1
        w *= (s + n - 1) / n
        powers = powers * ratio


def _coefficient_terms(z: complex, s: complex, a: complex, path: CoefficientPath, count: int) -> tuple[List[complex], List[str]]:
    if path == CoefficientPath.integer_direct:
        gen = integer_direct_terms(z, s, int(a.real))
        terms = [next(gen) for _ in range(count)]
        note = conditioning_note(z)
        return terms, [note] if note else []
    table = coefficient_table(z, a, path, count)
    log_a = cmath.log(a)
    terms: List[complex] = []
    poch = 1 + 0j
    for n, c in enumerate(table.big_c):
        terms.append(c * poch * cmath.exp(-(n + s) * log_a))
        poch *= s + n
    return terms, list(table.notes)


def expand_f(
    z: complex,
    s: complex,
    a: complex,
    order: int,
    path: CoefficientPath | str = CoefficientPath.auto,
) -> ExpansionResult:
    """Truncated large-a expansion sum_{n<order} C_n(z,a) (s)_n / a^(n+s) of F(z,s,a)."""
    z, s, a = complex(z), complex(s), complex(a)
    if not isinstance(order, int) or order < 1:
        raise UsageError(f"order must be a positive integer, got {order!r}")
    if order > settings.max_order:
        raise UsageError(f"order {order} exceeds the configured maximum {settings.max_order}")
    _check_large_a(z, s, a)
    resolved = resolve_path(a, path)

    all_terms, notes = _coefficient_terms(z, s, a, resolved, order + 1)
    terms = all_terms[:order]
    omitted = abs(all_terms[order])
    z_pow = abs(cmath.exp((1 - a) * cmath.log(z)))
    smallest = min(range(len(all_terms)), key=lambda k: abs(all_terms[k]))
    diagnostics = [f"path={resolved.value}", HEURISTIC, f"smallest-term={smallest}", *notes]
    value = compensated_sum(terms)
    logger.debug("expand_f z=%s s=%s a=%s N=%d -> %s", z, s, a, order, value)
    return ExpansionResult(
        value=value,
        order=order,
        remainder_estimate=omitted + z_pow,
        terms=terms,
        diagnostics=diagnostics,
    )


def expand_f_extended(
    z: complex,
    s: complex,
    a: complex,
    order: int,
    path: CoefficientPath | str = CoefficientPath.auto,
) -> Tuple[complex, complex]:
    """expand_f's truncated sum carried in mpmath, returned as a (head, tail) pair of doubles.

    head is the rounded sum and tail what rounding dropped, so differences against another
    extended value keep about 30 digits.
    """
    z, s, a = complex(z), complex(s), complex(a)
    if not isinstance(order, int) or order < 1:
        raise UsageError(f"order must be a positive integer, got {order!r}")
    if order > settings.max_order:
        raise UsageError(f"order {order} exceeds the configured maximum {settings.max_order}")
    _check_large_a(z, s, a)
    resolved = resolve_path(a, path)
    if resolved == CoefficientPath.integer_direct:
        dps = settings.reference_dps + EXTRA_DIGITS
    else:
        # digits lost to cancellation in the coefficients, plus headroom
        dps = coefficient_table(z, a, resolved, order).working_dps + EXTRA_DIGITS

    ctx = working_context(dps)
    big_c = mp_coefficients(ctx, z, a, resolved, order)
    ss, log_a = to_mp(ctx, s), ctx.log(to_mp(ctx, a))
    total = ctx.fsum(big_c[n] * ctx.rf(ss, n) * ctx.exp(-(n + ss) * log_a) for n in range(order))
    head = complex(total)
    return head, complex(total - to_mp(ctx, head))


def select_truncation(z: complex, s: complex, a: complex, max_order: Optional[int] = None) -> int:
    """Order N* whose term |C_N (s)_N / a^(N+s)| is the smallest in 1..max_order."""
    z, s, a = complex(z), complex(s), complex(a)
    _check_large_a(z, s, a)
    cap = settings.max_order if max_order is None else min(max_order, settings.max_order)
    if cap < 1:
        raise UsageError(f"max_order must be >= 1, got {max_order}")
    path = resolve_path(a)
    if path == CoefficientPath.integer_direct:
        return cap
    terms, _ = _coefficient_terms(z, s, a, path, cap + 1)
    return min(range(1, cap + 1), key=lambda n: abs(terms[n]))


def expand_f_optimal(
    z: complex,
    s: complex,
    a: complex,
    max_order: Optional[int] = None,
    path: CoefficientPath | str = CoefficientPath.auto,
) -> ExpansionResult:
    """expand_f truncated just before its smallest term."""
    order = select_truncation(z, s, a, max_order)
    result = expand_f(z, s, a, order, path)
    result.diagnostics.append("truncation=smallest-term")
    return result


def evaluate_f_convergent(
    z: complex,
    s: complex,
    m: int,
    tol: float = 1e-14,
    max_order: Optional[int] = None,
) -> ExpansionResult:
    """F(z,s,m) for integer m >= 2 by summing the integer-a series until it settles."""
    z, s = complex(z), complex(s)
    _finite(z=z, s=s)
    m = _integer_m(m)
    if m < 2:
        raise UsageError(f"convergent series needs integer m >= 2, got {m}")
    if s.real <= 0:
        raise DomainError("Re s > 0 required (convergent integer-a series of F)")
    if abs(z) < 1:
        raise DomainError(f"|z| >= 1 required (convergent integer-a series of F), got |z|={abs(z):.6g}")
    if not tol > 0:
        raise UsageError(f"tol must be > 0, got {tol}")
    cap = settings.convergent_max_order if max_order is None else max_order

    acc = ComplexAccumulator()
    terms: List[complex] = []
    small = 0
    for term in integer_direct_terms(z, s, m):
        terms.append(term)
        acc.add(term)
        if abs(term) < tol * abs(acc.value):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        if len(terms) >= cap:
            raise TruncationError(
                f"convergent series for F(z={z}, s={s}, m={m}) not settled after {cap} terms",
                best=acc.value,
                order=cap,
            )
    logger.debug("convergent F z=%s s=%s m=%d settled after %d terms", z, s, m, len(terms))
    return ExpansionResult(
        value=acc.value,
        order=len(terms),
        remainder_estimate=abs(terms[-1]) * m,
        terms=terms,
        diagnostics=[
            "path=integer-direct",
            HEURISTIC,
            f"stop=three consecutive terms below tol={tol:g} after {len(terms)} terms",
        ],
    )


def _scaled(result: ExpansionResult, factor: complex, extra: List[str]) -> ExpansionResult:
    return ExpansionResult(
        value=factor * result.value,
        order=result.order_used,
        remainder_estimate=abs(factor) * result.remainder_estimate,
        terms=[factor * t for t in result.terms],
        diagnostics=[*result.diagnostics, *extra],
    )


def evaluate_eta(
    z: complex,
    s: complex,
    m: int,
    method: EtaMethod | str = EtaMethod.direct,
    order: Optional[int] = None,
    tol: float = 1e-14,
) -> ExpansionResult:
    """eta(z,s,m) = sum_{n=1}^{m} z^n/n^s, through F when the method is not direct."""
    method = EtaMethod(method)
    z, s = complex(z), complex(s)
    m = _integer_m(m)
    if method == EtaMethod.direct:
        if m < 0:
            raise UsageError(f"m must be >= 0, got {m}")
        value = eta_direct(z, s, m)
        return ExpansionResult(value=value, order=m, remainder_estimate=0.0, diagnostics=["method=direct"])
    if m < 1:
        raise UsageError(f"m must be >= 1 for the {method.value} method, got {m}")
    factor = -cmath.exp((m + 1) * cmath.log(z)) if z != 0 else 0j
    extra = [f"method={method.value}"]
    if method == EtaMethod.convergent:
        f = evaluate_f_convergent(z, s, m + 1, tol)
    elif order is not None:
        f = expand_f(z, s, m + 1, order)
    elif abs(z) >= 1:
        # a = m+1 is an integer: the expansion converges, so sum it out instead of capping it
        f = evaluate_f_convergent(z, s, m + 1, tol)
        extra.append("truncation=convergent")
    else:
        f = expand_f_optimal(z, s, m + 1)
    return _scaled(f, factor, extra)


def eta_expansion(z: complex, s: complex, m: int, order: int) -> complex:
    """eta(z,s,m-1) = -z^m F(z,s,m) from the large-m expansion of F."""
    m = _integer_m(m)
    if m < 2:
        raise UsageError(f"m must be >= 2, got {m}")
    z = complex(z)
    return -cmath.exp(m * cmath.log(z)) * expand_f(z, s, m, order).value


def expand_phi_classic(z: complex, s: complex, a: complex, order: int) -> ExpansionResult:
    """Large-a expansion sum c_n(z) (s)_n / a^(n+s) of Phi(z,s,a) off the cut [1, inf)."""
    z, s, a = complex(z), complex(s), complex(a)
    _finite(z=z, s=s, a=a)
    if z.imag == 0.0 and z.real >= 1:
        raise DomainError("z on [1, inf): use expand_f for the pole-free combination F")
    if s.real <= 0:
        raise DomainError("Re s > 0 required")
    if a.real <= 0:
        raise DomainError("Re a > 0 required")
    if not isinstance(order, int) or order < 1:
        raise UsageError(f"order must be a positive integer, got {order!r}")
    if order > settings.max_order:
        raise UsageError(f"order {order} exceeds the configured maximum {settings.max_order}")

    # c_n vanishes for every other n at z = -1; look one term further.
    c = c_prefix(z, order + 2)
    log_a = cmath.log(a)
    all_terms: List[complex] = []
    poch = 1 + 0j
    for n in range(order + 2):
        all_terms.append(c[n] * poch * cmath.exp(-(n + s) * log_a))
        poch *= s + n
    terms = all_terms[:order]
    return ExpansionResult(
        value=compensated_sum(terms),
        order=order,
        remainder_estimate=max(abs(all_terms[order]), abs(all_terms[order + 1])),
        terms=terms,
        diagnostics=["coefficients=c_n", HEURISTIC],
    )


def split_f(z: complex, s: complex, a: complex, order: int) -> SplitResult:
    """Separate the expansion into its z-only part and its z^(1-a) part.

    C_k = c_k - z^(1-a) p_k, so the two parts add up to expand_f on the explicit path.
    """
    z, s, a = complex(z), complex(s), complex(a)
    if z.imag != 0.0 or z.real <= 1:
        raise DomainError("split needs real z > 1")
    _check_large_a(z, s, a)
    if not isinstance(order, int) or order < 1:
        raise UsageError(f"order must be a positive integer, got {order!r}")
    if order > settings.max_order:
        raise UsageError(f"order {order} exceeds the configured maximum {settings.max_order}")

    table = coefficient_table(z, a, CoefficientPath.explicit, order)
    log_a = cmath.log(a)
    lead = ComplexAccumulator()
    poly = ComplexAccumulator()
    poch = 1 + 0j
    for k in range(order):
        scale = poch * cmath.exp(-(k + s) * log_a)
        lead.add(table.c[k] * scale)
        poly.add(table.p[k] * scale)
        poch *= s + k
    z_pow = cmath.exp((1 - a) * cmath.log(z))
    return SplitResult(leading=lead.value, exponential=-z_pow * poly.value, order=order)


def hurwitz_zeta_series(
    s: complex,
    m: int,
    tol: float = 1e-14,
    zeta_s: Optional[complex] = None,
) -> complex:
    """zeta(s,m) = zeta(s) + F(1,s,m) through the convergent integer-a series."""
    s = complex(s)
    _finite(s=s)
    if s.real <= 1:
        raise DomainError("Re s > 1 required")
    m = _integer_m(m)
    if m < 2:
        raise UsageError(f"m must be >= 2, got {m}")
    if zeta_s is None:
        if s.imag != 0.0:
            raise UsageError("zeta(s) must be supplied for complex s")
        zeta_s = float(special.zeta(s.real, 1))
    return complex(zeta_s) + evaluate_f_convergent(1, s, m, tol).value
