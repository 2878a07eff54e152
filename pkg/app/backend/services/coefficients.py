from __future__ import annotations

import cmath
import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

import mpmath
import numpy as np
from cachetools import LRUCache, cached
from cachetools.keys import hashkey

from models.coefficients import CoefficientPath, CoefficientTable
from models.common import is_positive_integer
from services.errors import DomainError, UsageError
from services.precision import to_mp, working_context
from settings import settings

logger = logging.getLogger("coefficients")

# n! and binomials leave the double range beyond this index.
MAX_INDEX = 170
NEAR_ONE = 1e-3

_bernoulli: List[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def _check_index(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise UsageError(f"index must be an integer, got {n!r}")
    if n < 0:
        raise UsageError(f"index must be >= 0, got {n}")
    if n > MAX_INDEX:
        raise UsageError(f"index {n} exceeds {MAX_INDEX}")


def _check_finite(**values: complex) -> None:
    for name, v in values.items():
        if not cmath.isfinite(complex(v)):
            raise DomainError(f"{name} must be finite, got {v!r}")


# --- Bernoulli numbers and polynomials ---------------------------------------


def _extend_bernoulli(n: int) -> None:
    with _bernoulli_lock:
        for m in range(len(_bernoulli), n + 1):
            # sum_{k=0}^{m} C(m+1, k) B_k = 0
            acc = sum((math.comb(m + 1, k) * _bernoulli[k] for k in range(m)), Fraction(0))
            _bernoulli.append(-acc / (m + 1))


def bernoulli_number(n: int) -> Fraction:
    """B_n with the B_1 = -1/2 convention."""
    if not isinstance(n, int) or n < 0:
        raise UsageError(f"Bernoulli index must be a non-negative integer, got {n!r}")
    if n >= len(_bernoulli):
        _extend_bernoulli(max(n, 64))
    return _bernoulli[n]


def bernoulli_polynomial_coefficients(n: int) -> Tuple[Fraction, ...]:
    """Coefficients of B_n(x), highest power first: entry k multiplies x^(n-k)."""
    if not isinstance(n, int) or n < 0:
        raise UsageError(f"Bernoulli index must be a non-negative integer, got {n!r}")
    return tuple(math.comb(n, k) * bernoulli_number(k) for k in range(n + 1))


def bernoulli_polynomial(n: int, x: complex) -> complex:
    _check_finite(x=x)
    x = complex(x)
    acc = 0j
    for coef in bernoulli_polynomial_coefficients(n):
        acc = acc * x + float(coef)
    return acc


def pochhammer(s: complex, n: int) -> complex:
    """Rising factorial (s)_n = s(s+1)...(s+n-1)."""
    if not isinstance(n, int) or n < 0:
        raise UsageError(f"Pochhammer length must be a non-negative integer, got {n!r}")
    s = complex(s)
    out = 1 + 0j
    for k in range(n):
        out *= s + k
    return out


# --- Working-precision evaluation --------------------------------------------

# A column is (values, scales); scale[k] bounds the magnitude of what was added up
# to form values[k], so |value| far below scale means cancellation down to zero.
Column = Tuple[List, List]
Builder = Callable[[mpmath.MPContext], List[Column]]


def _entries_agree(ctx: mpmath.MPContext, prev: Column, cur: Column, dps_prev: int, dps_cur: int) -> bool:
    for p, c, scale in zip(prev[0], cur[0], cur[1]):
        if abs(p - c) <= ctx.mpf("1e-18") * abs(c):
            continue
        if abs(p) <= ctx.mpf(10) ** (-(dps_prev // 2)) * scale and abs(c) <= ctx.mpf(10) ** (-(dps_cur // 2)) * scale:
            continue
        return False
    return True


def _settle(build: Builder, label: str) -> Tuple[List[List[complex]], int, List[str]]:
    """Run `build` at increasing precision until two consecutive precisions agree."""
    dps = settings.coefficient_dps
    max_dps = max(settings.coefficient_max_dps, dps)
    prev: List[Column] | None = None
    prev_dps = 0
    notes: List[str] = []
    while True:
        ctx = working_context(dps)
        cur = build(ctx)
        if prev is not None and all(_entries_agree(ctx, p, c, prev_dps, dps) for p, c in zip(prev, cur)):
            break
        if dps >= max_dps:
            logger.warning("Coefficient table %s did not settle by %d digits", label, dps)
            notes.append(f"precision: did not settle by {dps} digits")
            break
        prev, prev_dps = cur, dps
        dps = min(2 * dps, max_dps)
    if dps > 2 * settings.coefficient_dps:
        logger.info("Coefficient table %s needed %d digits", label, dps)
    return [[complex(v) for v in values] for values, _ in cur], dps, notes


def _mp_polylog_neg(ctx: mpmath.MPContext, z, count: int) -> Column:
    """Li_0(z), Li_-1(z), ..., Li_-(count-1)(z)."""
    ratio = z / (1 - z)
    base = z / (1 - z) ** 2
    values = [ratio]
    scales = [abs(ratio)]
    for n in range(1, count):
        inner = ctx.mpc(0)
        inner_scale = ctx.mpf(0)
        for k in range(1, n):
            b = math.comb(n, k)
            inner += b * values[k]
            inner_scale += b * scales[k]
        values.append(base + ratio * inner)
        scales.append(abs(base) + abs(ratio) * inner_scale)
    return values, scales


def _mp_c(ctx: mpmath.MPContext, z, count: int) -> Tuple[Column, Column]:
    li = _mp_polylog_neg(ctx, z, count)
    values = [1 / (1 - z)]
    scales = [abs(values[0])]
    fact = 1
    for n in range(1, count):
        fact *= n
        sign = -1 if n % 2 else 1
        values.append(sign * li[0][n] / fact)
        scales.append(li[1][n] / fact)
    return li, (values, scales)


def _mp_explicit(ctx: mpmath.MPContext, z, a, count: int) -> List[Column]:
    _, (c, c_scale) = _mp_c(ctx, z, count)
    am1 = a - 1
    e = [ctx.mpc(1)]
    for k in range(1, count):
        e.append(e[-1] * am1 / k)
    p, p_scale = [], []
    for n in range(count):
        acc = ctx.mpc(0)
        sc = ctx.mpf(0)
        for k in range(n + 1):
            acc += c[n - k] * e[k]
            sc += c_scale[n - k] * abs(e[k])
        p.append(acc)
        p_scale.append(sc)
    w = ctx.exp((1 - a) * ctx.log(z))
    big_c = [c[n] - w * p[n] for n in range(count)]
    big_c_scale = [c_scale[n] + abs(w) * p_scale[n] for n in range(count)]
    return [(c, c_scale), (p, p_scale), (big_c, big_c_scale)]


def _mp_bernoulli_branch(ctx: mpmath.MPContext, a, count: int) -> List[Column]:
    x = a - 1
    values = [1 - a]
    scales = [1 + abs(a)]
    fact = 1
    x_pow = ctx.mpc(1)
    for n in range(1, count):
        fact *= n + 1
        x_pow *= x
        b = bernoulli_number(n + 1)
        b_mp = ctx.mpf(b.numerator) / b.denominator
        poly = ctx.mpc(0)
        poly_scale = ctx.mpf(0)
        for coef in bernoulli_polynomial_coefficients(n + 1):
            coef_mp = ctx.mpf(coef.numerator) / coef.denominator
            poly = poly * x + coef_mp
            poly_scale = poly_scale * abs(x) + abs(coef_mp)
        values.append((b_mp - poly - (n + 1) * x_pow) / fact)
        scales.append((abs(b_mp) + poly_scale + (n + 1) * abs(x_pow)) / fact)
    return [(values, scales)]


def _mp_recurrence(ctx: mpmath.MPContext, z, a, count: int) -> List[Column]:
    am1 = a - 1
    if z == 1:
        values = [1 - a]
        scales = [1 + abs(a)]
        lead = am1  # (a-1)^(n+1)/(n+1)!
        for n in range(1, count):
            lead = lead * am1 / (n + 1)
            acc = -lead
            sc = abs(lead)
            for k in range(n):
                j = n + 1 - k
                term = values[k] / math.factorial(j)
                acc += term if (n - k) % 2 else -term
                sc += scales[k] / math.factorial(j)
            values.append(acc)
            scales.append(sc)
        return [(values, scales)]

    q = z / (1 - z)
    w = ctx.exp((1 - a) * ctx.log(z))
    z_a = ctx.exp(a * ctx.log(z))
    values = [(1 - w) / (1 - z)]
    scales = [(1 + abs(w)) / abs(1 - z)]
    lead = 1 / z_a  # (a-1)^n / (n! z^a)
    for n in range(1, count):
        lead = lead * am1 / n
        acc = -lead
        sc = abs(lead)
        for k in range(n):
            term = values[k] / math.factorial(n - k)
            acc += -term if (n - k) % 2 else term
            sc += scales[k] / math.factorial(n - k)
        values.append(q * acc)
        scales.append(abs(q) * sc)
    return [(values, scales)]


def _integer_direct_column(z: complex, m: int, count: int) -> List[complex]:
    ks = np.arange(1, m, dtype=float)
    weights = np.exp(-ks * cmath.log(z)) if m > 1 else np.zeros(0, dtype=complex)
    t = np.ones_like(ks)
    out: List[complex] = []
    for n in range(count):
        if n:
            t = t * ks / n
        out.append(complex(-np.sum(t * weights)) if m > 1 else 0j)
    if not all(cmath.isfinite(v) for v in out):
        raise UsageError(f"integer-direct coefficients overflow for a={m}; reduce the order")
    return out


def mp_coefficients(ctx: mpmath.MPContext, z: complex, a: complex, path: CoefficientPath, count: int) -> List:
    """C_0..C_{count-1} as numbers of `ctx` on an already resolved path, never rounded."""
    zz, aa = to_mp(ctx, z), to_mp(ctx, a)
    if path == CoefficientPath.integer_direct:
        m = int(complex(a).real)
        weights = [ctx.exp(-k * ctx.log(zz)) for k in range(1, m)]
        return [
            -ctx.fsum(w * ctx.mpf(k) ** n for k, w in enumerate(weights, start=1)) / ctx.factorial(n)
            for n in range(count)
        ]
    if path == CoefficientPath.recurrence:
        return _mp_recurrence(ctx, zz, aa, count)[0][0]
    if complex(z) == 1:
        return _mp_bernoulli_branch(ctx, aa, count)[0][0]
    return _mp_explicit(ctx, zz, aa, count)[2][0]


# --- Tables -------------------------------------------------------------------


@dataclass(frozen=True)
class _Settled:
    c: Tuple[complex, ...]
    p: Tuple[complex, ...]
    big_c: Tuple[complex, ...]
    dps: int
    notes: Tuple[str, ...]


def resolve_path(a: complex, path: CoefficientPath | str = CoefficientPath.auto) -> CoefficientPath:
    path = CoefficientPath(path)
    if path == CoefficientPath.auto:
        return CoefficientPath.integer_direct if is_positive_integer(complex(a)) else CoefficientPath.explicit
    if path == CoefficientPath.integer_direct and not is_positive_integer(complex(a)):
        raise UsageError(f"integer-direct path needs a positive integer a, got {a!r}")
    return path


def conditioning_note(z: complex) -> str | None:
    d = abs(complex(z) - 1)
    if 0 < d < NEAR_ONE:
        return f"conditioning: |z-1|={d:.3g} < {NEAR_ONE:g}, coefficients cancel heavily"
    return None


_table_cache: LRUCache = LRUCache(maxsize=settings.coefficient_cache_size)
_c_cache: LRUCache = LRUCache(maxsize=settings.coefficient_cache_size)


@cached(_table_cache, key=lambda z, a, path, count: hashkey(z, a, path.value, count), lock=threading.RLock())
def _settled_table(z: complex, a: complex, path: CoefficientPath, count: int) -> _Settled:
    label = f"(z={z}, a={a}, path={path.value})"
    if path == CoefficientPath.integer_direct:
        big_c = _integer_direct_column(z, int(a.real), count)
        return _Settled((), (), tuple(big_c), 0, ())

    def build(ctx: mpmath.MPContext) -> List[Column]:
        zz, aa = to_mp(ctx, z), to_mp(ctx, a)
        if path == CoefficientPath.recurrence:
            return _mp_recurrence(ctx, zz, aa, count)
        if z == 1:
            return _mp_bernoulli_branch(ctx, aa, count)
        return _mp_explicit(ctx, zz, aa, count)

    columns, dps, notes = _settle(build, label)
    if path == CoefficientPath.explicit and z != 1:
        c, p, big_c = columns
        return _Settled(tuple(c), tuple(p), tuple(big_c), dps, tuple(notes))
    return _Settled((), (), tuple(columns[0]), dps, tuple(notes))


@cached(_c_cache, key=lambda z, count: hashkey(z, count), lock=threading.RLock())
def _settled_c(z: complex, count: int) -> Tuple[Tuple[complex, ...], Tuple[complex, ...]]:
    def build(ctx: mpmath.MPContext) -> List[Column]:
        li, c = _mp_c(ctx, to_mp(ctx, z), count)
        return [li, c]

    (li, c), _, _ = _settle(build, f"(z={z}, c)")
    return tuple(li), tuple(c)


def coefficient_table(
    z: complex,
    a: complex,
    path: CoefficientPath | str = CoefficientPath.auto,
    order: int = 64,
) -> CoefficientTable:
    """C_0..C_{order-1} for (z, a) on the requested path (plus c_n, p_n on the explicit path)."""
    _check_finite(z=z, a=a)
    z, a = complex(z), complex(a)
    if z == 0:
        raise DomainError("z must be nonzero")
    if order < 1:
        raise UsageError(f"order must be >= 1, got {order}")
    _check_index(order - 1)
    resolved = resolve_path(a, path)
    settled = _settled_table(z, a, resolved, order)
    notes = list(settled.notes)
    note = conditioning_note(z)
    if note:
        logger.warning("Coefficients for z=%s: %s", z, note)
        notes.append(note)
    return CoefficientTable(
        z=z,
        a=a,
        path=resolved,
        c=list(settled.c[:order]),
        p=list(settled.p[:order]),
        C=list(settled.big_c[:order]),
        working_dps=settled.dps,
        notes=notes,
    )


def polylog_neg(n: int, z: complex) -> complex:
    """Li_{-n}(z) for n >= 0."""
    _check_index(n)
    _check_finite(z=z)
    z = complex(z)
    if z == 1:
        raise DomainError("polylog of negative order singular at z=1")
    li, _ = _settled_c(z, n + 1)
    return li[n]


def coeff_c(n: int, z: complex) -> complex:
    """Taylor coefficients of 1/(1 - z e^-x) at x = 0."""
    _check_index(n)
    _check_finite(z=z)
    z = complex(z)
    if z == 1:
        raise DomainError("c_n(z) is undefined at z=1")
    _, c = _settled_c(z, n + 1)
    return c[n]


def c_prefix(z: complex, order: int) -> Sequence[complex]:
    _check_index(order - 1)
    z = complex(z)
    if z == 1:
        raise DomainError("c_n(z) is undefined at z=1")
    _, c = _settled_c(z, order)
    return c[:order]


def poly_p(n: int, z: complex, a: complex) -> complex:
    _check_index(n)
    _check_finite(z=z, a=a)
    z = complex(z)
    if z == 1:
        raise DomainError("p_n(z,a) is undefined at z=1")
    if z == 0:
        raise DomainError("z must be nonzero")
    return coefficient_table(z, a, CoefficientPath.explicit, n + 1).p[n]


def coeff_C(n: int, z: complex, a: complex, path: CoefficientPath | str = CoefficientPath.auto) -> complex:
    """n-th Taylor coefficient of (1 - (z e^-x)^(1-a)) / (1 - z e^-x) at x = 0."""
    _check_index(n)
    return coefficient_table(z, a, path, n + 1).big_c[n]
