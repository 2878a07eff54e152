from __future__ import annotations

import cmath
import logging
import math
import threading
from typing import Optional, Tuple

from cachetools import LRUCache, cached
from cachetools.keys import hashkey

from services.errors import AccuracyError, DomainError
from services.precision import to_mp, working_context
from settings import settings

logger = logging.getLogger("reference")

_cache: LRUCache = LRUCache(maxsize=settings.coefficient_cache_size)


def f_reference_precise(z: complex, s: complex, a: complex, dps: Optional[int] = None) -> complex:
    """F(z,s,a) from the pole-free integral by tanh-sinh quadrature at `dps` digits.

    Resolves relative errors far below what a double-precision quadrature can.
    """
    return f_reference_extended(z, s, a, dps)[0]


def f_reference_extended(z: complex, s: complex, a: complex, dps: Optional[int] = None) -> Tuple[complex, complex]:
    """f_reference_precise as a (head, tail) pair of doubles: head rounded, tail the remainder."""
    z, s, a = complex(z), complex(s), complex(a)
    for name, v in (("z", z), ("s", s), ("a", a)):
        if not cmath.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")
    if z == 0:
        raise DomainError("z must be nonzero")
    if s.real <= 0 or a.real <= 0:
        raise DomainError("Re s > 0 and Re a > 0 required for the integral representation")
    return _reference(z, s, a, dps or settings.reference_dps)


@cached(_cache, key=lambda z, s, a, dps: hashkey(z, s, a, dps), lock=threading.RLock())
def _reference(z: complex, s: complex, a: complex, dps: int) -> Tuple[complex, complex]:
    ctx = working_context(dps + 10)
    zz, ss, aa = to_mp(ctx, z), to_mp(ctx, s), to_mp(ctx, a)
    log_z = ctx.log(zz)
    b = 1 - aa

    def integrand(x):
        t = log_z - x
        if t == 0:
            ratio = b
        else:
            ratio = ctx.expm1(b * t) / ctx.expm1(t)
        return ctx.exp((ss - 1) * ctx.log(x) - aa * x) * ratio

    points = {0.0, 2 / a.real, 8 / a.real}
    if z.imag == 0.0 and z.real > 1:
        points.add(math.log(z.real))
    nodes = [ctx.mpf(p) for p in sorted(points)] + [ctx.inf]
    value, err = ctx.quad(integrand, nodes, error=True)
    result = value / ctx.gamma(ss)
    rel = err / abs(value) if value != 0 else err
    logger.debug("Precise reference z=%s s=%s a=%s: %s (quad error %s)", z, s, a, result, err)
    if rel > ctx.mpf(10) ** (-(dps // 2)):
        raise AccuracyError(
            f"precise reference quadrature error {float(rel):.3g} too large",
            best=complex(result),
            error_estimate=float(abs(err / ctx.gamma(ss))),
        )
    head = complex(result)
    return head, complex(result - to_mp(ctx, head))
