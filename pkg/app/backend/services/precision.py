from __future__ import annotations

import threading

import mpmath

_local = threading.local()


def working_context(dps: int) -> mpmath.MPContext:
    """This thread's mpmath context, set to `dps` digits.

    Callers must not hold a context across a call that also asks for one.
    """
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = mpmath.MPContext()
        _local.ctx = ctx
    ctx.dps = dps
    return ctx


def to_mp(ctx: mpmath.MPContext, value: complex):
    value = complex(value)
    return ctx.mpc(value.real, value.imag)
