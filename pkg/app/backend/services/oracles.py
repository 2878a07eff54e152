from __future__ import annotations

import cmath
import logging
import math
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy import integrate, special

from models.oracles import EulerMaclaurinResult, QuadratureSettings
from services.coefficients import bernoulli_number, c_prefix, pochhammer
from services.errors import AccuracyError, DomainError, TruncationError, UsageError
from services.summation import ComplexAccumulator
from settings import settings

logger = logging.getLogger("oracles")

# expm1 of larger arguments overflows long before the quotient does.
_OVERFLOW_GUARD = 50.0
EXACT_TERMS = 512
ROUNDING_ULPS = 4
# -log of the smallest tail term reached on |z| = 1
UNIT_CIRCLE_REACH = 50.0
TAIL_TERMS = 48


def _finite(**values: complex) -> None:
    for name, v in values.items():
        if not cmath.isfinite(complex(v)):
            raise DomainError(f"{name} must be finite, got {v!r}")


def _is_nonpositive_integer(v: complex) -> bool:
    return v.imag == 0.0 and v.real <= 0 and float(v.real).is_integer()


def eta_direct(z: complex, s: complex, m: int) -> complex:
    """sum_{n=1}^{m} z^n / n^s.

    Real z with integer s (and m up to EXACT_TERMS) is summed in exact rationals and
    rounded once; everything else by compensated summation.
    """
    _finite(z=z, s=s)
    if m < 0:
        raise UsageError(f"m must be >= 0, got {m}")
    z, s = complex(z), complex(s)
    integer_s = s.imag == 0.0 and float(s.real).is_integer() and abs(s.real) <= 64
    real_z = z.imag == 0.0
    k = int(s.real) if integer_s else 0
    if integer_s and real_z and m <= EXACT_TERMS:
        base = Fraction(z.real)
        zn = Fraction(1)
        total = Fraction(0)
        for n in range(1, m + 1):
            zn *= base
            total += zn / Fraction(n) ** k
        try:
            return complex(float(total))
        except OverflowError:
            pass
    acc = ComplexAccumulator()
    for n in range(1, m + 1):
        zn = complex(z.real**n) if real_z else z**n
        term = None
        if integer_s:
            try:
                term = zn * float(n ** (-k)) if k <= 0 else zn / float(n**k)
            except OverflowError:
                term = None
        if term is None:
            term = zn * cmath.exp(-s * math.log(n))
        acc.add(term)
    return acc.value


def phi_series(z: complex, s: complex, a: complex, tol: float = 1e-16) -> complex:
    """sum_{n>=0} z^n / (a+n)^s inside its disc of convergence."""
    _finite(z=z, s=s, a=a)
    z, s, a = complex(z), complex(s), complex(a)
    if _is_nonpositive_integer(a):
        raise DomainError(f"a must not be a non-positive integer, got {a}")
    r = abs(z)
    if r > 1 + ROUNDING_ULPS * np.finfo(float).eps:
        raise DomainError(f"power series needs |z| <= 1, got |z|={r:.6g}")
    on_circle = abs(r - 1) <= ROUNDING_ULPS * np.finfo(float).eps
    if on_circle and s.real <= 1:
        raise DomainError("power series on |z|=1 needs Re s > 1")
    if on_circle:
        return _phi_unit_circle(z, s, a, tol)
    acc = ComplexAccumulator()
    zn = 1 + 0j
    small = 0
    limit = settings.series_max_terms
    for n in range(limit):
        term = zn * cmath.exp(-s * cmath.log(a + n))
        acc.add(term)
        if abs(term) < tol * abs(acc.value):
            small += 1
            if small >= 3:
                return acc.value
        else:
            small = 0
        if z == 0:
            return acc.value
        zn *= z
    raise TruncationError(f"power series did not converge in {limit} terms", best=acc.value, order=limit)


def _phi_unit_circle(z: complex, s: complex, a: complex, tol: float) -> complex:
    """Power series on |z| = 1: a head summed term by term, then z^N Phi(z,s,a+N) from its large-a expansion.

    N makes |a+N| times the distance from 0 to the nearest pole of 1/(1 - z e^-x) (2 pi at z = 1,
    Euler-Maclaurin) at least UNIT_CIRCLE_REACH + |s|, so the tail terms fall below tol long
    before they turn.
    """
    log_z = 1j * cmath.phase(z)
    spread = 2 * math.pi if log_z == 0 else abs(log_z.imag)
    reach = UNIT_CIRCLE_REACH + abs(s)
    start = max(1, math.ceil(reach / spread - a.real), math.floor(-a.real) + 1)
    if start > settings.series_max_terms:
        raise AccuracyError(f"z={z} too close to 1 for {settings.series_max_terms} head terms")
    head = ComplexAccumulator()
    for n in range(start):
        head.add(cmath.exp(n * log_z - s * cmath.log(a + n)))

    b = a + start
    log_b = cmath.log(b)
    tail = ComplexAccumulator()
    if log_z == 0:
        # Euler-Maclaurin: b^(1-s)/(s-1) + b^(-s)/2 + sum_k B_2k/(2k)! (s)_(2k-1) b^(1-s-2k)
        tail.add(cmath.exp((1 - s) * log_b) / (s - 1))
        tail.add(cmath.exp(-s * log_b) / 2)
        terms = (
            float(bernoulli_number(2 * k)) / math.factorial(2 * k) * pochhammer(s, 2 * k - 1)
            * cmath.exp((1 - s - 2 * k) * log_b)
            for k in range(1, TAIL_TERMS + 1)
        )
    else:
        c = c_prefix(z, TAIL_TERMS)
        terms = (c[k] * pochhammer(s, k) * cmath.exp(-(k + s) * log_b) for k in range(TAIL_TERMS))

    small = 0
    last = math.inf
    for term in terms:
        tail.add(term)
        last = abs(term)
        small = small + 1 if last <= tol * abs(tail.value) else 0
        if small >= 3:
            break
    value = head.value + cmath.exp(start * log_z) * tail.value
    if small < 3:
        raise AccuracyError(f"unit-circle tail not settled after {TAIL_TERMS} terms", best=value, error_estimate=last)
    logger.debug("phi_series |z|=1 z=%s s=%s a=%s: %d head terms, tail from a+N=%s", z, s, a, start, b)
    return value


def polylog_series(z: complex, s: complex, tol: float = 1e-16) -> complex:
    """Li_s(z) = z * Phi(z, s, 1)."""
    return complex(z) * phi_series(z, s, 1, tol)


def gamma(s: complex) -> complex:
    _finite(s=s)
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise DomainError(f"Gamma has a pole at s={s.real:g}")
    return complex(special.gamma(s))


def _kernel(z: complex, a: complex, window: float) -> Callable[[float], complex]:
    """x -> e^(-a x) (1 - (z e^-x)^(1-a)) / (1 - z e^-x), principal branch."""
    log_z = cmath.log(z)
    b = 1 - a
    z_pow = cmath.exp(b * log_z)
    q1 = b / 2 - 0.5
    q2 = b * b / 6 - 1 / 6 - q1 / 2
    q3 = b**3 / 24 - 1 / 24 - q2 / 2 - q1 / 6

    def k(x: float) -> complex:
        t = log_z - x
        if (b * t).real > _OVERFLOW_GUARD:
            return (cmath.exp(-a * x) - z_pow * math.exp(-x)) / (1 - z * math.exp(-x))
        if abs(t) < window:
            ratio = b * (1 + t * (q1 + t * (q2 + t * q3)))
        else:
            ratio = complex(np.expm1(b * t) / np.expm1(t))
        return cmath.exp(-a * x) * ratio

    return k


def _truncation_point(z: complex, s: complex, a: complex, abs_tol: float) -> float:
    """Where (e^(-Re a X) + |z^(1-a)| e^(-X)) X^(Re s - 1) drops below abs_tol/10."""
    w = abs(cmath.exp((1 - a) * cmath.log(z)))
    target = math.log(abs_tol / 10)

    def excess(x: float) -> float:
        lead = -a.real * x
        tail = math.log(w) - x if w > 0 else -math.inf
        top = max(lead, tail)
        return top + math.log1p(math.exp(min(lead, tail) - top)) + (s.real - 1) * math.log(x) - target

    hi = 1.0
    while excess(hi) > 0:
        hi *= 2
        if hi > 1e7:
            raise AccuracyError("quadrature truncation point not found")
    lo = hi / 2 if hi > 1 else 0.0
    for _ in range(80):
        mid = (lo + hi) / 2
        if mid > 0 and excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return max(hi, 2 * abs(math.log(abs(z))) + 1)


def f_quadrature(
    z: complex,
    s: complex,
    a: complex,
    quad_settings: Optional[QuadratureSettings] = None,
) -> complex:
    """F(z,s,a) from its pole-free integral by adaptive Gauss-Kronrod quadrature."""
    _finite(z=z, s=s, a=a)
    z, s, a = complex(z), complex(s), complex(a)
    if z == 0:
        raise DomainError("z must be nonzero")
    if s.real <= 0:
        raise DomainError("Re s > 0 required for the integral representation")
    if a.real <= 0:
        raise DomainError("Re a > 0 required for the integral representation")
    qs = quad_settings or QuadratureSettings()

    kernel = _kernel(z, a, qs.singularity_window)
    x_max = _truncation_point(z, s, a, qs.abs_tol)
    logger.debug("F quadrature z=%s s=%s a=%s truncated at x=%.6g", z, s, a, x_max)

    breaks = []
    if z.imag == 0.0 and z.real > 1 and math.log(z.real) < x_max:
        breaks.append(math.log(z.real))

    if s.real < 1:
        # x = u^(1/sigma) absorbs the x^(s-1) endpoint singularity
        sigma = s.real
        power = 1 / sigma

        def integrand(u: float) -> complex:
            if u <= 0:
                return 0j
            x = u**power
            return power * cmath.exp((s / sigma - 1) * math.log(u)) * kernel(x)

        upper = x_max**sigma
        breaks = [b**sigma for b in breaks]
    else:

        def integrand(x: float) -> complex:
            if x <= 0:
                return kernel(0.0) if s == 1 else 0j
            return cmath.exp((s - 1) * math.log(x)) * kernel(x)

        upper = x_max

    total = 0j
    err = 0.0
    messages = []
    for part, pick in (("re", lambda v: v.real), ("im", lambda v: v.imag)):
        if part == "im" and z.imag == 0.0 and s.imag == 0.0 and a.imag == 0.0 and z.real > 0:
            continue
        out = integrate.quad(
            lambda x: pick(integrand(x)),
            0.0,
            upper,
            epsabs=qs.abs_tol,
            epsrel=qs.rel_tol,
            limit=qs.max_subdivisions,
            points=breaks or None,
            full_output=1,
        )
        value, abserr = out[0], out[1]
        if len(out) > 3:
            messages.append(str(out[3]).split("\n")[0])
        total += value if part == "re" else 1j * value
        err += abserr

    g = gamma(s)
    result = total / g
    err = err / abs(g)
    allowed = max(qs.abs_tol, qs.rel_tol * abs(result))
    if messages and err > allowed:
        raise AccuracyError(
            f"quadrature error estimate {err:.3g} exceeds {allowed:.3g}: {messages[0]}",
            best=result,
            error_estimate=err,
        )
    return result


def summation_by_parts_residual(
    z: complex,
    s: complex,
    m: int,
    depth: int,
    exact_boundary: bool = True,
) -> float:
    """Distance between eta(z,s,m) and its depth-truncated summation-by-parts form.

    With `exact_boundary` the k=1 difference 1 - 2^-s, whose binomial series sits on
    the edge of convergence, is taken in closed form.
    """
    _finite(z=z, s=s)
    z, s = complex(z), complex(s)
    if z.imag != 0.0 or z.real <= 1:
        raise DomainError("summation by parts needs real z > 1")
    if s.real <= 0:
        raise DomainError("Re s > 0 required")
    if m < 1 or depth < 1:
        raise UsageError("m >= 1 and depth >= 1 required")

    eta = eta_direct(z, s, m)
    ratio = z / (z - 1)
    inner = ComplexAccumulator()
    if exact_boundary:
        inner.add((1 - cmath.exp(-s * math.log(2))) * z)
    coef = s  # (-1)^(n-1) (s)_n / n!
    for n in range(1, depth + 1):
        eta_n = eta_direct(z, s + n, m)
        inner.add(coef * (eta_n - z if exact_boundary else eta_n))
        coef = -coef * (s + n) / (n + 1)
    boundary = z ** (m + 1) * cmath.exp(-s * math.log(m + 1)) / (z - 1)
    approx = boundary - ratio + ratio * inner.value
    return abs(eta - approx)


def euler_maclaurin_f1(s: float, m: int, n: int, zeta_s: Optional[float] = None) -> EulerMaclaurinResult:
    """F(1,s,m) = zeta(s,m) - zeta(s) by Euler-Maclaurin with n Bernoulli corrections."""
    if isinstance(s, complex):
        if s.imag != 0.0:
            raise DomainError("Euler-Maclaurin form needs real s")
        s = s.real
    s = float(s)
    if not math.isfinite(s) or s <= 1:
        raise DomainError("s > 1 required")
    if m < 2 or n < 1:
        raise UsageError("m >= 2 and n >= 1 required")
    if zeta_s is None:
        zeta_s = float(special.zeta(s, 1))
    parts = [-zeta_s, m ** (1 - s) / (s - 1), m ** (-s) / 2]
    for k in range(1, n + 1):
        b = float(bernoulli_number(2 * k)) / math.factorial(2 * k)
        parts.append(b * pochhammer(s, 2 * k - 1).real / m ** (2 * k + s - 1))
    acc = ComplexAccumulator()
    for part in parts:
        acc.add(part)
    b_next = abs(float(bernoulli_number(2 * n + 2))) / math.factorial(2 * n + 2)
    bound = b_next * abs(pochhammer(s, 2 * n + 1).real) / m ** (2 * n + s + 1)
    # each part, zeta(s) included, carries its own rounding
    bound += ROUNDING_ULPS * np.finfo(float).eps * sum(abs(part) for part in parts)
    return EulerMaclaurinResult(value=acc.value.real, bound=bound)


def hurwitz_zeta_direct(s: complex, m: float, tol: float = 1e-12) -> complex:
    """zeta(s,m) by direct summation plus an Euler-Maclaurin tail."""
    _finite(s=s)
    s = complex(s)
    if s.real <= 1:
        raise DomainError("Re s > 1 required")
    if m < 1:
        raise DomainError("m >= 1 required")
    count = settings.hurwitz_direct_terms
    bases = m + np.arange(count, dtype=float)
    if s.imag == 0.0:
        head = complex(np.sum(bases ** (-s.real)))
    else:
        head = complex(np.sum(np.exp(-s * np.log(bases))))
    end = m + count
    end_pow = cmath.exp(-s * math.log(end))
    tail = end * end_pow / (s - 1) + end_pow / 2 + s * end_pow / end / 12
    value = head + tail
    correction = abs(s * (s + 1) * (s + 2) * end_pow / end**3 / 720)
    if correction > tol * abs(value):
        raise AccuracyError(
            f"tail correction {correction:.3g} above tolerance",
            best=value,
            error_estimate=correction,
        )
    return value
