from __future__ import annotations

import cmath
import math
import sys

import mpmath
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from models.oracles import QuadratureSettings
from services.errors import AccuracyError, DomainError, UsageError
from services.oracles import (
    eta_direct,
    euler_maclaurin_f1,
    f_quadrature,
    gamma,
    hurwitz_zeta_direct,
    phi_series,
    polylog_series,
    summation_by_parts_residual,
)
from services.reference import f_reference_precise


def rel(x: complex, y: complex) -> float:
    return abs(x - y) / max(abs(x), abs(y), 1e-300)


def f_direct(z: complex, s: complex, m: int) -> complex:
    return -cmath.exp(-m * cmath.log(z)) * eta_direct(z, s, m - 1)


def f_mpmath(z: float, s: float, a: float) -> complex:
    with mpmath.workdps(30):
        return complex(mpmath.lerchphi(z, s, a) - mpmath.polylog(s, z) * mpmath.power(z, -a))


# --- eta(z,s,m) ----------------------------------------------------------------


def test_eta_direct_examples():
    assert eta_direct(2, 1, 3) == 20 / 3
    assert eta_direct(1, 1, 4) == 25 / 12
    assert eta_direct(2, -1, 10) == 18434
    assert eta_direct(2, 1, 0) == 0


@given(st.integers(min_value=1, max_value=40))
def test_eta_direct_negative_order_closed_form(m):
    assert eta_direct(2, -1, m) == (m - 1) * 2 ** (m + 1) + 2


def test_eta_direct_complex_arguments():
    assert rel(eta_direct(1j, 2, 4), -0.1875 + (1 - 1 / 9) * 1j) < 1e-15
    expected = sum((1.5 + 0.5j) ** n / n ** (0.5 + 1j) for n in range(1, 21))
    assert rel(eta_direct(1.5 + 0.5j, 0.5 + 1j, 20), expected) < 1e-13


def test_eta_direct_large_m_falls_back_to_floats():
    # beyond the exact-rational range
    expected = math.fsum(1.01**n / n for n in range(1, 2001))
    assert rel(eta_direct(1.01, 1, 2000), expected) < 1e-14


def test_eta_direct_rejects_negative_m():
    with pytest.raises(UsageError):
        eta_direct(2, 1, -1)


@hyp_settings(max_examples=50)
@given(
    st.floats(min_value=1.1, max_value=5),
    st.floats(min_value=0.5, max_value=3),
    st.integers(min_value=2, max_value=30),
)
def test_eta_direct_recursion(z, s, m):
    step = eta_direct(z, s, m) - eta_direct(z, s, m - 1)
    assert rel(step, z**m / m**s) < 1e-10


# --- Phi power series and Li_s ---------------------------------------------------


def test_phi_series_examples():
    assert phi_series(0.5, 1, 1) == pytest.approx(2 * math.log(2), rel=1e-14)
    assert rel(phi_series(0.5, 2, 3), complex(mpmath.lerchphi(0.5, 2, 3))) < 1e-14
    assert rel(phi_series(0, 2, 3), 1 / 9) < 1e-15


def test_phi_series_on_the_unit_circle():
    assert phi_series(1, 2, 1) == pytest.approx(math.pi**2 / 6, rel=1e-14)
    assert phi_series(-1, 2, 1) == pytest.approx(math.pi**2 / 12, rel=1e-13)
    with mpmath.workdps(30):
        at_i = complex(mpmath.lerchphi(1j, 2, 1))
        shifted = complex(mpmath.zeta(3, 2.5 + 1j))
    assert rel(phi_series(1j, 2, 1), at_i) < 1e-13
    assert rel(phi_series(1, 3, 2.5 + 1j), shifted) < 1e-13


def test_polylog_series():
    expected = math.pi**2 / 12 - math.log(2) ** 2 / 2
    assert polylog_series(0.5, 2) == pytest.approx(expected, rel=1e-14)


def test_phi_series_domain():
    with pytest.raises(DomainError):
        phi_series(2, 1, 1)
    with pytest.raises(DomainError, match="Re s > 1"):
        phi_series(1, 1, 1)
    with pytest.raises(DomainError):
        phi_series(0.5, 1, -2)


def test_gamma():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma(5) == pytest.approx(24)
    with pytest.raises(DomainError):
        gamma(-1)


# --- quadrature ---------------------------------------------------------------------


def test_quadrature_at_z_one():
    assert rel(f_quadrature(1, 2, 4), -(1 + 1 / 4 + 1 / 9)) < 1e-9


@pytest.mark.parametrize("z,s,m", [(2, 1.5, 7), (2, 0.5, 5), (5, 2, 3), (3, 1, 12)])
def test_quadrature_matches_direct_sum(z, s, m):
    assert rel(f_quadrature(z, s, m), f_direct(z, s, m)) < 1e-8


@pytest.mark.parametrize("z,s,a", [(0.5, 2, 3), (0.3, 1.5, 2.5), (-0.5, 2, 6)])
def test_quadrature_inside_disc(z, s, a):
    assert rel(f_quadrature(z, s, a), f_mpmath(z, s, a)) < 1e-9


def test_quadrature_complex_a_matches_precise_reference():
    assert rel(f_quadrature(2, 2, 10 + 1j), f_reference_precise(2, 2, 10 + 1j)) < 1e-8


def test_quadrature_custom_settings():
    loose = QuadratureSettings(abs_tol=1e-6, rel_tol=1e-6)
    assert rel(f_quadrature(2, 1, 5, loose), f_direct(2, 1, 5)) < 1e-5


def test_quadrature_domain():
    with pytest.raises(DomainError):
        f_quadrature(2, 0, 3)
    with pytest.raises(DomainError):
        f_quadrature(2, 1, -1)
    with pytest.raises(DomainError):
        f_quadrature(0, 1, 3)


def test_precise_reference_matches_mpmath():
    assert rel(f_reference_precise(0.5, 2, 3), f_mpmath(0.5, 2, 3)) < 1e-14


def test_precise_reference_at_integer_a():
    assert rel(f_reference_precise(5, 3, 10), f_direct(5, 3, 10)) < 1e-14


# --- summation by parts -------------------------------------------------------------


def test_summation_by_parts_converges():
    assert summation_by_parts_residual(2, 2, 10, 30) < 5e-8
    assert summation_by_parts_residual(2, 2, 10, 36) < 1e-8
    assert summation_by_parts_residual(3, 1, 5, 30) < 1e-8


def test_summation_by_parts_residuals_shrink():
    residuals = [summation_by_parts_residual(2, 2, 10, d) for d in range(3, 37)]
    assert all(b <= a + 1e-14 for a, b in zip(residuals, residuals[1:]))


def test_summation_by_parts_open_boundary_is_worse():
    exact = summation_by_parts_residual(2, 2, 10, 30)
    assert summation_by_parts_residual(2, 2, 10, 30, exact_boundary=False) > exact


def test_summation_by_parts_domain():
    with pytest.raises(DomainError):
        summation_by_parts_residual(0.5, 2, 10, 5)
    with pytest.raises(UsageError):
        summation_by_parts_residual(2, 2, 10, 0)


# --- Euler-Maclaurin and Hurwitz zeta ----------------------------------------------


@pytest.mark.parametrize("s,m,n", [(2, 10, 3), (3, 5, 2), (2.5, 20, 4)])
def test_euler_maclaurin_within_bound(s, m, n):
    with mpmath.workdps(30):
        exact = float(mpmath.zeta(s, m) - mpmath.zeta(s))
    result = euler_maclaurin_f1(s, m, n)
    assert abs(result.value - exact) <= result.bound
    assert result.bound < 1e-6
    assert result.bound >= 2 * sys.float_info.epsilon * abs(result.value)


def test_euler_maclaurin_single_term_bound():
    result = euler_maclaurin_f1(2, 2, 1)
    assert abs(result.value - (-1.0)) <= result.bound


def test_euler_maclaurin_domain():
    with pytest.raises(DomainError):
        euler_maclaurin_f1(1, 10, 3)
    with pytest.raises(DomainError):
        euler_maclaurin_f1(2 + 1j, 10, 3)
    with pytest.raises(UsageError):
        euler_maclaurin_f1(2, 1, 3)


def test_hurwitz_zeta_direct():
    assert rel(hurwitz_zeta_direct(2, 1), math.pi**2 / 6) < 1e-12
    assert rel(hurwitz_zeta_direct(4, 1), math.pi**4 / 90) < 1e-12
    with mpmath.workdps(30):
        expected = complex(mpmath.zeta(2 + 1j, 3))
    assert rel(hurwitz_zeta_direct(2 + 1j, 3), expected) < 1e-12


def test_hurwitz_zeta_direct_domain():
    with pytest.raises(DomainError):
        hurwitz_zeta_direct(1, 1)
    with pytest.raises(DomainError):
        hurwitz_zeta_direct(2, 0.5)


def test_hurwitz_zeta_direct_tolerance():
    with pytest.raises(AccuracyError):
        hurwitz_zeta_direct(1.01, 1, tol=1e-30)
