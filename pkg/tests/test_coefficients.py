from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath
import orjson
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st
from pydantic import ValidationError

from models.coefficients import CoefficientPath, CoefficientTable
from services.coefficients import (
    bernoulli_number,
    bernoulli_polynomial,
    bernoulli_polynomial_coefficients,
    c_prefix,
    coeff_c,
    coeff_C,
    coefficient_table,
    pochhammer,
    poly_p,
    polylog_neg,
    resolve_path,
)
from services.errors import DomainError, UsageError


def rel(x: complex, y: complex) -> float:
    return abs(x - y) / max(abs(x), abs(y), 1e-300)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def polylog_closed_form(n: int, z: complex) -> complex:
    """Li_{-n}(z) = sum_k k! S(n+1, k+1) (z/(1-z))^(k+1)."""
    with mpmath.workdps(50):
        r = mpmath.mpmathify(z) / (1 - mpmath.mpmathify(z))
        return complex(sum(math.factorial(k) * stirling2(n + 1, k + 1) * r ** (k + 1) for k in range(n + 1)))


def generating_coefficient(n: int, z: complex, a: complex) -> complex:
    """n-th Taylor coefficient of (1 - (z e^-x)^(1-a)) / (1 - z e^-x) by mpmath differentiation."""
    with mpmath.workdps(40):
        zz, aa = mpmath.mpmathify(z), mpmath.mpmathify(a)
        f = lambda x: (1 - (zz * mpmath.exp(-x)) ** (1 - aa)) / (1 - zz * mpmath.exp(-x))
        return complex(mpmath.taylor(f, 0, n)[n])


# --- Bernoulli ---------------------------------------------------------------


def test_bernoulli_numbers():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(2) == Fraction(1, 6)
    assert bernoulli_number(3) == 0
    assert bernoulli_number(12) == Fraction(-691, 2730)


@pytest.mark.parametrize("n", [4, 10, 30, 63, 100])
def test_bernoulli_numbers_match_mpmath(n):
    assert float(bernoulli_number(n)) == pytest.approx(float(mpmath.bernoulli(n)), rel=1e-14)


def test_odd_bernoulli_numbers_vanish():
    assert all(bernoulli_number(2 * k + 1) == 0 for k in range(1, 40))


def test_bernoulli_polynomial_coefficients():
    # B_2(x) = x^2 - x + 1/6
    assert bernoulli_polynomial_coefficients(2) == (1, -1, Fraction(1, 6))
    assert bernoulli_polynomial_coefficients(0) == (1,)


@given(st.integers(min_value=0, max_value=12), st.floats(min_value=-2, max_value=2))
def test_bernoulli_polynomial_reflection(n, x):
    lhs = bernoulli_polynomial(n, 1 - x)
    rhs = (-1) ** n * bernoulli_polynomial(n, x)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


def test_bernoulli_polynomial_endpoints():
    for n in range(2, 16):
        b = float(bernoulli_number(n))
        assert bernoulli_polynomial(n, 0) == pytest.approx(b, abs=1e-12)
        assert bernoulli_polynomial(n, 1) == pytest.approx(b, abs=1e-12)


def test_bernoulli_rejects_negative_index():
    with pytest.raises(UsageError):
        bernoulli_number(-1)


# --- Pochhammer --------------------------------------------------------------


def test_pochhammer():
    assert pochhammer(1, 5) == 120
    assert pochhammer(0.5, 0) == 1
    assert pochhammer(2 + 1j, 2) == (2 + 1j) * (3 + 1j)


@given(st.floats(min_value=-5, max_value=5), st.integers(min_value=0, max_value=20))
def test_pochhammer_step(s, n):
    assert pochhammer(s, n + 1) == pytest.approx(pochhammer(s, n) * (s + n), rel=1e-12, abs=1e-300)


# --- Li_{-n}(z) and c_n(z) ---------------------------------------------------


def test_polylog_negative_order_examples():
    assert polylog_neg(0, 2) == pytest.approx(-2, rel=1e-15)
    assert polylog_neg(1, 2) == pytest.approx(2, rel=1e-15)
    # Li_{-2}(z) = z(1+z)/(1-z)^3
    assert polylog_neg(2, 2) == pytest.approx(-6, rel=1e-15)


@pytest.mark.parametrize("z", [0.5, -1, 3, 2 + 1j, 1.5])
@pytest.mark.parametrize("n", [0, 1, 4, 10])
def test_polylog_negative_order_matches_closed_form(z, n):
    expected = polylog_closed_form(n, z)
    assert abs(polylog_neg(n, z) - expected) <= 1e-12 * max(abs(expected), 1.0)


def test_polylog_singular_at_one():
    with pytest.raises(DomainError, match="singular at z=1"):
        polylog_neg(2, 1)


def test_c_examples():
    assert coeff_c(0, 2) == pytest.approx(-1)
    assert coeff_c(1, 2) == pytest.approx(-2)
    assert coeff_c(0, 0.5) == pytest.approx(2)
    with pytest.raises(DomainError):
        coeff_c(3, 1)


@pytest.mark.parametrize("z", [2, 5, 0.5, 1 + 2j])
def test_c_recurrence(z):
    q = z / (1 - z)
    for n in range(1, 16):
        rhs = q * sum((-1) ** (n - k) * coeff_c(k, z) / math.factorial(n - k) for k in range(n))
        assert rel(coeff_c(n, z), rhs) < 1e-10


def test_c_prefix_matches_single_coefficients():
    prefix = c_prefix(3, 8)
    assert len(prefix) == 8
    assert all(prefix[n] == coeff_c(n, 3) for n in range(8))


def test_p_example():
    assert poly_p(1, 2, 2) == pytest.approx(-3)
    assert poly_p(0, 2, 7.5) == pytest.approx(coeff_c(0, 2))


# --- C_n(z,a) ----------------------------------------------------------------


def test_C_examples():
    assert coeff_C(0, 1, 5) == pytest.approx(-4)
    assert coeff_C(1, 2, 2, CoefficientPath.integer_direct) == pytest.approx(-0.5)
    # C_0(z,a) = (1 - z^(1-a)) / (1 - z)
    assert coeff_C(0, 2, 5) == pytest.approx(-15 / 16)


@pytest.mark.parametrize("z,a", [(3, 2.5), (2, 4.5 + 1j), (0.5, 3.25), (2 + 1j, 6)])
def test_C_matches_generating_function(z, a):
    for path in (CoefficientPath.explicit, CoefficientPath.recurrence):
        table = coefficient_table(z, a, path, 8)
        expected = [generating_coefficient(n, z, a) for n in range(8)]
        scale = max(abs(e) for e in expected)
        for got, want in zip(table.big_c, expected):
            assert abs(got - want) <= 1e-10 * scale


@pytest.mark.parametrize("z", [2, 5, 1.5, 2 + 1j])
@pytest.mark.parametrize("a", [7, 12])
def test_integer_a_paths_agree(z, a):
    explicit = coefficient_table(z, a, CoefficientPath.explicit, 20).big_c
    recurrence = coefficient_table(z, a, CoefficientPath.recurrence, 20).big_c
    direct = coefficient_table(z, a, CoefficientPath.integer_direct, 20).big_c
    scale = max(abs(x) for x in explicit)
    for x, y, w in zip(explicit, recurrence, direct):
        assert abs(x - y) <= 1e-9 * max(abs(x), abs(y)) + 1e-14 * scale
        assert abs(x - w) <= 1e-9 * max(abs(x), abs(w)) + 1e-14 * scale


@pytest.mark.parametrize("a", [3, 7.5, 3.5, 10 + 1j, 2.25])
def test_bernoulli_branch_matches_recurrence_at_one(a):
    branch = coefficient_table(1, a, CoefficientPath.explicit, 20).big_c
    recurrence = coefficient_table(1, a, CoefficientPath.recurrence, 20).big_c
    scale = max(abs(x) for x in branch)
    for x, y in zip(branch, recurrence):
        assert abs(x - y) <= 1e-10 * max(abs(x), abs(y)) + 1e-14 * scale


def test_bernoulli_branch_matches_direct_sum_at_one():
    branch = coefficient_table(1, 3, CoefficientPath.explicit, 16).big_c
    direct = coefficient_table(1, 3, CoefficientPath.integer_direct, 16).big_c
    # C_n(1,3) = -(1 + 2^n)/n!
    for n, (x, y) in enumerate(zip(branch, direct)):
        assert x == pytest.approx(-(1 + 2**n) / math.factorial(n), rel=1e-12)
        assert y == pytest.approx(x, rel=1e-12)


@pytest.mark.parametrize("z", [1, 2, 5, 0.5])
def test_coefficients_vanish_at_a_one(z):
    for path in (CoefficientPath.explicit, CoefficientPath.recurrence, CoefficientPath.integer_direct):
        assert max(abs(c) for c in coefficient_table(z, 1, path, 20).big_c) <= 1e-12


@pytest.mark.parametrize("z", [1, 2, 5, 0.5])
def test_coefficients_at_a_zero(z):
    for path in (CoefficientPath.explicit, CoefficientPath.recurrence):
        big_c = coefficient_table(z, 0, path, 20).big_c
        assert abs(big_c[0] - 1) <= 1e-10
        assert max(abs(c) for c in big_c[1:]) <= 1e-10


@hyp_settings(max_examples=20, deadline=None)
@given(
    st.floats(min_value=1.2, max_value=8),
    st.floats(min_value=1.1, max_value=30),
)
def test_explicit_and_recurrence_agree(z, a):
    explicit = coefficient_table(z, a, CoefficientPath.explicit, 16).big_c
    recurrence = coefficient_table(z, a, CoefficientPath.recurrence, 16).big_c
    scale = max(abs(x) for x in explicit)
    for x, y in zip(explicit, recurrence):
        assert abs(x - y) <= 1e-9 * max(abs(x), abs(y)) + 1e-14 * scale


def test_explicit_table_carries_c_and_p():
    table = coefficient_table(3, 2.5, CoefficientPath.explicit, 6)
    w = 3 ** (1 - 2.5)
    assert len(table.c) == len(table.p) == len(table.big_c) == table.order == 6
    for c, p, big_c in zip(table.c, table.p, table.big_c):
        assert abs(big_c - (c - w * p)) <= 1e-12 * (abs(c) + w * abs(p))
    assert table.working_dps >= 32


def test_integer_direct_table_has_no_c():
    table = coefficient_table(2, 5, order=4)
    assert table.path == CoefficientPath.integer_direct
    assert table.c == [] and table.p == []


def test_resolve_path():
    assert resolve_path(5) == CoefficientPath.integer_direct
    assert resolve_path(5.5) == CoefficientPath.explicit
    assert resolve_path(5 + 1j) == CoefficientPath.explicit
    assert resolve_path(5, "recurrence") == CoefficientPath.recurrence
    with pytest.raises(UsageError):
        resolve_path(2.5, CoefficientPath.integer_direct)


def test_near_one_gets_conditioning_note():
    table = coefficient_table(1.0005, 3.5, order=5)
    assert any(note.startswith("conditioning") for note in table.notes)
    assert not any(note.startswith("conditioning") for note in coefficient_table(2, 3.5, order=5).notes)


def test_near_one_settles_on_the_requested_entries():
    above = coefficient_table(1.0005, 3.5, CoefficientPath.explicit, 10)
    below = coefficient_table(0.9995, 3.5, CoefficientPath.explicit, 10)
    recurrence = coefficient_table(1.0005, 3.5, CoefficientPath.recurrence, 10)
    assert not any(note.startswith("precision") for note in above.notes)
    assert not any(note.startswith("precision") for note in recurrence.notes)
    for x, y in zip(above.big_c, recurrence.big_c):
        assert x == pytest.approx(y, rel=1e-9, abs=1e-14)
    # C_n is smooth through z = 1
    at_one = coefficient_table(1, 3.5, CoefficientPath.explicit, 10).big_c
    for x, y, w in zip(above.big_c, below.big_c, at_one):
        assert abs(x - w) <= 1e-2 * max(1.0, abs(w))
        assert abs(y - w) <= 1e-2 * max(1.0, abs(w))


def test_coefficient_errors():
    with pytest.raises(DomainError):
        coefficient_table(0, 2.5)
    with pytest.raises(UsageError):
        coeff_C(171, 2, 3.5)
    with pytest.raises(UsageError):
        coeff_C(-1, 2, 3.5)
    with pytest.raises(UsageError):
        coeff_C(1, 2, 2.5, CoefficientPath.integer_direct)
    with pytest.raises(DomainError):
        coefficient_table(float("nan"), 2.5)


def test_table_model_rules():
    with pytest.raises(ValidationError):
        CoefficientTable(z=2, a=2.5, path="auto", C=[1])
    with pytest.raises(ValidationError):
        CoefficientTable(z=2, a=2.5, path="integer-direct", C=[1])
    with pytest.raises(ValidationError):
        CoefficientTable(z=1, a=2.5, path="explicit", c=[1], C=[1])


def test_table_json_dump():
    payload = orjson.loads(coefficient_table(2, 5, order=3).dump_json())
    assert set(payload) == {"z", "a", "path", "C"}
    assert payload["path"] == "integer-direct"
    assert payload["z"] == [2.0, 0.0]
    assert len(payload["C"]) == 3
    assert payload["C"][0] == pytest.approx([-15 / 16, 0.0])
