import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import exact_to_sphere
from riemann_dld.sphere import (
    INFINITY,
    NORTH_POLE,
    ComplexValue,
    as_complex_value,
    from_sphere,
    from_sphere_many,
    sphere_step_norm,
    to_sphere,
    to_sphere_many,
)

finite_floats = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
any_floats = st.floats(allow_nan=True, allow_infinity=True)
exponents = st.floats(min_value=1e-6, max_value=1.0, exclude_min=False)


def unit_sphere_points():
    return st.tuples(finite_floats, finite_floats).map(lambda t: to_sphere(complex(*t)))


@pytest.mark.parametrize(
    "z, expected",
    [
        (0, (0.0, 0.0, -1.0)),
        (1, (1.0, 0.0, 0.0)),
        (1j, (0.0, 1.0, 0.0)),
        (INFINITY, (0.0, 0.0, 1.0)),
    ],
)
def test_to_sphere_trivial_points(z, expected):
    assert to_sphere(z) == expected


def test_to_sphere_two_matches_exact_fractions():
    expected = exact_to_sphere(Fraction(2), Fraction(0))
    assert expected == (Fraction(4, 5), 0, Fraction(3, 5))
    assert to_sphere(2) == pytest.approx([float(v) for v in expected], abs=1e-15)


@pytest.mark.parametrize("big", [1e151, -2e200, 1.7e308])
def test_overflowing_values_go_to_north_pole(big):
    assert to_sphere(complex(big, 0.0)) == NORTH_POLE
    assert to_sphere(complex(0.0, big)) == NORTH_POLE


def test_clamp_boundary_is_still_finite():
    xi = to_sphere(complex(1e150, 1e150))
    assert xi != NORTH_POLE
    assert math.fsum(v * v for v in xi) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "xi, expected",
    [((0.0, 0.0, -1.0), ComplexValue(0.0, 0.0)), ((1.0, 0.0, 0.0), ComplexValue(1.0, 0.0)), ((0.0, 0.0, 1.0), INFINITY)],
)
def test_from_sphere_examples(xi, expected):
    assert from_sphere(xi) == expected


def test_from_sphere_rejects_points_off_the_sphere():
    with pytest.raises(ValueError):
        from_sphere((0.5, 0.5, 0.5))
    with pytest.raises(ValueError):
        from_sphere_many([[1.0, 0.0, 0.1]])


def test_from_sphere_pole_tolerance():
    assert from_sphere((0.0, 0.0, 1.0 - 1e-13)) == INFINITY
    assert from_sphere((math.sqrt(1 - (1 - 1e-11) ** 2), 0.0, 1 - 1e-11)) != INFINITY


def test_sphere_step_norm_examples():
    assert sphere_step_norm((0.3, 0.4, math.sqrt(0.75)), (0.3, 0.4, math.sqrt(0.75)), 0.5) == 0.0
    assert sphere_step_norm((0.0, 0.0, -1.0), (0.0, 0.0, 1.0), 1.0) == 2.0
    a = exact_to_sphere(Fraction(2), Fraction(0))
    b = exact_to_sphere(Fraction(4), Fraction(0))
    exact = sum(abs(u - v) for u, v in zip(a, b))
    assert exact == Fraction(52, 85)
    got = sphere_step_norm(to_sphere(2), to_sphere(4), 1.0)
    assert got == pytest.approx(float(exact), abs=1e-15)


@pytest.mark.parametrize("p", [0.0, -0.5, 1.5])
def test_sphere_step_norm_rejects_bad_p(p):
    with pytest.raises(ValueError):
        sphere_step_norm(NORTH_POLE, NORTH_POLE, p)


def test_complex_value_invariants():
    with pytest.raises(ValueError):
        ComplexValue(math.nan, 0.0)
    assert ComplexValue(5.0, 7.0, at_infinity=True) == INFINITY
    assert as_complex_value(complex(math.inf, 0)) is INFINITY
    assert str(ComplexValue(0.5, -0.25)) == "0.5-0.25i"


@settings(max_examples=500)
@given(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False))
def test_round_trip(z):
    back = from_sphere(to_sphere(z))
    assert not back.at_infinity
    assert abs(complex(back) - z) <= 1e-9 * (1 + abs(z))


@settings(max_examples=500)
@given(any_floats, any_floats)
def test_unit_norm_and_no_nan_for_any_input(x, y):
    xi = to_sphere(complex(x, y))
    assert all(math.isfinite(v) for v in xi)
    assert abs(math.fsum(v * v for v in xi) - 1.0) <= 1e-12


@settings(max_examples=300)
@given(unit_sphere_points(), unit_sphere_points(), exponents)
def test_step_norm_bounded(a, b, p):
    assert 0.0 <= sphere_step_norm(a, b, p) <= 3 * 2**p


def test_vectorised_matches_scalar():
    rng = np.random.default_rng(7)
    z = rng.uniform(-50, 50, 200) + 1j * rng.uniform(-50, 50, 200)
    xi = to_sphere_many(z)
    for zi, row in zip(z, xi):
        assert tuple(row) == to_sphere(zi)
    back = from_sphere_many(xi)
    for row, bi in zip(xi, back):
        assert complex(from_sphere(row)) == bi
    assert np.isinf(from_sphere_many([[0.0, 0.0, 1.0]])[0].real)
