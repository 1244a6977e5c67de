import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import newton_orbit, quadratic_orbit
from riemann_dld.maps import MapKind, MapSpec, iterate_orbit, known_fixed_points, map_step
from riemann_dld.presets import PRESETS
from riemann_dld.sphere import INFINITY, ComplexValue, to_sphere

NEWTON = MapSpec.newton()


@pytest.mark.parametrize(
    "spec, z, expected",
    [
        (MapSpec.quadratic(1j), 0, 1j),
        (MapSpec.quadratic(0.25), 0.5, 0.5),
        (MapSpec.quadratic(0), 1 + 1j, 2j),
        (NEWTON, 1, 1),
    ],
)
def test_map_step_examples(spec, z, expected):
    assert complex(map_step(spec, z)) == expected


def test_newton_step_from_two():
    exact = Fraction(2) - Fraction(2**3 - 1, 3 * 2**2)
    assert exact == Fraction(17, 12)
    assert complex(map_step(NEWTON, 2)) == pytest.approx(float(exact), abs=1e-15)


def test_newton_zero_and_infinity():
    assert map_step(NEWTON, 0) == INFINITY
    assert map_step(NEWTON, INFINITY) == INFINITY


def test_newton_large_argument_stays_finite():
    # z**3 would overflow here; the step is 2z/3 to working precision.
    w = map_step(NEWTON, complex(3e120, -3e120))
    assert not w.at_infinity
    assert complex(w) == pytest.approx(complex(2e120, -2e120), rel=1e-15)


@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_quadratic_infinity_absorbing(c):
    assert map_step(MapSpec.quadratic(c), INFINITY) == INFINITY


def test_quadratic_overflow_clamps_to_infinity():
    spec = MapSpec.quadratic(0)
    assert complex(map_step(spec, 1e74)) == 1e74 * 1e74
    assert map_step(spec, 1.1e75) == INFINITY
    assert map_step(spec, complex(0, 1.1e75)) == INFINITY


def test_mapspec_validation():
    with pytest.raises(ValueError):
        MapSpec.quadratic(complex(math.inf, 0))
    assert MapSpec(MapKind.NEWTON_CUBIC, 3 + 1j).c == 0j
    spec = MapSpec.quadratic(1j)
    with pytest.raises(AttributeError):
        spec.c = 0


@pytest.mark.parametrize(
    "spec, z0, n, expected",
    [
        (MapSpec.quadratic(0), 0, 5, [0] * 6),
        (MapSpec.quadratic(0), 2, 3, [2, 4, 16, 256]),
        (MapSpec.quadratic(-1), 0, 4, [0, -1, 0, -1, 0]),
    ],
)
def test_iterate_orbit_examples(spec, z0, n, expected):
    trace = iterate_orbit(spec, z0, n)
    assert len(trace) == n + 1
    assert [complex(z) for z in trace.points] == expected


def test_iterate_orbit_invariants():
    spec = MapSpec.quadratic(0.3 + 0.5j)
    trace = iterate_orbit(spec, 0.9 + 0.9j, 40)
    assert trace.points[-1] == INFINITY
    for a, b in zip(trace.points, trace.points[1:]):
        assert map_step(spec, a) == b
        if a.at_infinity:
            assert b.at_infinity
    for z, xi in zip(trace.points, trace.sphere_points):
        assert to_sphere(z) == xi
    with pytest.raises(ValueError):
        iterate_orbit(spec, 0, 0)


@pytest.mark.parametrize("c", [0, 1j, 0.25, -1, -0.123 + 0.745j, 0.285 + 0.01j])
def test_quadratic_orbit_matches_plain_python(c):
    trace = iterate_orbit(MapSpec.quadratic(c), 0.2 - 0.3j, 60)
    ref = quadratic_orbit(0.2 - 0.3j, c, 60)
    for got, want in zip(trace.points, ref):
        assert (got.at_infinity and want is None) or complex(got) == want


def test_newton_orbit_matches_plain_python():
    trace = iterate_orbit(NEWTON, 2 + 0.5j, 12)
    ref = newton_orbit(2 + 0.5j, 12)
    for got, want in zip(trace.points, ref):
        assert abs(complex(got) - want) <= 1e-13


def test_known_fixed_points_newton():
    pts = [complex(w) for w in known_fixed_points(NEWTON)]
    expected = [1, complex(-0.5, 0.8660254), complex(-0.5, -0.8660254)]
    assert pts == pytest.approx(expected, abs=1e-7)
    for w in pts:
        assert abs(w**3 - 1) <= 1e-15


@pytest.mark.parametrize("c, expected", [(0, [0, 1]), (0.25, [0.5, 0.5])])
def test_known_fixed_points_quadratic_examples(c, expected):
    assert [complex(w) for w in known_fixed_points(MapSpec.quadratic(c))] == expected


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_fixed_point_consistency(name):
    spec = PRESETS[name].spec
    for w in known_fixed_points(spec):
        assert abs(complex(map_step(spec, w)) - complex(w)) <= 1e-12


@pytest.mark.parametrize("k", range(3))
@pytest.mark.parametrize("angle", [0.0, 0.7, 2.0, 3.5, 5.1])
def test_newton_contracts_near_roots(k, angle):
    w = complex(known_fixed_points(NEWTON)[k])
    z = w + 1e-3 * cmath.exp(1j * angle)
    assert abs(complex(map_step(NEWTON, z)) - w) < abs(z - w)


def test_period_two_exact():
    trace = iterate_orbit(MapSpec.quadratic(-1), 0, 101)
    for k, z in enumerate(trace.points):
        assert z == ComplexValue(0.0 if k % 2 == 0 else -1.0, 0.0)
