"""The iterated maps: the quadratic family z**2 + c and Newton's method for z**3 - 1.

Both maps are total on the extended plane.  Any iterate whose real or
imaginary part exceeds :data:`~riemann_dld.sphere.OVERFLOW_LIMIT` (or is not
finite) is replaced by the point at infinity, which is absorbing for both maps.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numba

from .sphere import INFINITY, ComplexValue, SpherePoint, _is_infinite, as_complex_value, to_sphere

__all__ = [
    "MapKind",
    "MapSpec",
    "OrbitTrace",
    "map_step",
    "iterate_orbit",
    "known_fixed_points",
]

QUADRATIC = 0
NEWTON_CUBIC = 1

# Beyond this modulus z**3 could overflow; the Newton correction 1/(3 z**2) is
# then far below one ulp of 2z/3, so the step is just 2z/3.
_NEWTON_DIRECT_LIMIT = 1e50


class MapKind(enum.IntEnum):
    QUADRATIC = QUADRATIC
    NEWTON_CUBIC = NEWTON_CUBIC


@dataclass(frozen=True)
class MapSpec:
    """Which map to iterate.  ``c`` is ignored for the Newton map."""

    kind: MapKind
    c: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "kind", MapKind(self.kind))
        c = complex(self.c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"map parameter c must be finite, got {c!r}")
        if self.kind is MapKind.NEWTON_CUBIC:
            c = 0j
        object.__setattr__(self, "c", c)

    @classmethod
    def quadratic(cls, c) -> MapSpec:
        return cls(MapKind.QUADRATIC, complex(c))

    @classmethod
    def newton(cls) -> MapSpec:
        return cls(MapKind.NEWTON_CUBIC)

    def __str__(self) -> str:
        if self.kind is MapKind.NEWTON_CUBIC:
            return "newton z^3-1"
        return f"quadratic c={self.c.real!r}{self.c.imag:+}i"


@numba.njit(nogil=True, cache=True)
def _step(kind, cre, cim, x, y, inf):
    """One map step on raw coordinates; returns (x, y, at_infinity)."""
    if inf:
        return 0.0, 0.0, True
    if kind == QUADRATIC:
        nx = x * x - y * y + cre
        ny = 2.0 * x * y + cim
    else:
        if x == 0.0 and y == 0.0:
            return 0.0, 0.0, True
        if abs(x) <= _NEWTON_DIRECT_LIMIT and abs(y) <= _NEWTON_DIRECT_LIMIT:
            # z - (z^3 - 1) / (3 z^2)
            z2r = x * x - y * y
            z2i = 2.0 * x * y
            numr = z2r * x - z2i * y - 1.0
            numi = z2r * y + z2i * x
            denr = 3.0 * z2r
            deni = 3.0 * z2i
            dd = denr * denr + deni * deni
            if dd == 0.0:
                return 0.0, 0.0, True
            nx = x - (numr * denr + numi * deni) / dd
            ny = y - (numi * denr - numr * deni) / dd
        else:
            nx = 2.0 * x / 3.0
            ny = 2.0 * y / 3.0
    if _is_infinite(nx, ny, False):
        return 0.0, 0.0, True
    return nx, ny, False


def map_step(spec: MapSpec, z) -> ComplexValue:
    z = as_complex_value(z)
    x, y, inf = _step(int(spec.kind), spec.c.real, spec.c.imag, z.re, z.im, z.at_infinity)
    return INFINITY if inf else ComplexValue(x, y)


@dataclass(frozen=True)
class OrbitTrace:
    """Iterates ``z_0 .. z_N`` of one initial condition and their sphere projections."""

    spec: MapSpec
    points: tuple[ComplexValue, ...]
    sphere_points: tuple[SpherePoint, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.points) - 1

    def __len__(self) -> int:
        return len(self.points)


def iterate_orbit(spec: MapSpec, z0, n: int) -> OrbitTrace:
    if n < 1:
        raise ValueError(f"iteration count must be >= 1, got {n}")
    z = as_complex_value(z0)
    kind, cre, cim = int(spec.kind), spec.c.real, spec.c.imag
    x, y, inf = z.re, z.im, z.at_infinity
    points = [z]
    for _ in range(n):
        x, y, inf = _step(kind, cre, cim, x, y, inf)
        points.append(INFINITY if inf else ComplexValue(x, y))
    return OrbitTrace(spec, tuple(points), tuple(to_sphere(w) for w in points))


def known_fixed_points(spec: MapSpec) -> list[ComplexValue]:
    """Closed-form finite fixed points of the map.

    Newton: the three cube roots of unity.  Quadratic: the roots of
    z**2 - z + c = 0, smaller-real-part root first (a double root is listed twice).
    """
    if spec.kind is MapKind.NEWTON_CUBIC:
        h = math.sqrt(3.0) / 2.0
        return [ComplexValue(1.0, 0.0), ComplexValue(-0.5, h), ComplexValue(-0.5, -h)]
    s = cmath.sqrt(1.0 - 4.0 * spec.c)
    return [as_complex_value((1.0 - s) / 2.0), as_complex_value((1.0 + s) / 2.0)]
