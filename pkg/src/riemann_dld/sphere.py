"""Stereographic projection between the extended complex plane and the unit sphere.

The point at infinity is the north pole ``(0, 0, 1)``; the origin is the south
pole.  All projection arithmetic lives in a handful of numba kernels so the
scalar API, the array API and the grid kernels share one definition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

__all__ = [
    "OVERFLOW_LIMIT",
    "POLE_EPS",
    "ComplexValue",
    "INFINITY",
    "SpherePoint",
    "NORTH_POLE",
    "as_complex_value",
    "to_sphere",
    "from_sphere",
    "sphere_step_norm",
    "to_sphere_many",
    "from_sphere_many",
    "check_p",
]

# |re| or |im| above this is treated as infinity; squaring stays inside double range.
OVERFLOW_LIMIT = 1e150
POLE_EPS = 1e-12
# Tolerance for rejecting corrupted sphere coordinates in from_sphere.
UNIT_NORM_TOL = 1e-9


@dataclass(frozen=True)
class ComplexValue:
    """A point of the extended complex plane.

    When ``at_infinity`` is set the coordinates are meaningless and are
    normalised to zero so that all infinite values compare equal.
    """

    re: float = 0.0
    im: float = 0.0
    at_infinity: bool = False

    def __post_init__(self):
        if self.at_infinity:
            object.__setattr__(self, "re", 0.0)
            object.__setattr__(self, "im", 0.0)
        elif not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"finite ComplexValue needs finite parts, got {self.re!r}, {self.im!r}")

    def __complex__(self) -> complex:
        if self.at_infinity:
            return complex(math.inf, math.inf)
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return math.inf if self.at_infinity else math.hypot(self.re, self.im)

    def __str__(self) -> str:
        if self.at_infinity:
            return "inf"
        sign = "-" if math.copysign(1.0, self.im) < 0 else "+"
        return f"{self.re!r}{sign}{abs(self.im)!r}i"


INFINITY = ComplexValue(at_infinity=True)


def as_complex_value(z) -> ComplexValue:
    """Coerce a number (or ComplexValue) to a ComplexValue; non-finite input becomes infinity."""
    if isinstance(z, ComplexValue):
        return z
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return INFINITY
    return ComplexValue(z.real, z.imag)


class SpherePoint(NamedTuple):
    xi1: float
    xi2: float
    xi3: float


NORTH_POLE = SpherePoint(0.0, 0.0, 1.0)


def check_p(p: float) -> float:
    p = float(p)
    if not (0.0 < p <= 1.0):
        raise ValueError(f"p must lie in (0, 1], got {p}")
    return p


@numba.njit(nogil=True, cache=True)
def _is_infinite(x, y, inf):
    # NaN fails both comparisons and lands here as well.
    return inf or not (abs(x) <= OVERFLOW_LIMIT and abs(y) <= OVERFLOW_LIMIT)


@numba.njit(nogil=True, cache=True)
def _project(x, y, inf):
    if _is_infinite(x, y, inf):
        return 0.0, 0.0, 1.0
    r2 = x * x + y * y
    d = r2 + 1.0
    return 2.0 * x / d, 2.0 * y / d, (r2 - 1.0) / d


@numba.njit(nogil=True, cache=True)
def _unproject(xi1, xi2, xi3):
    """Return (re, im, at_infinity)."""
    if xi3 >= 1.0 - POLE_EPS:
        return 0.0, 0.0, True
    if xi3 > 0.0:
        # 1 - xi3 = (xi1^2 + xi2^2) / (1 + xi3) without the cancellation near the pole.
        rho2 = xi1 * xi1 + xi2 * xi2
        if rho2 == 0.0:
            return 0.0, 0.0, True
        s = (1.0 + xi3) / rho2
        return xi1 * s, xi2 * s, False
    d = 1.0 - xi3
    return xi1 / d, xi2 / d, False


@numba.njit(nogil=True, cache=True)
def _step_norm(a1, a2, a3, b1, b2, b3, p):
    return abs(b1 - a1) ** p + abs(b2 - a2) ** p + abs(b3 - a3) ** p


def to_sphere(z) -> SpherePoint:
    """Project ``z`` onto the Riemann sphere; infinity and overflowing values go to the north pole."""
    z = as_complex_value(z)
    return SpherePoint(*_project(z.re, z.im, z.at_infinity))


def from_sphere(xi) -> ComplexValue:
    """Inverse stereographic projection.

    Raises ValueError if ``xi`` is further than 1e-9 from the unit sphere.
    """
    xi1, xi2, xi3 = (float(v) for v in xi)
    norm2 = xi1 * xi1 + xi2 * xi2 + xi3 * xi3
    if not abs(norm2 - 1.0) <= UNIT_NORM_TOL:
        raise ValueError(f"point {xi!r} is not on the unit sphere (|xi|^2 = {norm2!r})")
    re, im, inf = _unproject(xi1, xi2, xi3)
    return INFINITY if inf else ComplexValue(re, im)


def sphere_step_norm(a, b, p: float) -> float:
    """Sum over the three coordinates of ``|a_j - b_j| ** p``."""
    p = check_p(p)
    return float(_step_norm(a[0], a[1], a[2], b[0], b[1], b[2], p))


@numba.njit(nogil=True, cache=True)
def _to_sphere_many(re, im, out):
    for i in range(re.shape[0]):
        out[i, 0], out[i, 1], out[i, 2] = _project(re[i], im[i], False)


@numba.njit(nogil=True, cache=True)
def _from_sphere_many(xi, re, im):
    for i in range(xi.shape[0]):
        x, y, inf = _unproject(xi[i, 0], xi[i, 1], xi[i, 2])
        if inf:
            re[i] = np.inf
            im[i] = np.inf
        else:
            re[i] = x
            im[i] = y


def to_sphere_many(z) -> np.ndarray:
    """Vectorised :func:`to_sphere` for an array of complex numbers; returns shape ``(n, 3)``.

    Non-finite entries project to the north pole.
    """
    z = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    out = np.empty((z.size, 3))
    _to_sphere_many(np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag), out)
    return out


def from_sphere_many(xi) -> np.ndarray:
    """Vectorised :func:`from_sphere`; the north pole maps to ``inf + inf*j``."""
    xi = np.ascontiguousarray(xi, dtype=np.float64).reshape(-1, 3)
    norm2 = np.einsum("ij,ij->i", xi, xi)
    if not np.all(np.abs(norm2 - 1.0) <= UNIT_NORM_TOL):
        raise ValueError("input contains points off the unit sphere")
    out = np.empty(xi.shape[0], dtype=np.complex128)
    re = np.empty(xi.shape[0])
    im = np.empty(xi.shape[0])
    _from_sphere_many(xi, re, im)
    out.real = re
    out.imag = im
    return out
