"""Descriptor fields over pixel grids, their gradient magnitude, and ridge masks.

Pixels are sampled at their centres, row 0 at the top of the image.  Grid
evaluation splits the image into row blocks handed to a thread pool; the
numba kernels release the GIL, and every pixel is written exactly once by the
same scalar routine, so the raster does not depend on the worker count.
"""

from __future__ import annotations

import enum
import math
import os
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .descriptor import DescriptorParams, _planar_sum, _sphere_sum
from .maps import MapSpec
from .sphere import ComplexValue

__all__ = [
    "DomainSpec",
    "FieldGrid",
    "ValueKind",
    "Kernel",
    "sample_point",
    "sample_grid",
    "evaluate_field",
    "gradient_magnitude",
    "nearest_rank",
    "extract_ridges",
    "canonical_nan",
    "DEFAULT_PERCENTILE",
]

DEFAULT_PERCENTILE = 90.0
_ROWS_PER_TASK = 8


class ValueKind(enum.IntEnum):
    DESCRIPTOR = 0
    GRADIENT_MAGNITUDE = 1
    RIDGE_MASK = 2


class Kernel(enum.Enum):
    SPHERE = "sphere"
    PLANAR_FORWARD = "planar"


@dataclass(frozen=True)
class DomainSpec:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    width: int
    height: int

    def __post_init__(self):
        for name in ("xmin", "xmax", "ymin", "ymax"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("domain needs xmin < xmax and ymin < ymax")
        if int(self.width) < 2 or int(self.height) < 2:
            raise ValueError(f"grid must be at least 2x2, got {self.width}x{self.height}")
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.width

    @property
    def dy(self) -> float:
        return (self.ymax - self.ymin) / self.height

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width


@dataclass(frozen=True, eq=False)
class FieldGrid:
    """Raster of values over a domain, shape ``(height, width)``, top row first."""

    domain: DomainSpec
    values: np.ndarray
    kind: ValueKind = ValueKind.DESCRIPTOR

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.size != self.domain.width * self.domain.height:
            raise ValueError(
                f"expected {self.domain.width * self.domain.height} values, got {values.size}"
            )
        object.__setattr__(self, "values", values.reshape(self.domain.shape))
        object.__setattr__(self, "kind", ValueKind(self.kind))


def canonical_nan(values: np.ndarray) -> np.ndarray:
    """Replace every NaN (any sign or payload) by the plain quiet NaN 0x7ff8000000000000."""
    values = np.array(values, dtype=np.float64, copy=True)
    values.view(np.uint64)[np.isnan(values)] = np.uint64(0x7FF8000000000000)
    return values


def sample_point(domain: DomainSpec, col: int, row: int) -> ComplexValue:
    if not (0 <= col < domain.width and 0 <= row < domain.height):
        raise IndexError(f"pixel ({col}, {row}) outside {domain.width}x{domain.height} grid")
    x, y = _pixel_center(domain.xmin, domain.xmax, domain.ymin, domain.ymax, domain.width, domain.height, col, row)
    return ComplexValue(x, y)


def sample_grid(domain: DomainSpec) -> np.ndarray:
    """Complex array of every pixel centre, identical to :func:`sample_point`."""
    cols = np.arange(domain.width, dtype=np.float64)
    rows = np.arange(domain.height, dtype=np.float64)
    x = domain.xmin + (cols + 0.5) * (domain.xmax - domain.xmin) / domain.width
    y = domain.ymax - (rows + 0.5) * (domain.ymax - domain.ymin) / domain.height
    z = np.empty(domain.shape, dtype=np.complex128)
    z.real = x[None, :]
    z.imag = y[:, None]
    return z


@numba.njit(nogil=True, cache=True)
def _pixel_center(xmin, xmax, ymin, ymax, width, height, col, row):
    x = xmin + (col + 0.5) * (xmax - xmin) / width
    y = ymax - (row + 0.5) * (ymax - ymin) / height
    return x, y


@numba.njit(nogil=True, cache=True)
def _fill_rows(out, row0, row1, planar, kind, cre, cim, xmin, xmax, ymin, ymax, n, p):
    height, width = out.shape
    for row in range(row0, row1):
        for col in range(width):
            x, y = _pixel_center(xmin, xmax, ymin, ymax, width, height, col, row)
            if planar:
                out[row, col] = _planar_sum(kind, cre, cim, x, y, False, n, p)
            else:
                out[row, col] = _sphere_sum(kind, cre, cim, x, y, False, n, p)


def _resolve_workers(workers: int) -> int:
    if workers < 0:
        raise ValueError("worker count must be >= 0")
    return workers or os.cpu_count() or 1


def evaluate_field(
    spec: MapSpec,
    domain: DomainSpec,
    params: DescriptorParams,
    kernel: Kernel = Kernel.SPHERE,
    workers: int = 0,
) -> FieldGrid:
    """Evaluate a descriptor at every pixel centre of ``domain``.

    ``workers=0`` uses one thread per CPU.  With the planar kernel, pixels
    whose orbit escapes hold a quiet NaN.
    """
    kernel = Kernel(kernel)
    workers = _resolve_workers(workers)
    out = np.empty(domain.shape)
    args = (
        kernel is Kernel.PLANAR_FORWARD,
        int(spec.kind),
        spec.c.real,
        spec.c.imag,
        domain.xmin,
        domain.xmax,
        domain.ymin,
        domain.ymax,
        params.n,
        params.p,
    )
    blocks = [(r, min(r + _ROWS_PER_TASK, domain.height)) for r in range(0, domain.height, _ROWS_PER_TASK)]
    if workers == 1:
        for r0, r1 in blocks:
            _fill_rows(out, r0, r1, *args)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for fut in [pool.submit(_fill_rows, out, r0, r1, *args) for r0, r1 in blocks]:
                fut.result()
    return FieldGrid(domain, canonical_nan(out), ValueKind.DESCRIPTOR)


def gradient_magnitude(grid: FieldGrid) -> FieldGrid:
    """``sqrt(gx**2 + gy**2)`` in plane units.

    Central differences inside, one-sided differences on the border; NaN
    pixels poison their neighbours' derivatives.
    """
    if grid.kind is not ValueKind.DESCRIPTOR:
        raise ValueError(f"gradient needs a descriptor field, got {grid.kind.name}")
    d = grid.domain
    if d.width < 2 or d.height < 2:
        raise ValueError("gradient needs at least a 2x2 grid")
    # Rows run top to bottom, i.e. towards decreasing y.
    gy, gx = np.gradient(grid.values, -d.dy, d.dx)
    return FieldGrid(d, canonical_nan(np.hypot(gx, gy)), ValueKind.GRADIENT_MAGNITUDE)


def nearest_rank(values: np.ndarray, percentile: float) -> float:
    """Nearest-rank percentile of the finite entries of ``values``."""
    finite = np.sort(np.asarray(values, dtype=np.float64)[np.isfinite(values)], axis=None)
    if finite.size == 0:
        raise ValueError("no finite values")
    if not 0.0 < percentile <= 100.0:
        raise ValueError(f"percentile must lie in (0, 100], got {percentile}")
    # Exact rational arithmetic: 0.9 * 100 would round up to rank 91.
    rank = max(1, math.ceil(Fraction(percentile) * finite.size / 100))
    return float(finite[rank - 1])


def extract_ridges(grid: FieldGrid, percentile: float = DEFAULT_PERCENTILE) -> FieldGrid:
    """Mark pixels whose gradient magnitude reaches the given percentile (ties included)."""
    if grid.kind is not ValueKind.GRADIENT_MAGNITUDE:
        raise ValueError(f"ridge extraction needs a gradient field, got {grid.kind.name}")
    if not 0.0 < percentile < 100.0:
        raise ValueError(f"percentile must lie in (0, 100), got {percentile}")
    threshold = nearest_rank(grid.values, percentile)
    with np.errstate(invalid="ignore"):
        mask = grid.values >= threshold
    return FieldGrid(grid.domain, mask.astype(np.float64), ValueKind.RIDGE_MASK)
