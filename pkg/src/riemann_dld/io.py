"""File formats: LDF rasters, 16-bit PGM / colour PNG images, orbit CSV.

LDF layout (little-endian)::

    offset  size  field
    0       4     magic b"LDF1"
    4       4     u32 width
    8       4     u32 height
    12      1     u8 value kind (0 descriptor, 1 gradient magnitude, 2 ridge mask)
    13      3     zero padding
    16      32    f64 xmin, xmax, ymin, ymax
    48      8*w*h f64 values, row-major, top row first

NaN is always stored as 0x7ff8000000000000.
"""

from __future__ import annotations

import math
import struct
from pathlib import Path

import numpy as np
from PIL import Image

from .field import DomainSpec, FieldGrid, ValueKind, canonical_nan, nearest_rank
from .maps import OrbitTrace

__all__ = [
    "LDFError",
    "write_ldf",
    "read_ldf",
    "normalize_to_uint16",
    "write_pgm",
    "read_pgm",
    "write_png",
    "write_orbits_csv",
    "ORBIT_HEADER",
]

LDF_MAGIC = b"LDF1"
_HEADER = struct.Struct("<4sIIB3x4d")
ORBIT_HEADER = "k,re,im,xi1,xi2,xi3"

# Clip window for image normalisation, in percent of the finite values.
CLIP_LOW, CLIP_HIGH = 2.0, 98.0

# Anchor colours of the PNG colormap; luminance increases monotonically.
_CMAP_STOPS = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
_CMAP_RGB = np.array(
    [
        [0, 0, 4],
        [87, 16, 110],
        [188, 55, 84],
        [249, 142, 9],
        [252, 255, 164],
    ],
    dtype=np.float64,
)


class LDFError(ValueError):
    pass


def ldf_bytes(grid: FieldGrid) -> bytes:
    d = grid.domain
    header = _HEADER.pack(LDF_MAGIC, d.width, d.height, int(grid.kind), d.xmin, d.xmax, d.ymin, d.ymax)
    return header + canonical_nan(grid.values).astype("<f8").tobytes()


def write_ldf(path, grid: FieldGrid) -> None:
    Path(path).write_bytes(ldf_bytes(grid))


def read_ldf(path) -> FieldGrid:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size or data[:4] != LDF_MAGIC:
        raise LDFError(f"{path}: not an LDF file")
    _, width, height, kind, xmin, xmax, ymin, ymax = _HEADER.unpack_from(data)
    if data[13:16] != b"\0\0\0":
        raise LDFError(f"{path}: corrupt header padding")
    if kind not in (0, 1, 2):
        raise LDFError(f"{path}: unknown value kind {kind}")
    expected = _HEADER.size + 8 * width * height
    if len(data) != expected:
        raise LDFError(f"{path}: size mismatch, expected {expected} bytes for {width}x{height}, got {len(data)}")
    try:
        domain = DomainSpec(xmin, xmax, ymin, ymax, width, height)
    except ValueError as exc:
        raise LDFError(f"{path}: bad domain: {exc}") from None
    values = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).astype(np.float64)
    return FieldGrid(domain, values, ValueKind(kind))


def normalize_to_uint16(grid: FieldGrid) -> np.ndarray:
    """Map a raster to 0..65535.

    Masks map 1 to white.  Other fields are clipped to the 2nd..98th
    nearest-rank percentile of their finite values and scaled linearly.
    NaN becomes 0.
    """
    v = grid.values
    finite = np.isfinite(v)
    out = np.zeros(v.shape, dtype=np.uint16)
    if grid.kind is ValueKind.RIDGE_MASK:
        out[finite & (v > 0)] = 65535
        return out
    if not finite.any():
        return out
    lo = nearest_rank(v, CLIP_LOW)
    hi = nearest_rank(v, CLIP_HIGH)
    if hi <= lo:
        return out
    scaled = (np.clip(v[finite], lo, hi) - lo) / (hi - lo)
    out[finite] = np.rint(scaled * 65535.0).astype(np.uint16)
    return out


def write_pgm(path, grid: FieldGrid) -> None:
    """Binary 16-bit PGM (big-endian samples, maxval 65535)."""
    img = normalize_to_uint16(grid)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n65535\n".encode("ascii"))
        fh.write(img.astype(">u2").tobytes())


def read_pgm(path) -> np.ndarray:
    """Read a binary PGM written by :func:`write_pgm` (or any 8/16-bit P5 file)."""
    data = Path(path).read_bytes()
    fields = []
    pos = 0
    while len(fields) < 4:
        while data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end : end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end
    if fields[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM")
    w, h, maxval = (int(f) for f in fields[1:])
    dtype = ">u2" if maxval > 255 else "u1"
    return np.frombuffer(data, dtype=dtype, count=w * h, offset=pos + 1).reshape(h, w).astype(np.uint16)


def colorize(img16: np.ndarray) -> np.ndarray:
    t = img16.astype(np.float64) / 65535.0
    rgb = np.stack([np.interp(t, _CMAP_STOPS, _CMAP_RGB[:, k]) for k in range(3)], axis=-1)
    return np.rint(rgb).astype(np.uint8)


def write_png(path, grid: FieldGrid) -> None:
    """8-bit RGB PNG with the same normalisation as the PGM output."""
    Image.fromarray(colorize(normalize_to_uint16(grid))).save(path, format="PNG")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_orbits_csv(fh, traces: list[OrbitTrace]) -> None:
    """Write one block of rows per orbit under a single header; ``k`` restarts at 0 for each orbit."""
    fh.write(ORBIT_HEADER + "\n")
    for trace in traces:
        for k, (z, xi) in enumerate(zip(trace.points, trace.sphere_points)):
            if z.at_infinity:
                re = im = "inf"
            else:
                re, im = _fmt(z.re), _fmt(z.im)
            fh.write(f"{k},{re},{im},{_fmt(xi.xi1)},{_fmt(xi.xi2)},{_fmt(xi.xi3)}\n")


def summary_line(grid: FieldGrid, seconds: float) -> str:
    v = grid.values
    finite = v[np.isfinite(v)]
    lo = finite.min() if finite.size else math.nan
    hi = finite.max() if finite.size else math.nan
    return (
        f"{grid.domain.width}x{grid.domain.height} min={lo:.6g} max={hi:.6g} "
        f"nan={int(np.isnan(v).sum())} time={seconds:.3f}s"
    )
