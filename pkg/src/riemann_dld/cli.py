"""Command line front end: ``riemann-dld {field,ridges,orbit,presets}``.

Exit status 0 on success, 2 for bad arguments, 1 for I/O failures.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import io
from .descriptor import DescriptorParams
from .field import (
    DEFAULT_PERCENTILE,
    DomainSpec,
    Kernel,
    ValueKind,
    evaluate_field,
    extract_ridges,
    gradient_magnitude,
)
from .maps import MapSpec, iterate_orbit
from .presets import PRESETS

# Fallbacks when neither a preset nor a flag supplies a value.
DEFAULT_P = 0.25
DEFAULT_ITERS = 200
DEFAULT_ORBIT_ITERS = 50
DEFAULT_RES = (800, 800)
DEFAULT_WINDOW = (-2.0, 2.0, -2.0, 2.0)

# Flags whose values may legitimately start with "-" (e.g. "--c -1+0i").
_SIGNED_VALUE_FLAGS = {"--c", "--z0", "--window", "--p", "--percentile", "--iters", "--threads"}
_MAP_SOURCE_KEYS = {"preset", "map", "c"}

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_FULL = re.compile(rf"^(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?)i$")
_COMPLEX_IMAG = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")
_REAL = re.compile(rf"^[+-]?{_NUM}$")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi``, ``a-bi``, ``bi`` or ``a`` (no spaces)."""

    def imag(part):
        return float(part + "1") if part in ("", "+", "-") else float(part)

    text = text.strip()
    if m := _COMPLEX_FULL.match(text):
        return complex(float(m["re"]), imag(m["im"]))
    if m := _COMPLEX_IMAG.match(text):
        return complex(0.0, imag(m["im"]))
    if _REAL.match(text):
        return complex(float(text), 0.0)
    raise argparse.ArgumentTypeError(f"malformed complex number {text!r}; expected a+bi or a-bi")


def parse_p(text: str) -> float:
    try:
        p = float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed p {text!r}") from None
    if not 0.0 < p <= 1.0:
        raise argparse.ArgumentTypeError(f"p must lie in (0,1], got {text}")
    return p


def parse_iters(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed iteration count {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"iteration count must be >= 1, got {n}")
    return n


def parse_threads(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed thread count {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("thread count must be >= 0 (0 = all cores)")
    return n


def parse_res(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)[xX](\d+)", text.strip())
    if not m:
        raise argparse.ArgumentTypeError(f"malformed resolution {text!r}; expected WIDTHxHEIGHT")
    w, h = int(m[1]), int(m[2])
    if w < 2 or h < 2:
        raise argparse.ArgumentTypeError("resolution must be at least 2x2")
    return w, h


def parse_window(text: str) -> tuple[float, float, float, float]:
    parts = text.strip().split(":")
    try:
        xmin, xmax, ymin, ymax = (float(v) for v in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed window {text!r}; expected xmin:xmax:ymin:ymax") from None
    if not (xmin < xmax and ymin < ymax):
        raise argparse.ArgumentTypeError("window needs xmin < xmax and ymin < ymax")
    return xmin, xmax, ymin, ymax


def parse_percentile(text: str) -> float:
    try:
        q = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed percentile {text!r}") from None
    if not 0.0 < q < 100.0:
        raise argparse.ArgumentTypeError(f"percentile must lie in (0,100), got {text}")
    return q


def _add_map_source(sp):
    sp.add_argument("--preset", choices=sorted(PRESETS), help="named catalogue entry (see `presets`)")
    sp.add_argument("--map", choices=["quadratic", "newton"], help="map family when no preset is used")
    sp.add_argument("--c", type=parse_complex, help="quadratic parameter, e.g. -0.123+0.745i")


def _add_common(sp):
    sp.add_argument("--config", type=Path, help="key = value file mirroring the flags")
    sp.add_argument("--threads", type=parse_threads, help="worker threads (0 = all cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riemann-dld",
        description="Lagrangian descriptors of complex maps computed on the Riemann sphere.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    f = sub.add_parser("field", help="compute a descriptor raster")
    _add_map_source(f)
    f.add_argument("--p", type=parse_p, help="norm exponent in (0,1]; fractions like 1/64 accepted")
    f.add_argument("--iters", type=parse_iters, help="iteration count N")
    f.add_argument("--res", type=parse_res, help="WIDTHxHEIGHT")
    f.add_argument("--window", type=parse_window, help="xmin:xmax:ymin:ymax")
    f.add_argument("--kernel", choices=[k.value for k in Kernel], help="sphere (default) or planar")
    f.add_argument("--out", type=Path, help="output file; format from suffix (.ldf, .pgm, .png)")
    f.add_argument("--pgm", type=Path, help="also write a 16-bit PGM image")
    f.add_argument("--png", type=Path, help="also write a colour PNG image")
    _add_common(f)
    f.set_defaults(handler=cmd_field, subparser=f)

    r = sub.add_parser("ridges", help="gradient magnitude and ridge mask of a descriptor raster")
    r.add_argument("--in", dest="input", type=Path, help="descriptor raster (.ldf)")
    r.add_argument("--percentile", type=parse_percentile, help=f"ridge threshold (default {DEFAULT_PERCENTILE:g})")
    r.add_argument("--out", type=Path, help="mask output; format from suffix (.ldf, .pgm, .png)")
    r.add_argument("--grad", type=Path, help="gradient magnitude output; format from suffix")
    r.add_argument("--pgm", type=Path, help="also write the mask as PGM")
    r.add_argument("--png", type=Path, help="also write the mask as PNG")
    _add_common(r)
    r.set_defaults(handler=cmd_ridges, subparser=r)

    o = sub.add_parser("orbit", help="iterate initial conditions and write k,re,im,xi1,xi2,xi3 rows")
    _add_map_source(o)
    o.add_argument("--z0", type=parse_complex, action="append", help="initial condition (repeatable)")
    o.add_argument("--iters", type=parse_iters, help=f"iteration count (default {DEFAULT_ORBIT_ITERS})")
    o.add_argument("--out", type=Path, help="CSV path (default: standard output)")
    _add_common(o)
    o.set_defaults(handler=cmd_orbit, subparser=o)

    ps = sub.add_parser("presets", help="list the parameter catalogue")
    ps.set_defaults(handler=cmd_presets, subparser=ps)
    return parser


def _join_signed_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def read_config(path: Path) -> dict[str, str]:
    entries = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        entries[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return entries


def _apply_config(sp, args) -> None:
    """Fill options not given on the command line from ``--config``."""
    try:
        entries = read_config(args.config)
    except OSError as exc:
        raise _IOFailure(f"cannot read config: {exc}") from None
    except ValueError as exc:
        sp.error(str(exc))
    actions = {a.dest: a for a in sp._actions if a.option_strings}
    if any(getattr(args, k, None) is not None for k in _MAP_SOURCE_KEYS):
        entries = {k: v for k, v in entries.items() if k not in _MAP_SOURCE_KEYS}
    for key, text in entries.items():
        key = "input" if key == "in" else key
        action = actions.get(key)
        if action is None or key == "config":
            sp.error(f"unknown config key {key!r}")
        if getattr(args, key) is not None:
            continue
        try:
            value = action.type(text) if action.type else text
        except argparse.ArgumentTypeError as exc:
            sp.error(f"config {key}: {exc}")
        if action.choices is not None and value not in action.choices:
            sp.error(f"config {key}: invalid choice {value!r}")
        setattr(args, key, [value] if isinstance(action, argparse._AppendAction) else value)


class _IOFailure(Exception):
    pass


def _resolve_map(sp, args):
    """Return (MapSpec, preset or None), enforcing exactly one map source."""
    if args.preset is not None:
        if args.map is not None or args.c is not None:
            sp.error("--preset cannot be combined with --map/--c")
        preset = PRESETS[args.preset]
        return preset.spec, preset
    kind = args.map or ("quadratic" if args.c is not None else None)
    if kind is None:
        sp.error("a map source is required: --preset NAME, or --map quadratic --c a+bi, or --map newton")
    if kind == "newton":
        if args.c is not None:
            sp.error("--c only applies to the quadratic map")
        return MapSpec.newton(), None
    if args.c is None:
        sp.error("--map quadratic needs --c")
    return MapSpec.quadratic(args.c), None


def _write_grid(path: Path, grid) -> None:
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        io.write_pgm(path, grid)
    elif suffix == ".png":
        io.write_png(path, grid)
    else:
        io.write_ldf(path, grid)


def _write_outputs(args, grid) -> None:
    if args.out:
        _write_grid(args.out, grid)
    if args.pgm:
        io.write_pgm(args.pgm, grid)
    if args.png:
        io.write_png(args.png, grid)


def cmd_field(sp, args) -> int:
    spec, preset = _resolve_map(sp, args)
    p = args.p if args.p is not None else (preset.params.p if preset else DEFAULT_P)
    n = args.iters if args.iters is not None else (preset.params.n if preset else DEFAULT_ITERS)
    window = args.window or (preset.window if preset else DEFAULT_WINDOW)
    width, height = args.res or DEFAULT_RES
    domain = DomainSpec(*window, width, height)
    kernel = Kernel(args.kernel or Kernel.SPHERE.value)

    t0 = time.perf_counter()
    grid = evaluate_field(spec, domain, DescriptorParams(p, n), kernel, workers=args.threads or 0)
    elapsed = time.perf_counter() - t0

    _write_outputs(args, grid)
    print(f"{spec} p={format_p(p)} N={n} kernel={kernel.value} {io.summary_line(grid, elapsed)}")
    return 0


def cmd_ridges(sp, args) -> int:
    if args.input is None:
        sp.error("--in is required")
    percentile = args.percentile if args.percentile is not None else DEFAULT_PERCENTILE
    grid = io.read_ldf(args.input)
    if grid.kind is not ValueKind.DESCRIPTOR:
        raise io.LDFError(f"{args.input}: expected a descriptor raster, found {grid.kind.name.lower()}")
    grad = gradient_magnitude(grid)
    mask = extract_ridges(grad, percentile)
    if args.grad:
        _write_grid(args.grad, grad)
    _write_outputs(args, mask)
    marked = int(mask.values.sum())
    print(f"percentile={percentile:g} marked={marked} of {mask.values.size}")
    return 0


def cmd_orbit(sp, args) -> int:
    spec, preset = _resolve_map(sp, args)
    if not args.z0:
        sp.error("at least one --z0 is required")
    n = args.iters if args.iters is not None else DEFAULT_ORBIT_ITERS
    traces = [iterate_orbit(spec, z0, n) for z0 in args.z0]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            io.write_orbits_csv(fh, traces)
    else:
        io.write_orbits_csv(sys.stdout, traces)
    return 0


def format_p(p: float) -> str:
    """Show dyadic and other small-denominator exponents as fractions."""
    frac = Fraction(p).limit_denominator(1024)
    return str(frac) if float(frac) == p else f"{p:g}"


def cmd_presets(sp, args) -> int:
    print(f"{'name':<17} {'figure':<7} {'c':<18} {'p':<7} {'N':<5} {'window':<18} label")
    for p in PRESETS.values():
        c = "-" if p.spec.kind.name == "NEWTON_CUBIC" else f"{p.spec.c.real:g}{p.spec.c.imag:+g}i"
        w = ":".join(f"{v:g}" for v in p.window)
        print(f"{p.name:<17} {p.figure:<7} {c:<18} {format_p(p.params.p):<7} {p.params.n:<5} {w:<18} {p.label}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = _join_signed_values(list(sys.argv[1:] if argv is None else argv))
    args = parser.parse_args(argv)
    sp = args.subparser
    try:
        if getattr(args, "config", None) is not None:
            _apply_config(sp, args)
        return args.handler(sp, args)
    except (_IOFailure, OSError, io.LDFError) as exc:
        print(f"riemann-dld: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
