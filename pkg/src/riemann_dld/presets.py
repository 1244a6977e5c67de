"""Named map configurations for the reference renders.

Each preset fixes the map, the descriptor parameters of its figure bundle,
and a default viewing window.  This table is the only copy of the catalogue.
"""

from __future__ import annotations

from dataclasses import dataclass

from .descriptor import FIGURE_PARAMS, DescriptorParams
from .maps import MapSpec

__all__ = ["Preset", "PRESETS", "get_preset"]


@dataclass(frozen=True)
class Preset:
    name: str
    label: str
    spec: MapSpec
    params: DescriptorParams
    window: tuple[float, float, float, float]
    figure: str


def _q(name, label, c, fig, panel, window):
    return Preset(name, label, MapSpec.quadratic(c), FIGURE_PARAMS[fig], window, f"{fig}{panel}")


_W15 = (-1.5, 1.5, -1.5, 1.5)
_W16 = (-1.6, 1.6, -1.6, 1.6)
_W18 = (-1.8, 1.8, -1.8, 1.8)
_W2 = (-2.0, 2.0, -2.0, 2.0)

PRESETS: dict[str, Preset] = {
    p.name: p
    for p in [
        _q("unit-circle", "Unit circle Julia set", 0, 2, "A", _W15),
        _q("dendrite", "Dendrite fractal", 1j, 1, "", _W18),
        _q("cauliflower", "Cauliflower parabolic set", 0.25, 3, "", _W15),
        _q("san-marco", "San Marco Basilica", -1, 2, "B", _W2),
        _q("fat-basilica", "Fat Basilica", -0.75, 4, "", _W2),
        _q("rabbit", "Douady's rabbit", -0.123 + 0.745j, 5, "", _W16),
        _q("open-cauliflower", "Open cauliflower", 0.285 + 0.01j, 6, "A", _W16),
        _q("flower-minus", "Flower-type fractal (c = -0.1 - 0.651i)", -0.1 - 0.651j, 6, "C", _W16),
        _q("flower-plus", "Flower-type fractal (c = -0.1 + 0.651i)", -0.1 + 0.651j, 6, "C", _W16),
        _q("siegel", "Siegel disk fractal", -0.391 - 0.587j, 6, "E", _W16),
        Preset("newton", "Newton's method for z^3 - 1", MapSpec.newton(), FIGURE_PARAMS[7], _W2, "7"),
    ]
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
