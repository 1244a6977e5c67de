"""Discrete Lagrangian descriptors of complex maps, computed on the Riemann sphere."""

from .descriptor import INVALID, DescriptorParams, dld_planar_forward, dld_sphere
from .field import DomainSpec, FieldGrid, Kernel, ValueKind, evaluate_field, extract_ridges, gradient_magnitude, sample_point
from .maps import MapKind, MapSpec, OrbitTrace, iterate_orbit, known_fixed_points, map_step
from .presets import PRESETS, Preset, get_preset
from .sphere import INFINITY, ComplexValue, SpherePoint, from_sphere, sphere_step_norm, to_sphere

__version__ = "0.1.0"
