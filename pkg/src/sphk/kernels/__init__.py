"""Fundamental and shell solutions of powers of the shifted Laplacian."""

from .fundamental import (
    HallMitchellReport,
    euclidean_fundamental,
    hall_mitchell_check,
    j_half_inverse,
    u_z_closed,
    u_z_minimal_form,
    u_z_radial,
    u_z_spectral,
    u_z_spectral_folded,
)
from .resolvent import ResolventReport, resolvent_relation_check
from .shell import (
    composite_distance,
    sl2c_scale,
    v_z_a1_closed,
    v_z_convolution,
    v_z_radial,
    v_z_sl2c_closed,
    v_z_sl2c_printed,
    v_z_sl2c_profile,
    v_z_spectral,
)
from .spec import KernelSpec, gram_c, hyperbolic_units, minimal_nu, ray_point
from .weak import RadialBump, calibration_constant, weak_solution_residual

__all__ = [
    "HallMitchellReport",
    "KernelSpec",
    "RadialBump",
    "ResolventReport",
    "calibration_constant",
    "composite_distance",
    "euclidean_fundamental",
    "gram_c",
    "hall_mitchell_check",
    "hyperbolic_units",
    "j_half_inverse",
    "minimal_nu",
    "ray_point",
    "resolvent_relation_check",
    "sl2c_scale",
    "u_z_closed",
    "u_z_minimal_form",
    "u_z_radial",
    "u_z_spectral",
    "u_z_spectral_folded",
    "v_z_a1_closed",
    "v_z_convolution",
    "v_z_radial",
    "v_z_sl2c_closed",
    "v_z_sl2c_printed",
    "v_z_sl2c_profile",
    "v_z_spectral",
    "weak_solution_residual",
]
