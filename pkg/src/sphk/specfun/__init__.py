from .bessel import BesselOrder, asymptotic_k, bessel_k, bessel_k_large, bessel_k_series, k_integral_oracle
from .hecke import HeckeFit, hecke_identity_check
from .integrals import PolyP, I_z, I_z_oracle, fourier_line_integral, fourier_line_oracle, p_ell

__all__ = [
    "BesselOrder",
    "HeckeFit",
    "I_z",
    "I_z_oracle",
    "PolyP",
    "asymptotic_k",
    "bessel_k",
    "bessel_k_large",
    "bessel_k_series",
    "fourier_line_integral",
    "fourier_line_oracle",
    "hecke_identity_check",
    "k_integral_oracle",
    "p_ell",
]
