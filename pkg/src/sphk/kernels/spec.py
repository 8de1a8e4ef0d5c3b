from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import DomainError
from ..rootsys import RootSystemData


@dataclass(frozen=True)
class KernelSpec:
    rs: RootSystemData
    z: complex
    nu: int
    b: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if not self.z.real > 0:
            raise DomainError(f"Re(z) must be positive, got {self.z}")
        if int(self.nu) != self.nu or self.nu < 1:
            raise DomainError(f"nu must be a positive integer, got {self.nu}")
        object.__setattr__(self, "nu", int(self.nu))
        if self.b is not None:
            if not self.b > 0:
                raise DomainError(f"shell radius must be positive, got {self.b}")
            object.__setattr__(self, "b", float(self.b))

    @property
    def n(self) -> int:
        return self.rs.rank

    @property
    def d(self) -> int:
        return self.rs.d

    @property
    def dim(self) -> int:
        return self.n + 2 * self.d

    @property
    def lambda_z(self) -> complex:
        return self.z**2 - float(self.rs.rho_norm_sq)

    @property
    def bessel_order(self) -> Fraction:
        """nu - d - n/2, the K-Bessel order of the closed form."""
        return Fraction(self.nu) - self.d - Fraction(self.n, 2)

    @property
    def pointwise_u(self) -> bool:
        return self.nu > self.n / 2 + self.d

    @property
    def pointwise_v(self) -> bool:
        return self.nu > (self.dim + 1) / 4

    def with_nu(self, nu: int) -> "KernelSpec":
        return KernelSpec(self.rs, self.z, nu, self.b)

    def with_z(self, z) -> "KernelSpec":
        return KernelSpec(self.rs, z, self.nu, self.b)

    def with_b(self, b) -> "KernelSpec":
        return KernelSpec(self.rs, self.z, self.nu, b)

    def params(self) -> dict:
        out = {"algebra": self.rs.label, "z_re": self.z.real, "z_im": self.z.imag, "nu": self.nu}
        if self.b is not None:
            out["b"] = self.b
        return out


def minimal_nu(rs: RootSystemData) -> int:
    """Smallest integer nu with nu > n/2 + d."""
    return rs.d + rs.rank // 2 + 1


def gram_c(rs: RootSystemData) -> float:
    if rs.rank != 1:
        raise DomainError("operation is implemented for rank one only")
    return float(rs.gram[0][0])


def ray_point(rs: RootSystemData, r: float, direction=None) -> np.ndarray:
    """The point at Gram norm r along a chamber direction (default rho)."""
    d = np.asarray(rs.rho_f if direction is None else direction, dtype=float)
    return d * (r / float(rs.norm(d)))


def hyperbolic_units(rs: RootSystemData) -> float:
    """sqrt(c) for A1: converts Gram radius to the geodesic radius alpha(H)."""
    return math.sqrt(gram_c(rs))
