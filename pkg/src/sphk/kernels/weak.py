"""Weak-form checks of (Delta - lambda_z)^nu k = source in rank one.

With S(r) = sinh(s r), s = sqrt(c), the radial Laplacian is
Delta = S^-1 (d^2 - c) S and lambda_z = z^2 - c, so
(Delta - lambda_z) = S^-1 (d^2 - z^2) S. Against the radial measure m = 4 S^2

    int k (Delta - lambda_z)^nu phi m dr = 4 int k S (d^2 - z^2)^nu (S phi) dr,

and the derivatives of S phi are exact (polynomial test functions, Leibniz
rule, closed derivatives of sinh).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial

from ..errors import DomainError
from ..rootsys import build_root_system
from ..spherical import gauss_legendre_panels, radial_measure_rank1
from .fundamental import u_z_radial
from .shell import v_z_radial
from .spec import KernelSpec, gram_c

CALIBRATION_POINT = dict(algebra="A1", nu=2, z=2.0)


@dataclass(frozen=True)
class RadialBump:
    """phi(r) = (1 - ((r - center)/width)^2)^power on |r - center| < width.

    A bump centred at 0 is even in r, hence a smooth radial function; any
    other bump must keep its support inside r > 0.
    """

    center: float
    width: float
    power: int = 12

    def __post_init__(self):
        if self.width <= 0 or self.power < 1:
            raise DomainError("width must be positive and power at least 1")
        if self.center != 0 and self.center - self.width < 0:
            raise DomainError("an off-centre bump must be supported in r > 0")

    @property
    def support(self) -> tuple[float, float]:
        return max(0.0, self.center - self.width), self.center + self.width

    @property
    def poly(self) -> Polynomial:
        # coefficients live in the scaled variable x = (r - center)/width;
        # expanding in powers of r would cancel catastrophically
        x = Polynomial([0.0, 1.0])
        coef = ((1 - x * x) ** self.power).coef
        a, b = self.center - self.width, self.center + self.width
        return Polynomial(coef, domain=[a, b], window=[-1, 1])

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        inside = np.abs(r - self.center) < self.width
        return np.where(inside, self.poly(r), 0.0)


def _s_derivative(s: float, r: np.ndarray, i: int) -> np.ndarray:
    return s**i * (np.sinh(s * r) if i % 2 == 0 else np.cosh(s * r))


def shifted_operator(phi: RadialBump, r: np.ndarray, z: complex, nu: int, c: float) -> np.ndarray:
    """(d^2 - z^2)^nu (S phi) at the nodes r."""
    s = math.sqrt(c)
    p = phi.poly
    order = 2 * nu
    dphi = [p.deriv(k)(r) if k else p(r) for k in range(order + 1)]
    dS = [_s_derivative(s, r, i) for i in range(order + 1)]
    deriv = []
    for j in range(order + 1):
        deriv.append(sum(math.comb(j, i) * dS[i] * dphi[j - i] for i in range(j + 1)))
    out = np.zeros_like(r, dtype=complex)
    for k in range(nu + 1):
        out += math.comb(nu, k) * (-z * z) ** (nu - k) * deriv[2 * k]
    return out


def kernel_values(spec: KernelSpec, mode: str, r: np.ndarray) -> np.ndarray:
    if mode == "delta":
        return np.array([u_z_radial(spec, x, allow_singular=True) for x in r])
    if mode == "shell":
        return np.array([v_z_radial(spec, x) for x in r])
    raise DomainError(f"mode must be 'delta' or 'shell', got {mode!r}")


def weak_lhs(spec: KernelSpec, phi: RadialBump, mode: str, panels: int = 16, order: int = 24) -> complex:
    if spec.n != 1:
        raise DomainError("weak-form checks are rank one only")
    c = gram_c(spec.rs)
    s = math.sqrt(c)
    lo, hi = phi.support
    cuts = [lo, hi]
    if mode == "shell" and lo < spec.b < hi:
        cuts.insert(1, spec.b)
    nodes, weights = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        x, w = gauss_legendre_panels(a, b, panels, order)
        nodes.append(x)
        weights.append(w)
    r = np.concatenate(nodes)
    w = np.concatenate(weights)
    k = kernel_values(spec, mode, r)
    d = shifted_operator(phi, r, complex(spec.z), spec.nu, c)
    return complex(4 * np.sum(w * k * np.sinh(s * r) * d))


def weak_rhs(spec: KernelSpec, phi: RadialBump, mode: str, c_cal: complex) -> complex:
    """c_cal phi(0) for the point source, c_cal * S_b(phi) for the shell.

    S_b(phi) sums phi m over the two points +-b of the rank-one sphere.
    """
    if mode == "delta":
        return complex(c_cal * phi(0.0))
    if spec.b is None:
        raise DomainError("shell mode needs b")
    c = gram_c(spec.rs)
    return complex(c_cal * 2 * float(phi(spec.b)) * float(radial_measure_rank1(spec.b, c)))


@lru_cache(maxsize=1)
def calibration_constant() -> float:
    """The single constant fitted once in delta mode (A1, nu = 2, z = 2) and
    then frozen."""
    rs = build_root_system(CALIBRATION_POINT["algebra"])
    spec = KernelSpec(rs, CALIBRATION_POINT["z"], CALIBRATION_POINT["nu"])
    phi = RadialBump(0.0, 1.0)
    return weak_lhs(spec, phi, "delta").real / float(phi(0.0))


def default_test_function(spec: KernelSpec, mode: str) -> RadialBump:
    if mode == "delta":
        return RadialBump(0.0, 1.0)
    return RadialBump(spec.b, min(0.3, 0.9 * spec.b))


def weak_solution_residual(spec: KernelSpec, test_fn: RadialBump | None = None, mode: str = "delta",
                           relative: bool = True) -> float:
    """|int k (Delta - lambda_z)^nu phi m - RHS(phi)| with the frozen constant.

    With relative=True the residual is divided by |RHS| (when the source meets
    the support of phi) or by the size of phi m on its support otherwise.
    """
    if mode not in ("delta", "shell"):
        raise DomainError(f"mode must be 'delta' or 'shell', got {mode!r}")
    if mode == "shell" and spec.b is None:
        raise DomainError("shell mode needs b")
    phi = default_test_function(spec, mode) if test_fn is None else test_fn
    lhs = weak_lhs(spec, phi, mode)
    lo, hi = phi.support
    if mode == "delta":
        meets = lo == 0
    else:
        meets = lo < spec.b < hi
    rhs = weak_rhs(spec, phi, mode, calibration_constant()) if meets else 0j
    res = abs(lhs - rhs)
    if not relative:
        return res
    if meets:
        return res / abs(rhs)
    grid = np.linspace(lo, hi, 201)
    scale = float(np.max(np.abs(phi(grid)) * radial_measure_rank1(grid, gram_c(spec.rs))))
    return res / scale
