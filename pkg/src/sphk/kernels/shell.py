"""The shell solution v_z of (Delta - lambda_z)^nu v = S_b.

S_b integrates against prod 4 sinh^2 alpha over the whole sphere |H| = b in a
(for rank one: the two points +-b). Folding the Weyl sums in the inverse
transform gives

    v(H) = |W| (-1)^nu / prod sinh alpha(H)
           * int_{|H'|=b} I_z(H - H') prod sinh alpha(H') dH'

with I_z the Euclidean integral on a. In rank one with gram c and Gram
radii r, b this is

    v(r) = 2 (-1)^nu sinh(sqrt(c) b) / sinh(sqrt(c) r) * (I_z(|r-b|) - I_z(r+b)).

The SL2(C) closed forms use the geodesic radius sigma = alpha(H), the
Laplacian with eigenvalue -(t^2 + 1/4) and z_R = z / (2 sqrt(c)).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from ..errors import DomainError, SingularInputError
from ..spherical import RadialPoint
from ..specfun.integrals import I_z
from .fundamental import u_z_radial
from .spec import KernelSpec, gram_c


def _need_b(spec: KernelSpec) -> float:
    if spec.b is None:
        raise DomainError("shell radius b is required")
    return spec.b


def v_z_spectral(spec: KernelSpec, H, circle_points: int = 360) -> complex:
    """Shell integral of the Euclidean kernel over |H'| = b (two points in
    rank one, a trapezoid rule on the circle in rank two)."""
    b = _need_b(spec)
    rs = spec.rs
    H = np.atleast_1d(np.asarray(H.H if isinstance(H, RadialPoint) else H, dtype=float))
    if H.shape != (spec.n,):
        raise DomainError(f"H must have length {spec.n}")
    if spec.n > 2:
        raise DomainError("shell quadrature is implemented for rank <= 2")
    alpha_H = rs.root_values(H)
    if np.min(np.abs(alpha_H)) < 1e-6:
        raise SingularInputError("v_z is evaluated at regular H only")
    Ho = rs.to_orth(H)
    if spec.n == 1:
        pts = np.array([[b], [-b]])
        weights = np.array([1.0, 1.0])
    else:
        th = (np.arange(circle_points) + 0.5) * (2 * math.pi / circle_points)
        pts = b * np.stack([np.cos(th), np.sin(th)], axis=1)
        weights = np.full(circle_points, 2 * math.pi * b / circle_points)
    if np.min(np.linalg.norm(pts - Ho, axis=1)) < 1e-12:
        raise SingularInputError("H lies on the shell")
    sinh_prod = np.prod(np.sinh(pts @ rs.roots_orth.T), axis=1)
    kern = np.array([I_z(spec.n, spec.nu, Ho - p, spec.z) for p in pts])
    total = np.sum(weights * kern * sinh_prod)
    return complex(rs.weyl_order * (-1) ** spec.nu * total / np.prod(np.sinh(alpha_H)))


def v_z_radial(spec: KernelSpec, r: float) -> complex:
    """Rank-one v_z at Gram radius r."""
    c = gram_c(spec.rs)
    return v_z_spectral(spec, [r / math.sqrt(c)])


def v_z_sl2c_profile(r, b: float, z, nu: int, inner=None) -> np.ndarray:
    """Closed shell solutions on hyperbolic 3-space (geodesic radius r), vectorized.

    nu = 1:  -sinh b / (z sinh r) * e^{-2bz} sinh(2rz)              (r < b)
             -sinh b / (z sinh r) * sinh(2bz) e^{-2rz}              (r > b)
    nu = 2:  sinh b / (2 z^3 sinh r) * e^{-2bz} ((1+2bz) sinh(2rz) - 2rz cosh(2rz))   (r < b)
             sinh b / (2 z^3 sinh r) * ((1+2rz) sinh(2bz) - 2bz cosh(2bz)) e^{-2rz}   (r > b)

    The nu = 2 branch is the re-derived one: it satisfies
    (Delta - lambda) v_2 = v_1 with Delta f = (f'' + 2 coth(r) f') / 4 and
    lambda = z^2 - 1/4, and it is finite at r = 0. `inner` (boolean array)
    overrides the r < b test, which is how one-sided limits at r = b are taken.
    r = 0 uses the removable limit.
    """
    z = complex(z)
    if not z.real > 0:
        raise DomainError("Re(z) must be positive")
    if nu not in (1, 2):
        raise DomainError("closed shell forms exist for nu in {1, 2}")
    if b <= 0:
        raise DomainError("need b > 0")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("need r >= 0")
    inner = r < b if inner is None else np.asarray(inner, dtype=bool)
    at0 = r == 0
    rr = np.where(at0, 1.0, r)
    sh = np.sinh(rr)
    if nu == 1:
        pre = -math.sinh(b) / (z * sh)
        lo = np.exp(-2 * b * z) * np.sinh(2 * rr * z)
        hi = np.sinh(2 * b * z) * np.exp(-2 * rr * z)
        limit = -2 * math.sinh(b) * np.exp(-2 * b * z)
    else:
        pre = math.sinh(b) / (2 * z**3 * sh)
        lo = np.exp(-2 * b * z) * ((1 + 2 * b * z) * np.sinh(2 * rr * z) - 2 * rr * z * np.cosh(2 * rr * z))
        hi = ((1 + 2 * rr * z) * np.sinh(2 * b * z) - 2 * b * z * np.cosh(2 * b * z)) * np.exp(-2 * rr * z)
        # the bracket is 2z(1 + 2bz - 1) r + O(r^3) = 4 b z^2 r + O(r^3)
        limit = math.sinh(b) / (2 * z**3) * np.exp(-2 * b * z) * 4 * b * z**2
    out = pre * np.where(inner, lo, hi)
    return np.where(at0, limit, out)


def v_z_sl2c_closed(r: float, b: float, z, nu: int, side: str | None = None) -> complex:
    """Scalar closed shell solution; see v_z_sl2c_profile. At r = b a
    one-sided limit must be requested with side='left' or 'right'."""
    if r == b and side is None:
        raise SingularInputError("r = b: request a one-sided limit with side='left' or 'right'")
    inner = (r < b) if r != b else side == "left"
    return complex(v_z_sl2c_profile(r, b, z, nu, inner=inner))


def v_z_sl2c_printed(r: float, b: float, z, side: str | None = None) -> complex:
    """The nu = 2 shell formula exactly as printed (kept for the arbitration
    test; it fails both oracles)."""
    z = complex(z)
    inner = r < b if r != b else side == "left"
    pre = 2 * math.sinh(b) / (z**3 * math.sinh(r))
    if inner:
        return complex(pre * np.exp(-2 * b * z) * ((1 + 2 * b * z) * np.cosh(2 * r * z) - 2 * r * z * np.sinh(2 * r * z)))
    return complex(pre * ((1 + 2 * r * z) * np.cosh(2 * b * z) - 2 * b * z * np.sinh(2 * b * z)) * np.exp(-2 * r * z))


def sl2c_scale(spec: KernelSpec) -> complex:
    """C with v_A1(r) = C * v_sl2c(sqrt(c) r, sqrt(c) b, z / (2 sqrt(c)))."""
    c = gram_c(spec.rs)
    return spec.rs.weyl_order * math.pi / (math.sqrt(c) * (4 * c) ** (spec.nu - 1))


def v_z_a1_closed(spec: KernelSpec, r: float, side: str | None = None) -> complex:
    """Rank-one v_z at Gram radius r through the SL2(C) closed forms."""
    b = _need_b(spec)
    s = math.sqrt(gram_c(spec.rs))
    return sl2c_scale(spec) * v_z_sl2c_closed(s * r, s * b, spec.z / (2 * s), spec.nu, side)


def composite_distance(r: float, b: float, theta: float, c: float = 2.0) -> float:
    """Gram distance from the base point to a_b k a_r, with theta the angle of
    k in SU(2)/U(1): cosh(s d) = cosh(s r) cosh(s b) + sinh(s r) sinh(s b) cos(theta),
    s = sqrt(c)."""
    s = math.sqrt(c)
    ch = math.cosh(s * r) * math.cosh(s * b) + math.sinh(s * r) * math.sinh(s * b) * math.cos(theta)
    return math.acosh(max(ch, 1.0)) / s


def v_z_convolution(spec: KernelSpec, r: float) -> complex:
    """v_z = u_z * S_b in rank one.

    The K-average of u over the sphere of radius b about a point at radius r
    runs over the angle theta with weight sin(theta)/2; substituting the
    composite distance d(theta) turns it into

        v(r) = 4 sinh^2(s b) int_{|r-b|}^{r+b} u(d) s sinh(s d) / (sinh(s r) sinh(s b)) dd.
    """
    b = _need_b(spec)
    c = gram_c(spec.rs)
    s = math.sqrt(c)
    if r <= 0:
        raise DomainError("r must be positive")
    lo, hi = abs(r - b), r + b

    def g(d, part):
        if d == 0:
            # u(d) sinh(s d) stays finite; take the limit from the right
            d = 1e-300
        return float(part(u_z_radial(spec, d, allow_singular=True) * s * math.sinh(s * d)))

    opts = dict(epsabs=0, epsrel=1e-11, limit=200)
    vals = [quad(lambda d, p=p: g(d, p), lo, hi, **opts)[0] for p in (np.real, np.imag)]
    integral = complex(*vals)
    return complex(4 * math.sinh(s * b) ** 2 * integral / (math.sinh(s * r) * math.sinh(s * b)))
