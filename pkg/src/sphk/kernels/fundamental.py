"""The fundamental solution u_z of (Delta - lambda_z)^nu.

Closed form (H in the closed chamber, |H| its Gram norm, m = nu - d - n/2):

    u(H) = (-1)^nu pi^{n/2} / (pi+(rho) Gamma(nu) 2^{nu - n/2 - 1})
           * prod_alpha alpha(H) / (2 sinh alpha(H)) * (|H|/z)^m K_m(z |H|)

It comes from applying pi+(-i d/dH) to the Euclidean integral I_z and
using harmonicity of pi+. The spectral representation

    u(H) = (-1)^nu (-i)^d / (pi+(rho) prod 2 sinh alpha(H))
           * int_{a*} pi+(lam) e^{i<lam,H>} / (|lam|^2 + z^2)^nu d lam

is evaluated by quadrature without touching the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, InsufficientDecayError, SingularInputError
from ..spherical import RadialPoint, gauss_legendre_panels, plancherel_density_batch, zonal_spherical_batch
from ..specfun.bessel import bessel_k
from ..specfun.integrals import I_z, sine_transform
from .spec import KernelSpec, gram_c


def _H(spec: KernelSpec, H) -> np.ndarray:
    H = np.atleast_1d(np.asarray(H.H if isinstance(H, RadialPoint) else H, dtype=float))
    if H.shape != (spec.n,):
        raise DomainError(f"H must have length {spec.n}")
    if np.min(spec.rs.root_values(H)) < -1e-12:
        raise DomainError(f"H = {H} is outside the closed positive chamber")
    return H


def _half_ratio(a: np.ndarray) -> np.ndarray:
    """alpha / (2 sinh alpha) with the value 1/2 at 0."""
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(a == 0, 0.5, a / (2 * np.sinh(np.where(a == 0, 1.0, a))))


def closed_prefactor(spec: KernelSpec) -> float:
    n, nu = spec.n, spec.nu
    return (-1) ** nu * math.pi ** (n / 2) / (float(spec.rs.pi_plus_rho) * math.gamma(nu) * 2 ** (nu - n / 2 - 1))


def bessel_profile(m, r: float, z: complex) -> complex:
    """(r/z)^m K_m(z r), with the r -> 0 limit Gamma(m) 2^{m-1} z^{-2m} for m > 0."""
    m = float(m)
    if r == 0:
        if m <= 0:
            raise SingularInputError("the kernel is singular at the origin for this nu")
        return math.gamma(m) * 2 ** (m - 1) / z ** (2 * m)
    return (r / z) ** m * bessel_k(abs(m), z * r)


def u_z_closed(spec: KernelSpec, H, allow_singular: bool = False) -> complex:
    """Closed form of u_z.

    With allow_singular the formula is also evaluated when nu <= n/2 + d
    (then u_z is only locally integrable and H = 0 is excluded); used by the
    convolution route for the nu = 1 shell solution.
    """
    if not spec.pointwise_u and not allow_singular:
        raise DomainError(f"nu = {spec.nu} is too small for a continuous fundamental solution (need nu > n/2 + d)")
    H = _H(spec, H)
    r = float(spec.rs.norm(H))
    ratio = float(np.prod(_half_ratio(spec.rs.root_values(H))))
    return complex(closed_prefactor(spec) * ratio * bessel_profile(spec.bessel_order, r, spec.z))


def u_z_radial(spec: KernelSpec, r: float, allow_singular: bool = False) -> complex:
    """Rank-one u_z as a function of the Gram radius."""
    c = gram_c(spec.rs)
    return u_z_closed(spec, [r / math.sqrt(c)], allow_singular)


def u_z_minimal_form(spec: KernelSpec, H) -> complex:
    """The minimal-nu specializations written without a Bessel routine where
    possible: pure exponential in odd rank, |H| K_1(z|H|)/z in even rank."""
    n, d = spec.n, spec.d
    H = _H(spec, H)
    r = float(spec.rs.norm(H))
    ratio = float(np.prod(_half_ratio(spec.rs.root_values(H))))
    z = spec.z
    if n % 2 == 1 and spec.nu == d + (n + 1) // 2:
        # (r/z)^{1/2} K_{1/2}(zr) = sqrt(pi/2) e^{-zr}/z
        return complex(closed_prefactor(spec) * ratio * math.sqrt(math.pi / 2) * np.exp(-z * r) / z)
    if n % 2 == 0 and spec.nu == d + n // 2 + 1:
        prof = 1 / z**2 if r == 0 else r * bessel_k(1, z * r) / z
        return complex(closed_prefactor(spec) * ratio * prof)
    raise DomainError("not a minimal nu")


def _spectral_prefactor(spec: KernelSpec, H: np.ndarray) -> complex:
    alpha_H = spec.rs.root_values(H)
    if np.min(alpha_H) < 1e-6:
        raise SingularInputError("spectral evaluation needs a regular H")
    return (-1) ** spec.nu * (-1j) ** spec.d / (float(spec.rs.pi_plus_rho) * np.prod(2 * np.sinh(alpha_H)))


def _rank1_fourier(spec: KernelSpec, r: float) -> complex:
    # int_R pi+(t) e^{itr} / (t^2+z^2)^nu dt with pi+(t) = sqrt(c) t
    s = math.sqrt(gram_c(spec.rs))
    z2, nu = spec.z**2, spec.nu
    parts = []
    for part in (np.real, np.imag):
        f = lambda t, part=part: float(part(t / (t * t + z2) ** nu))
        parts.append(sine_transform(f, r))
    return 2j * s * complex(*parts)


def _polar_fourier(spec: KernelSpec, H: np.ndarray, radius: float, panels: int, angles: int,
                   tail_tol: float = 1e-6) -> complex:
    """Polar quadrature in orthonormal coordinates: trapezoid in angle (the
    integrand is a smooth periodic function) times Gauss-Legendre panels in
    the radius. The cut-off grows until the tail bound

        int_R^inf rho^{d+1-2nu} 2 pi max|P| d rho

    is below tail_tol times the computed value.
    """
    rs = spec.rs
    Ho = rs.to_orth(H)
    r = float(np.linalg.norm(Ho))
    per_panel = radius / panels
    while True:
        n_ang = max(angles, int(2 ** math.ceil(math.log2(1.5 * radius * r + 64))))
        theta = (np.arange(n_ang) + 0.5) * (2 * math.pi / n_ang)
        omega = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        P = np.prod(omega @ rs.roots_orth.T, axis=1)
        proj = omega @ Ho
        rho, w = gauss_legendre_panels(0.0, radius, max(panels, int(round(radius / per_panel))))
        ang = np.exp(1j * np.outer(rho, proj)) @ P * (2 * math.pi / n_ang)
        radial = rho ** (spec.d + 1) / (rho * rho + spec.z**2) ** spec.nu
        val = complex(np.sum(w * radial * ang))
        k = 2 * spec.nu - spec.d - 2
        scale = 2 * math.pi * np.max(np.abs(P)) / k
        tail = scale * radius ** (-k)
        if tail <= tail_tol * abs(val):
            return val
        needed = (scale / (tail_tol * abs(val))) ** (1 / k)
        if needed > 5000:
            raise InsufficientDecayError(f"polar quadrature tail bound {tail:.2e} too large relative to {abs(val):.2e}")
        radius = 1.1 * needed


def u_z_spectral(spec: KernelSpec, H, radius: float = 60.0, panels: int = 60, angles: int = 512) -> complex:
    """Quadrature of the full-a* spectral integral (rank 1 or 2)."""
    if spec.n > 2:
        raise DomainError("spectral quadrature is implemented for rank <= 2")
    if not spec.pointwise_u:
        raise DomainError("nu must exceed n/2 + d")
    H = _H(spec, H)
    pre = _spectral_prefactor(spec, H)
    if spec.n == 1:
        integral = _rank1_fourier(spec, float(spec.rs.norm(H)))
    else:
        integral = _polar_fourier(spec, H, radius, panels, angles)
    return complex(pre * integral)


def _chamber_angles(spec: KernelSpec) -> tuple[float, float]:
    # edges of the positive chamber in orthonormal coordinates
    a1, a2 = spec.rs.roots_orth[0], spec.rs.roots_orth[1]
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    e1, e2 = rot @ a2, rot @ a1
    e1 = e1 if e1 @ a1 > 0 else -e1
    e2 = e2 if e2 @ a2 > 0 else -e2
    t1, t2 = math.atan2(e1[1], e1[0]), math.atan2(e2[1], e2[0])
    if (t2 - t1) % (2 * math.pi) > math.pi:
        t1, t2 = t2, t1
    if t2 < t1:
        t2 += 2 * math.pi
    return t1, t2


def u_z_spectral_folded(spec: KernelSpec, H, radius: float | None = None, panels: int | None = None,
                        tail_tol: float = 1e-5) -> complex:
    """Inverse spherical transform over the chamber a*_+ = a*/W with the
    Plancherel density: int (-1)^nu / (|xi|^2+z^2)^nu phi_xi(H) |c(xi)|^{-2} d xi.

    Uses the Weyl-sum zonal spherical function directly; quadrature nodes
    stay off the walls where phi |c|^{-2} is only removably singular.
    """
    rs = spec.rs
    H = _H(spec, H)
    nu, z2 = spec.nu, spec.z**2
    if spec.n == 1:
        radius = 400.0 if radius is None else radius
        panels = 800 if panels is None else panels
        t, w = gauss_legendre_panels(0.0, radius, panels)
        xis = t[:, None] / float(rs.norm([1.0]))
        f = (-1) ** nu / (t * t + z2) ** nu * zonal_spherical_batch(rs, xis, H) * plancherel_density_batch(rs, xis)
        # phi |c|^-2 = g(t) sin(t r) with g(t) <= t^{1-2nu} / (sqrt(c) sinh(alpha(H))) past the
        # cut; the second mean value theorem bounds the oscillatory tail by 2 g(T) / r
        r = float(rs.norm(H))
        g_T = radius ** (1 - 2 * nu) / (float(rs.norm([1.0])) * math.sinh(float(rs.root_values(H)[0])))
        tail = 2 * g_T / r
        val = np.sum(w * f)
    elif spec.n == 2:
        radius = 60.0 if radius is None else radius
        panels = 60 if panels is None else panels
        t1, t2 = _chamber_angles(spec)
        th, wth = gauss_legendre_panels(t1, t2, 4, 24)
        rho, wr = gauss_legendre_panels(0.0, radius, panels)
        omega_o = np.stack([np.cos(th), np.sin(th)], axis=1)
        val = 0j
        for rj, wj in zip(rho, wr):
            xis = rs.from_orth(rj * omega_o)
            f = zonal_spherical_batch(rs, xis, H) * plancherel_density_batch(rs, xis)
            val += wj * rj * (-1) ** nu / (rj * rj + z2) ** nu * np.sum(wth * f)
        tail = 0.0
    else:
        raise DomainError("folded quadrature is implemented for rank <= 2")
    if tail > tail_tol * abs(val):
        raise InsufficientDecayError(f"truncation tail bound {tail:.2e} too large for the folded integral")
    return complex(val)


@dataclass(frozen=True)
class HallMitchellReport:
    deviation: float
    constant: complex
    constants_by_z: dict
    z_variation: float

    def to_dict(self) -> dict:
        return {
            "deviation": self.deviation,
            "constant_re": self.constant.real,
            "constant_im": self.constant.imag,
            "constants_by_z": {str(k): [v.real, v.imag] for k, v in self.constants_by_z.items()},
            "z_variation": self.z_variation,
        }


def j_half_inverse(spec: KernelSpec, H) -> float:
    """J^{-1/2}(H) = prod alpha(H) / sinh alpha(H)."""
    return float(np.prod(2 * _half_ratio(spec.rs.root_values(np.asarray(H, dtype=float)))))


def euclidean_fundamental(spec: KernelSpec, r: float) -> complex:
    """Radial fundamental solution of (Delta_p - z^2)^nu on R^{n+2d}."""
    N = spec.dim
    return (-1) ** spec.nu * I_z(N, spec.nu, [r], spec.z) / (2 * math.pi) ** N


def _fit_constant(spec: KernelSpec, r_grid) -> tuple[complex, float]:
    c = math.sqrt(gram_c(spec.rs))
    ratios = []
    for r in r_grid:
        H = [r / c]
        ratios.append(u_z_closed(spec, H) / j_half_inverse(spec, H) / euclidean_fundamental(spec, r))
    ratios = np.array(ratios)
    const = complex(np.mean(ratios))
    return const, float(np.max(np.abs(ratios - const)) / abs(const))


def hall_mitchell_check(spec: KernelSpec, r_grid, z_values=(1.0, 2.0, 3.0)) -> HallMitchellReport:
    """Compare J^{1/2} u_z with the Euclidean fundamental solution on R^{n+2d}
    up to one fitted constant; repeat over z to confirm the constant is z-free."""
    if spec.n != 1:
        raise DomainError("the intertwining check is implemented for rank one")
    const, dev = _fit_constant(spec, r_grid)
    by_z = {}
    for z in z_values:
        by_z[complex(z)] = _fit_constant(spec.with_z(z), r_grid)[0]
    vals = np.array(list(by_z.values()))
    var = float(np.max(np.abs(vals - vals[0])) / abs(vals[0]))
    return HallMitchellReport(dev, const, by_z, var)
