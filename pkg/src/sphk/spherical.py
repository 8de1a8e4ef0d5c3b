"""Zonal spherical functions of complex groups and the rank-one transform pair.

Vectors in a* and a are both given in simple-root coordinates, paired by the
Gram matrix. For rank one with gram c the radial variable r = |H| and the
spectral variable t = |xi| are the Gram norms; then alpha(H) = sqrt(c) r and

    phi_t(r) = sqrt(c) sin(t r) / (t sinh(sqrt(c) r)),    |c(t)|^{-2} = t^2 / c.

Haar measure in radial coordinates is kappa * 4 sinh^2(sqrt(c) r) dr, and the
inversion formula with the density above forces kappa = 1/(2 pi).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InsufficientDecayError, SingularInputError
from .rootsys import RootSystemData

WALL_TOL = 1e-6
HAAR_CONSTANT_RANK1 = 1 / (2 * math.pi)


@dataclass(frozen=True)
class SpectralPoint:
    xi: tuple[float, ...]

    def __post_init__(self):
        xi = tuple(float(x) for x in np.atleast_1d(self.xi))
        if not all(math.isfinite(x) for x in xi):
            raise DomainError("spectral point has non-finite entries")
        object.__setattr__(self, "xi", xi)


@dataclass(frozen=True)
class RadialPoint:
    H: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "H", tuple(float(x) for x in np.atleast_1d(self.H)))

    def in_chamber(self, rs: RootSystemData, tol: float = 0.0) -> bool:
        vals = rs.root_values(np.array(self.H))
        return bool(np.all(vals >= -tol))


@dataclass
class KernelProfile:
    grid: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.grid.shape != self.values.shape or self.grid.ndim != 1:
            raise DomainError("grid and values must be 1-d arrays of the same length")
        if np.any(np.diff(self.grid) <= 0):
            raise DomainError("grid must be strictly increasing")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "re", "im"])
        for r, v in zip(self.grid, self.values):
            w.writerow(["%.17g" % r, "%.17g" % v.real, "%.17g" % v.imag])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, meta: dict | None = None) -> "KernelProfile":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows or not {"r", "re", "im"} <= set(rows[0]):
            raise DomainError("profile CSV needs columns r, re, im")
        grid = [float(r["r"]) for r in rows]
        vals = [complex(float(r["re"]), float(r["im"])) for r in rows]
        return cls(np.array(grid), np.array(vals), dict(meta or {}))

    def interpolant(self) -> Callable[[np.ndarray], np.ndarray]:
        from scipy.interpolate import CubicSpline

        re = CubicSpline(self.grid, self.values.real)
        im = CubicSpline(self.grid, self.values.imag)
        lo, hi = self.grid[0], self.grid[-1]

        def f(r):
            r = np.asarray(r, dtype=float)
            out = re(r) + 1j * im(r)
            return np.where((r < lo) | (r > hi), 0.0, out)

        return f


def _as_vec(rs: RootSystemData, v, what: str) -> np.ndarray:
    v = np.atleast_1d(np.asarray(v.xi if isinstance(v, SpectralPoint) else v.H if isinstance(v, RadialPoint) else v))
    if v.shape != (rs.rank,):
        raise DomainError(f"{what} must have length {rs.rank}")
    return v


def _check_regular_lambda(rs: RootSystemData, lam: np.ndarray) -> None:
    vals = rs.root_values(lam)
    if np.min(np.abs(vals)) < WALL_TOL:
        raise SingularInputError(f"spectral parameter {lam} lies on a root hyperplane")


def pi_plus_complex(rs: RootSystemData, lam) -> complex:
    return complex(np.prod(rs.root_values(np.asarray(lam))))


def zonal_spherical(rs: RootSystemData, lam, H) -> complex:
    """phi_{rho + i lam}(exp H) from the alternating Weyl sum."""
    lam = _as_vec(rs, lam, "lambda").astype(complex)
    H = _as_vec(rs, H, "H").astype(float)
    _check_regular_lambda(rs, lam)
    if not np.any(H):
        return 1.0 + 0j
    alpha_H = rs.root_values(H)
    if np.min(alpha_H) < -WALL_TOL:
        raise DomainError(f"H = {H} is outside the closed positive chamber")
    if np.min(alpha_H) < WALL_TOL:
        raise SingularInputError(f"H = {H} lies on a chamber wall")
    w_lam = np.einsum("wij,j->wi", rs.weyl_f, lam)
    num = np.sum(rs.weyl_signs * np.exp(1j * (w_lam @ (rs.gram_f @ H))))
    den = np.prod(2 * np.sinh(alpha_H))
    c = float(rs.pi_plus_rho) / ((1j) ** rs.d * pi_plus_complex(rs, lam))
    return complex(c * num / den)


def phi_rank1(t, r, c: float = 2.0):
    """Rank-one spherical function in Gram-norm variables, with the removable
    limits at t = 0 and r = 0 filled in."""
    t = np.asarray(t, dtype=complex)
    r = np.asarray(r, dtype=float)
    s = math.sqrt(c)
    with np.errstate(divide="ignore", invalid="ignore"):
        sin_ratio = np.where(t == 0, r, np.sin(t * r) / np.where(t == 0, 1.0, t))
        val = s * sin_ratio / np.sinh(s * r)
    return np.where(r == 0, 1.0 + 0j, val)


def c_function(rs: RootSystemData, xi) -> complex:
    xi = _as_vec(rs, xi, "xi").astype(float)
    _check_regular_lambda(rs, xi)
    return complex(float(rs.pi_plus_rho) / ((1j) ** rs.d * pi_plus_complex(rs, xi)))


def plancherel_density(rs: RootSystemData, xi) -> float:
    xi = _as_vec(rs, xi, "xi").astype(float)
    return float(np.prod(rs.root_values(xi)) ** 2 / float(rs.pi_plus_rho) ** 2)


def radial_measure(rs: RootSystemData, H) -> float:
    H = np.asarray(H, dtype=float)
    return np.prod((2 * np.sinh(rs.root_values(H))) ** 2, axis=-1)


def radial_measure_rank1(r, c: float = 2.0):
    return 4 * np.sinh(math.sqrt(c) * np.asarray(r, dtype=float)) ** 2


def casimir_eigenvalue(rs: RootSystemData, xi) -> float:
    xi = np.asarray(xi, dtype=float)
    return -(float(xi @ rs.gram_f @ xi) + float(rs.rho_norm_sq))


def radial_casimir_fd(rs: RootSystemData, f: Callable, H, h: float) -> complex:
    """Second-order finite-difference radial Laplacian

        L f = sum_k d^2 f / d e_k^2 + 2 sum_{alpha > 0} coth(alpha(H)) D_alpha f

    with e_k an orthonormal basis of a and D_alpha the derivative along the
    root vector alpha (multiplicity 2 for complex groups).
    """
    H = np.asarray(H, dtype=float)
    f0 = f(H)
    out = 0j
    basis = rs.from_orth(np.eye(rs.rank))
    for e in basis:
        out += (f(H + h * e) - 2 * f0 + f(H - h * e)) / h**2
    for a, aH in zip(rs.roots_f, rs.root_values(H)):
        out += 2 / math.tanh(aH) * (f(H + h * a) - f(H - h * a)) / (2 * h)
    return complex(out)


@dataclass(frozen=True)
class RichardsonResult:
    values: tuple[complex, ...]
    extrapolated: complex
    observed_order: float


def richardson(values: Sequence[complex], order: int = 2) -> RichardsonResult:
    """Values at h, h/2, h/4 -> extrapolated value and observed convergence order."""
    a, b, c = values
    k = 2**order
    num, den = abs(a - b), abs(b - c)
    p = math.log2(num / den) if num > 0 and den > 0 else float("inf")
    return RichardsonResult(tuple(values), c + (c - b) / (k - 1), p)


def casimir_check(rs: RootSystemData, xi, H, h: float = 1e-2) -> dict:
    """Relative deviation of L phi from lambda_xi phi at one regular H."""
    xi = np.asarray(xi, dtype=float)
    f = lambda x: zonal_spherical(rs, xi, x)
    vals = [radial_casimir_fd(rs, f, H, h / 2**j) for j in range(3)]
    rr = richardson(vals)
    target = casimir_eigenvalue(rs, xi) * f(np.asarray(H, dtype=float))
    return {
        "relative_deviation": abs(rr.extrapolated - target) / abs(target),
        "raw_deviation": abs(vals[-1] - target) / abs(target),
        "observed_order": rr.observed_order,
        "eigenvalue": casimir_eigenvalue(rs, xi),
    }


# Rank-one transform pair.


def _gram_c(rs: RootSystemData | None, c: float | None) -> float:
    if rs is not None:
        if rs.rank != 1:
            raise DomainError("the numerical transform pair is implemented for rank one only")
        return float(rs.gram[0][0])
    return 2.0 if c is None else float(c)


def gauss_legendre_panels(a: float, b: float, panels: int, order: int = 24):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _support_radius(f: Callable, c: float, tol: float, r_cap: float = 40.0) -> float:
    r = np.linspace(0, r_cap, 4001)
    g = np.abs(f(r)) * radial_measure_rank1(r, c)
    peak = g.max()
    if peak == 0:
        return 1.0
    above = np.nonzero(g > tol * peak)[0]
    if above[-1] >= len(r) - 1:
        raise InsufficientDecayError(f"f * measure has not decayed below {tol:g} by r = {r_cap}")
    return float(r[min(above[-1] + 1, len(r) - 1)])


def spherical_transform_rank1(f, xi_grid, rs: RootSystemData | None = None, c: float | None = None,
                              tol: float = 1e-14, panels: int = 64) -> np.ndarray:
    """Ff(t) = kappa * int_0^inf f(r) phi_t(r) 4 sinh^2(sqrt(c) r) dr."""
    c = _gram_c(rs, c)
    if isinstance(f, KernelProfile):
        g = f.interpolant()
        r_max = float(f.grid[-1])
        tail = abs(f.values[-1]) * radial_measure_rank1(r_max, c)
        peak = np.max(np.abs(f.values) * radial_measure_rank1(f.grid, c))
        if peak > 0 and tail > 1e-6 * peak:
            raise InsufficientDecayError("profile does not decay within its grid")
        f = g
    else:
        r_max = _support_radius(f, c, tol)
    r, w = gauss_legendre_panels(0.0, r_max, panels)
    fr = f(r) * radial_measure_rank1(r, c) * w
    t = np.asarray(xi_grid, dtype=float)
    return HAAR_CONSTANT_RANK1 * (phi_rank1(t[:, None], r[None, :], c) @ fr)


def inverse_transform_rank1(F, xi_grid, r_grid, rs: RootSystemData | None = None, c: float | None = None,
                            weights=None) -> KernelProfile:
    """F^{-1}F(r) = int_0^inf F(t) phi_t(r) |c(t)|^{-2} dt over the samples.

    Without explicit weights the samples are integrated with Simpson's rule,
    which needs an evenly spaced grid starting at 0.
    """
    c = _gram_c(rs, c)
    t = np.asarray(xi_grid, dtype=float)
    F = np.asarray(F, dtype=complex)
    if weights is None:
        from scipy.integrate import simpson

        dt = np.diff(t)
        if not np.allclose(dt, dt[0]):
            raise DomainError("Simpson weights need an evenly spaced xi grid")
        weights = simpson(np.eye(len(t)), x=t, axis=1)
    if abs(F[-1]) * t[-1] ** 2 > 1e-8 * np.max(np.abs(F) * t**2 + 1e-300):
        raise InsufficientDecayError("transform has not decayed by the end of the xi grid")
    r = np.asarray(r_grid, dtype=float)
    dens = t**2 / c
    vals = phi_rank1(t[None, :], r[:, None], c) @ (F * dens * weights)
    return KernelProfile(r, vals, {"c": c})


def zonal_spherical_batch(rs: RootSystemData, lams: np.ndarray, H) -> np.ndarray:
    """zonal_spherical for many spectral parameters (rows of lams) at one regular H."""
    lams = np.atleast_2d(np.asarray(lams, dtype=complex))
    H = _as_vec(rs, H, "H").astype(float)
    alpha_H = rs.root_values(H)
    if np.min(alpha_H) < WALL_TOL:
        raise SingularInputError(f"H = {H} is not a regular chamber point")
    pi_lam = np.prod(lams @ (rs.gram_f @ rs.roots_f.T), axis=1)
    if np.min(np.abs(pi_lam)) == 0:
        raise SingularInputError("a spectral parameter lies on a root hyperplane")
    w_lam = np.einsum("wij,kj->kwi", rs.weyl_f, lams)
    num = np.sum(rs.weyl_signs * np.exp(1j * (w_lam @ (rs.gram_f @ H))), axis=1)
    den = np.prod(2 * np.sinh(alpha_H))
    return float(rs.pi_plus_rho) / ((1j) ** rs.d * pi_lam) * num / den


def plancherel_density_batch(rs: RootSystemData, xis: np.ndarray) -> np.ndarray:
    xis = np.atleast_2d(np.asarray(xis, dtype=float))
    return np.prod(xis @ (rs.gram_f @ rs.roots_f.T), axis=1) ** 2 / float(rs.pi_plus_rho) ** 2
