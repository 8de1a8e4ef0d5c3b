"""Finite-difference check that (Delta - lambda) maps the nu-kernel to the
(nu-1)-kernel away from the source."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from .fundamental import u_z_radial
from .shell import v_z_radial, v_z_sl2c_closed, v_z_sl2c_printed
from .spec import KernelSpec, gram_c

KERNELS = ("u", "v", "sl2c", "sl2c_printed")


def _d1(f, r, h):
    return (-f(r + 2 * h) + 8 * f(r + h) - 8 * f(r - h) + f(r - 2 * h)) / (12 * h)


def _d2(f, r, h):
    return (-f(r + 2 * h) + 16 * f(r + h) - 30 * f(r) + 16 * f(r - h) - f(r - 2 * h)) / (12 * h * h)


def _kernel(spec: KernelSpec, kind: str, nu: int):
    if kind == "u":
        s = spec.with_nu(nu)
        return lambda r: u_z_radial(s, r, allow_singular=True)
    if kind == "v":
        s = spec.with_nu(nu)
        return lambda r: v_z_radial(s, r)
    if kind == "sl2c":
        return lambda r: v_z_sl2c_closed(r, spec.b, spec.z, nu)
    if kind == "sl2c_printed":
        # the printed nu = 2 display, checked against the closed nu = 1 form
        if nu == 2:
            return lambda r: v_z_sl2c_printed(r, spec.b, spec.z)
        return lambda r: v_z_sl2c_closed(r, spec.b, spec.z, nu)
    raise DomainError(f"kernel must be one of {KERNELS}")


def shifted_laplacian_fd(f, r: float, h: float, lam: complex, kind: str, c: float) -> complex:
    """(Delta_rad - lam) f at r with 5-point stencils.

    Gram units: Delta = f'' + 2 s coth(s r) f', s = sqrt(c).
    Hyperbolic units (sl2c): Delta = (f'' + 2 coth(r) f') / 4.
    """
    if kind.startswith("sl2c"):
        return (_d2(f, r, h) + 2 / math.tanh(r) * _d1(f, r, h)) / 4 - lam * f(r)
    s = math.sqrt(c)
    return _d2(f, r, h) + 2 * s / math.tanh(s * r) * _d1(f, r, h) - lam * f(r)


@dataclass
class ResolventReport:
    kernel: str
    nu: int
    deviation: float
    raw_deviation: float
    observed_order: float
    h: float
    points: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kernel": self.kernel,
            "nu": self.nu,
            "deviation": self.deviation,
            "raw_deviation": self.raw_deviation,
            "observed_order": self.observed_order,
            "h": self.h,
        }


def resolvent_relation_check(spec: KernelSpec, r_grid, kernel: str = "u", h: float = 0.04,
                             homogeneous: bool = False) -> ResolventReport:
    """Max relative deviation of (Delta - lambda) k_nu from k_{nu-1} on r_grid.

    Each point is evaluated at steps h and h/2 and Richardson-extrapolated
    for the fourth-order stencil; the observed order comes from the two raw
    errors. With homogeneous=True the target is 0 (nu-kernel off its source)
    and deviations are relative to |k_nu|. Steps shrink so the stencil stays
    inside (0, b) or (b, inf).
    """
    if spec.n != 1:
        raise DomainError("resolvent check is rank one only")
    if kernel not in KERNELS:
        raise DomainError(f"kernel must be one of {KERNELS}")
    if kernel in ("v", "sl2c") and spec.b is None:
        raise DomainError("shell kernels need b")
    nu = spec.nu
    if not homogeneous and nu < 2:
        raise DomainError("need nu >= 2 (or homogeneous=True)")
    if kernel.startswith("sl2c"):
        c = 4.0
        lam = complex(spec.z) ** 2 - 0.25
    else:
        c = gram_c(spec.rs)
        lam = spec.lambda_z
    f = _kernel(spec, kernel, nu)
    g = None if homogeneous else _kernel(spec, kernel, nu - 1)
    devs, raws, orders, points = [], [], [], []
    for r in np.atleast_1d(np.asarray(r_grid, dtype=float)):
        limit = r / 4
        if kernel != "u":
            if abs(r - spec.b) < 1e-9:
                raise DomainError("r_grid must avoid the shell r = b")
            limit = min(limit, abs(r - spec.b) / 4)
        if r <= 0:
            raise DomainError("r_grid must avoid r = 0")
        hh = min(h, limit)
        a1 = shifted_laplacian_fd(f, r, hh, lam, kernel, c)
        a2 = shifted_laplacian_fd(f, r, hh / 2, lam, kernel, c)
        ext = (16 * a2 - a1) / 15
        target = 0j if homogeneous else g(r)
        scale = abs(f(r)) if homogeneous else abs(target)
        e1, e2 = abs(a1 - target), abs(a2 - target)
        dev = abs(ext - target) / scale
        devs.append(dev)
        raws.append(e2 / scale)
        orders.append(math.log2(e1 / e2) if e2 > 0 and e1 > 0 else float("inf"))
        points.append({"r": float(r), "h": hh, "deviation": dev, "raw": e2 / scale})
    finite = [o for o in orders if math.isfinite(o)]
    return ResolventReport(
        kernel=kernel,
        nu=nu,
        deviation=max(devs),
        raw_deviation=max(raws),
        observed_order=float(np.median(finite)) if finite else float("inf"),
        h=h,
        points=points,
    )
