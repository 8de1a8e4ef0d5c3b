"""Truncated Poincare series over SL2(Z[i]) and spectral-side coefficients.

Geometric side: the kernels are radial on hyperbolic 3-space and are
evaluated at sigma(gamma g). z and b are in hyperbolic units (geodesic
radius sigma = alpha(H), Laplacian spectrum -(t^2 + 1/4)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, SingularInputError, TailToleranceError
from .kernels.fundamental import u_z_radial
from .kernels.shell import v_z_sl2c_profile
from .kernels.spec import KernelSpec, gram_c
from .lattice import R_MAX, LatticeBall, enumerate_ball, sigma
from .rootsys import RootSystemData, build_root_system
from .spherical import pi_plus_complex

MIN_RE_Z = 2.0
KERNEL_KINDS = ("fundamental", "shell")
CENTER_MODES = ("full_gamma", "mod_center")
# safety factor on the largest observed N(r) e^{-2r}
COUNT_SAFETY = 1.25
SHELL_HIT_TOL = 1e-12
SHELL_SHIFT = 1e-9


@dataclass(frozen=True)
class PoincareConfig:
    spec: KernelSpec
    kernel_kind: str = "shell"
    R: float = 4.0
    center_mode: str = "full_gamma"
    r_max: float = R_MAX

    def __post_init__(self):
        if self.spec.rs.label != "A1":
            raise DomainError("the geometric side is implemented for SL2(C) (A1) only")
        if self.kernel_kind not in KERNEL_KINDS:
            raise DomainError(f"kernel_kind must be one of {KERNEL_KINDS}")
        if self.center_mode not in CENTER_MODES:
            raise DomainError(f"center_mode must be one of {CENTER_MODES}")
        if self.spec.z.real < MIN_RE_Z:
            raise DomainError(f"Re(z) must be at least {MIN_RE_Z} for a geometric tail bound")
        if not 0 < self.R <= self.r_max:
            raise DomainError(f"R must lie in (0, {self.r_max}]")
        if self.kernel_kind == "shell":
            if self.spec.b is None:
                raise DomainError("the shell kernel needs b")
            if self.spec.nu not in (1, 2):
                raise DomainError("closed shell kernels exist for nu in {1, 2}")
        elif not self.spec.pointwise_u:
            raise DomainError("the fundamental kernel needs nu > n/2 + d")

    def with_R(self, R: float) -> "PoincareConfig":
        return PoincareConfig(self.spec, self.kernel_kind, R, self.center_mode, self.r_max)


def kernel_profile(cfg: PoincareConfig, r, b: float | None = None) -> np.ndarray:
    """Radial kernel at geodesic radii r."""
    r = np.asarray(r, dtype=float)
    z = cfg.spec.z
    if cfg.kernel_kind == "shell":
        return v_z_sl2c_profile(r, cfg.spec.b if b is None else b, z, cfg.spec.nu)
    # A1 kernel with Gram radius r / sqrt(c) and spectral parameter 2 sqrt(c) z
    s = math.sqrt(gram_c(cfg.spec.rs))
    spec = KernelSpec(cfg.spec.rs, 2 * s * z, cfg.spec.nu)
    return np.array([u_z_radial(spec, x / s) for x in r.ravel()]).reshape(r.shape)


def decay_rate(cfg: PoincareConfig) -> float:
    """beta with |kernel(r)| <= C e^{-beta r}: the kernels decay like
    poly(r) e^{-(2 Re z + 1) r}; half a unit is given up for the polynomial."""
    return 2 * cfg.spec.z.real + 0.5


_BALL_CACHE: dict = {}


def _ball(R: float, r_max: float) -> LatticeBall:
    """The ball of radius R, cut from the largest ball enumerated so far."""
    big = _BALL_CACHE.get("ball")
    if big is None or big.radius < R:
        big = enumerate_ball(R, r_max=r_max)
        _BALL_CACHE["ball"] = big
    if big.radius == R:
        return big
    bound = math.floor(2 * math.cosh(R) + 1e-9)
    return LatticeBall(R, big.entries[big.norm_sq <= bound])


def prepare_ball(R: float, r_max: float = R_MAX) -> None:
    """Enumerate once up to R so later calls only filter."""
    _ball(R, r_max)


@lru_cache(maxsize=1)
def count_constant() -> float:
    """A with N(r) <= A e^{2r}, from the enumerated counts up to r = 4."""
    ball = _ball(4.0, R_MAX)
    sig = ball.sigmas
    grid = np.linspace(0.5, 4.0, 36)
    counts = np.searchsorted(sig, grid, side="right")
    return COUNT_SAFETY * float(np.max(counts * np.exp(-2 * grid)))


def tail_bound(cfg: PoincareConfig, R: float, sigma_g: float, b: float | None = None) -> float:
    """Bound on sum_{sigma(gamma g) > R} |kernel(sigma(gamma g))|.

    Unit shells [R + j, R + j + 1] hold at most A e^{2(R + j + 1 + sigma(g))}
    orbit points, each of size at most C e^{-beta (R + j)}.
    """
    beta = decay_rate(cfg)
    if beta <= 2:
        raise TailToleranceError("kernel decay does not beat the orbit growth")
    grid = np.linspace(R, R + 40, 4001)
    if cfg.kernel_kind == "shell":
        bb = cfg.spec.b if b is None else b
        grid = grid[np.abs(grid - bb) > 1e-9]
    C = float(np.max(np.abs(kernel_profile(cfg, grid, b)) * np.exp(beta * grid)))
    A = count_constant()
    return A * C * math.exp(2 * (R + 1 + sigma_g) - beta * R) / (1 - math.exp(2 - beta))


@dataclass
class PoincareResult:
    value: complex
    tail_bound: float
    n_terms: int
    R: float
    b_used: float | None
    sigma_g: float

    def to_dict(self) -> dict:
        return {
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "tail_bound": self.tail_bound,
            "n_terms": self.n_terms,
            "R": self.R,
            "b_used": self.b_used,
            "sigma_g": self.sigma_g,
        }


def _orbit_sigmas(ball: LatticeBall, g: np.ndarray) -> np.ndarray:
    prod = ball.matrices @ g
    x = np.sum(np.abs(prod) ** 2, axis=(1, 2)) / 2
    return np.where(x < 1 + 1e-12, 0.0, np.arccosh(np.maximum(x, 1.0)))


def poincare_partial_sum(cfg: PoincareConfig, g=None, tol: float | None = None) -> PoincareResult:
    """sum over gamma with sigma(gamma g) <= R of kernel(sigma(gamma g)).

    Every gamma with sigma(gamma g) <= R has sigma(gamma) <= R + sigma(g), so
    that ball is enumerated and filtered. If some sigma(gamma g) falls on the
    shell, b is moved by 1e-9.
    """
    g = np.eye(2, dtype=complex) if g is None else np.asarray(g, dtype=complex)
    sg = sigma(g)
    R = cfg.R
    if R + sg > cfg.r_max:
        raise DomainError(f"R + sigma(g) = {R + sg:.3f} exceeds the enumeration limit {cfg.r_max}")
    ball = _ball(round(R + sg + 1e-9, 9), cfg.r_max)
    if cfg.center_mode == "mod_center":
        ball = ball.mod_center()
    sig = _orbit_sigmas(ball, g)
    keep = sig <= R
    sig = np.sort(sig[keep])
    b = None
    if cfg.kernel_kind == "shell":
        b = cfg.spec.b
        while np.any(np.abs(sig - b) < SHELL_HIT_TOL):
            b += SHELL_SHIFT
    vals = kernel_profile(cfg, sig, b)
    value = complex(math.fsum(vals.real), math.fsum(vals.imag))
    tail = tail_bound(cfg, R, sg, b)
    if cfg.center_mode == "mod_center":
        tail /= 2
    if tol is not None and tail > tol:
        raise TailToleranceError(f"tail bound {tail:.3e} exceeds {tol:.3e} at R = {R}")
    return PoincareResult(value, tail, int(keep.sum()), R, b, sg)


def cauchy_check(cfg: PoincareConfig, radii=(2.0, 3.0, 4.0), g=None) -> dict:
    """Successive partial sums differ by no more than the tail bound of the
    smaller radius."""
    results = [poincare_partial_sum(cfg.with_R(R), g) for R in radii]
    steps = []
    for lo, hi in zip(results[:-1], results[1:]):
        diff = abs(hi.value - lo.value)
        steps.append({"R": lo.R, "R_next": hi.R, "difference": diff, "tail_bound": lo.tail_bound, "pass": diff <= lo.tail_bound})
    return {"results": [r.to_dict() for r in results], "steps": steps, "pass": all(s["pass"] for s in steps)}


def random_points(count: int = 5, max_sigma: float = 1.0, seed: int = 7) -> list[np.ndarray]:
    """Determinant-one matrices n_w a_s k with sigma <= max_sigma."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        s = rng.uniform(-0.8, 0.8)
        w = complex(*rng.uniform(-0.4, 0.4, 2))
        th, ph = rng.uniform(0, 2 * math.pi, 2)
        k = np.array([[math.cos(th / 2) * np.exp(1j * ph), -math.sin(th / 2)], [math.sin(th / 2), math.cos(th / 2) * np.exp(-1j * ph)]])
        g = np.array([[1, w], [0, 1]]) @ np.diag([math.exp(s / 2), math.exp(-s / 2)]) @ k
        if sigma(g) <= max_sigma:
            out.append(g)
    return out


def invariance_check(cfg: PoincareConfig, points=None, generators=None) -> dict:
    """|Pe_R(gen g) - Pe_R(g)| against twice the tail bound at R - sigma(gen)."""
    from .lattice import S, T

    points = random_points() if points is None else points
    generators = {"T": T, "S": S} if generators is None else generators
    reach = max(sigma(gen.matrix() @ g) for g in points for gen in generators.values())
    reach = max(reach, max(sigma(g) for g in points))
    prepare_ball(min(cfg.r_max, cfg.R + reach + 1e-6), cfg.r_max)
    rows = []
    for i, g in enumerate(points):
        base = poincare_partial_sum(cfg, g)
        for name, gen in generators.items():
            moved = poincare_partial_sum(cfg, gen.matrix() @ g)
            bound = 2 * tail_bound(cfg, cfg.R - gen.sigma, max(base.sigma_g, moved.sigma_g), base.b_used)
            diff = abs(moved.value - base.value)
            rows.append({"point": i, "generator": name, "difference": diff, "bound": bound, "pass": diff <= bound})
    return {"rows": rows, "pass": all(r["pass"] for r in rows)}


# Spectral side


def _xi(rs: RootSystemData, xi) -> np.ndarray:
    xi = np.atleast_1d(np.asarray(getattr(xi, "xi", xi), dtype=float))
    if xi.shape != (rs.rank,):
        raise DomainError(f"xi must have length {rs.rank}")
    return xi


def shell_fourier(rs: RootSystemData, xi, b: float, circle_points: int = 720) -> complex:
    """pi+(rho)/pi+(-i xi) * int_{|H|=b} e^{-i<xi,H>} prod sinh alpha(H) dH.

    Rank one sums the two points +-b; rank two uses the trapezoid rule on the
    circle (orthonormal coordinates on a and a*).
    """
    xi = _xi(rs, xi)
    if rs.rank > 2:
        raise DomainError("shell quadrature is implemented for rank <= 2")
    if b <= 0:
        raise DomainError("b must be positive")
    den = pi_plus_complex(rs, -1j * xi)
    if abs(den) < 1e-12 and rs.rank > 1:
        raise SingularInputError("pi+(-i xi) vanishes: xi is singular")
    if rs.rank == 1:
        x = float(rs.to_orth(xi)[0]) * b
        if abs(x) < 1e-6:
            # removable point: e^{-ix} - e^{ix} over -i<alpha, xi> -> 2 b / |alpha|
            a = float(rs.roots_orth[0, 0])
            sinc = 1 - x * x / 6
            return complex(float(rs.pi_plus_rho) * 2 * math.sinh(a * b) * b * sinc / a)
        pts = np.array([[b], [-b]])
        w = np.ones(2)
    else:
        th = (np.arange(circle_points) + 0.5) * (2 * math.pi / circle_points)
        pts = b * np.stack([np.cos(th), np.sin(th)], axis=1)
        w = np.full(circle_points, 2 * math.pi * b / circle_points)
    # xi is given in simple-root coordinates like H; <xi, H> is the Gram pairing
    xo = rs.to_orth(xi)
    phase = np.exp(-1j * (pts @ xo))
    sinh_prod = np.prod(np.sinh(pts @ rs.roots_orth.T), axis=1)
    return complex(float(rs.pi_plus_rho) / den * np.sum(w * phase * sinh_prod))


def spectral_coefficient(rs: RootSystemData, xi, b: float, z, nu: int, circle_points: int = 720) -> complex:
    """shell_fourier / ((-1)^nu (|xi|^2 + z^2)^nu)."""
    xi = _xi(rs, xi)
    z = complex(z)
    if not z.real > 0:
        raise DomainError("Re(z) must be positive")
    n2 = float(rs.norm(xi)) ** 2
    return shell_fourier(rs, xi, b, circle_points) / ((-1) ** nu * (n2 + z * z) ** nu)


def shell_mass(rs: RootSystemData, b: float, circle_points: int = 720) -> float:
    """S_b(1) = int_{|H|=b} prod 4 sinh^2 alpha(H) dH."""
    if rs.rank == 1:
        return 2 * float(np.prod(4 * np.sinh(b * rs.roots_orth[:, 0]) ** 2))
    th = (np.arange(circle_points) + 0.5) * (2 * math.pi / circle_points)
    pts = b * np.stack([np.cos(th), np.sin(th)], axis=1)
    vals = np.prod(4 * np.sinh(pts @ rs.roots_orth.T) ** 2, axis=1)
    return float(np.sum(vals) * 2 * math.pi * b / circle_points)


def sl2c_spectral_term(t, b: float, z):
    """sin(2bt) / (2t sinh(b) (t^2 + z^2)^2), with the t -> 0 limit
    b / (sinh(b) z^4). Complex t is allowed (t = i/2 gives the constant term)."""
    z = complex(z)
    if not z.real > 0:
        raise DomainError("Re(z) must be positive")
    real_input = np.isrealobj(t) and z.imag == 0
    t = np.asarray(t, dtype=complex)
    small = np.abs(t) < 1e-8
    tt = np.where(small, 1.0, t)
    # sin(2bt)/(2t) = b (1 - (2bt)^2/6 + ...)
    ratio = np.where(small, b * (1 - (2 * b * t) ** 2 / 6), np.sin(2 * b * tt) / (2 * tt))
    out = ratio / (math.sinh(b) * (t * t + z * z) ** 2)
    if real_input:
        out = out.real
    return out.item() if np.ndim(out) == 0 else out


def constant_term_coeff(b: float, z) -> complex:
    """1 / (z^2 - 1/4)^2, the coefficient of the constant eigenfunction."""
    z = complex(z)
    if not z.real > 0:
        raise DomainError("Re(z) must be positive")
    out = 1 / (z * z - 0.25) ** 2
    return out.real if out.imag == 0 else out


def rank1_pattern_ratio(t, b_gram: float, z_gram, nu: int = 2, rs: RootSystemData | None = None) -> complex:
    """spectral_coefficient / sl2c_spectral_term in matched units.

    Gram quantities map to hyperbolic ones by b_R = sqrt(c) b, t_R = t/(2 sqrt(c)),
    z_R = z/(2 sqrt(c)); the ratio is then the t-free constant
    2 sinh^2(b_R) / (4c)^nu (nu = 2).
    """
    rs = build_root_system("A1") if rs is None else rs
    c = gram_c(rs)
    s = math.sqrt(c)
    xi = [t / s]  # Gram norm of xi is t
    coeff = spectral_coefficient(rs, xi, b_gram, z_gram, nu)
    term = sl2c_spectral_term(t / (2 * s), s * b_gram, complex(z_gram) / (2 * s))
    return coeff / term
