"""Numerical check of the Gaussian-times-harmonic Fourier identity.

For a harmonic homogeneous polynomial p of degree d on R^n,

    int e^{-|x|^2} p(x) e^{-i<x,y>} dx = c * i^d * p(y) * e^{-a |y|^2}

with a single constant c and exponent a. Both are fitted from quadrature
rather than assumed; the exact values (-1/2)^d pi^{n/2} and 1/4 are reported
alongside for comparison.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss

from ..errors import DomainError
from ..rootsys import RootSystemData


@dataclass(frozen=True)
class HeckeFit:
    constant: complex
    exponent: float
    max_rel_deviation: float
    exact_constant: float
    exact_exponent: float
    n_points: int
    zero_at_origin: float

    def to_dict(self) -> dict:
        return {
            "constant_re": self.constant.real,
            "constant_im": self.constant.imag,
            "exponent": self.exponent,
            "max_rel_deviation": self.max_rel_deviation,
            "exact_constant": self.exact_constant,
            "exact_exponent": self.exact_exponent,
            "n_points": self.n_points,
            "value_at_origin": self.zero_at_origin,
        }


def gaussian_fourier(rs: RootSystemData, y_orth: np.ndarray, nodes: int = 48) -> np.ndarray:
    """Tensor Gauss-Hermite value of the Gaussian-weighted pi_plus transform
    at points y given in orthonormal coordinates (shape (m, n))."""
    x1, w1 = hermgauss(nodes)
    n = rs.rank
    X = np.array(list(itertools.product(x1, repeat=n)))
    W = np.prod(np.array(list(itertools.product(w1, repeat=n))), axis=1)
    pi = np.prod(X @ rs.roots_orth.T, axis=1)
    phase = np.exp(-1j * (np.atleast_2d(y_orth) @ X.T))
    return phase @ (W * pi)


def default_y_grid(rs: RootSystemData, count: int = 24, seed: int = 3) -> np.ndarray:
    """Points with |y| in [0.3, 3] kept away from the root hyperplanes."""
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < count:
        y = rng.normal(size=rs.rank)
        y *= rng.uniform(0.3, 3.0) / np.linalg.norm(y)
        vals = rs.roots_orth @ y
        if np.min(np.abs(vals)) > 0.1 * np.linalg.norm(y):
            pts.append(y)
    return np.array(pts)


def hecke_identity_check(rs: RootSystemData, y_grid=None, nodes: int = 48) -> HeckeFit:
    if rs.rank > 2:
        raise DomainError("the Gaussian transform check is implemented for rank <= 2")
    y = default_y_grid(rs) if y_grid is None else np.atleast_2d(np.asarray(y_grid, dtype=float))
    q = gaussian_fourier(rs, y, nodes)
    base = (1j**rs.d) * np.prod(y @ rs.roots_orth.T, axis=1)
    ratio = q / base
    # log|ratio| = log|c| - a |y|^2
    r2 = np.sum(y * y, axis=1)
    slope, intercept = np.polyfit(r2, np.log(np.abs(ratio)), 1)
    a = -slope
    phase = np.angle(np.mean(ratio * np.exp(a * r2)))
    c = math.exp(intercept) * complex(math.cos(phase), math.sin(phase))
    model = c * base * np.exp(-a * r2)
    dev = float(np.max(np.abs(q - model) / np.abs(model)))
    origin = gaussian_fourier(rs, np.zeros((1, rs.rank)), nodes)[0]
    return HeckeFit(
        constant=c,
        exponent=float(a),
        max_rel_deviation=dev,
        exact_constant=(-0.5) ** rs.d * math.pi ** (rs.rank / 2),
        exact_exponent=0.25,
        n_points=len(y),
        zero_at_origin=float(abs(origin)),
    )
