"""Closed-form Fourier integrals of (t^2 + z^2)^{-s} and their quadrature oracles."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from ..errors import DomainError
from .bessel import bessel_k

QUAD_OPTS = dict(epsabs=1e-15, epsrel=1e-12, limit=500)


@dataclass(frozen=True)
class PolyP:
    ell: int
    coeffs: tuple[Fraction, ...]

    def __call__(self, x):
        return sum(float(c) * x**k for k, c in enumerate(self.coeffs))


@lru_cache(maxsize=None)
def p_ell(ell: int) -> PolyP:
    if ell < 0:
        raise DomainError("ell must be non-negative")
    f = math.factorial
    coeffs = tuple(
        Fraction(f(2 * ell - k), 2 ** (2 * ell - k) * f(ell) * f(ell - k) * f(k)) for k in range(ell + 1)
    )
    return PolyP(ell, coeffs)


def _split_s(s) -> tuple[Fraction, int, bool]:
    s = Fraction(s)
    if (2 * s).denominator != 1 or s <= Fraction(1, 2):
        raise DomainError(f"s must be an integer or half-integer greater than 1/2, got {s}")
    if s.denominator == 1:
        return s, int(s) - 1, False
    return s, int(s - Fraction(1, 2)), True


def _check_z(z) -> complex:
    z = complex(z)
    if not z.real > 0:
        raise DomainError(f"Re(z) must be positive, got {z}")
    return z


def fourier_line_integral(s, A: float, z) -> complex:
    """int_R e^{iAt} / (t^2 + z^2)^s dt in closed form."""
    s, ell, half = _split_s(s)
    z = _check_z(z)
    A = float(A)
    if A < 0:
        raise DomainError("A must be non-negative")
    if not half:
        if A == 0:
            return complex(math.pi * float(p_ell(ell).coeffs[0]) / z ** (2 * ell + 1))
        return complex(math.pi * np.exp(-A * z) * p_ell(ell)(A * z) / z ** (2 * ell + 1))
    if A == 0:
        f = math.factorial
        return complex(4**ell * f(ell) * f(ell - 1) / f(2 * ell) / z ** (2 * ell))
    pre = 2 * math.factorial(ell) / math.factorial(2 * ell)
    return complex(pre * (2 * A / z) ** ell * bessel_k(ell, A * z))


def _parts(z: complex):
    # real spectral data gives a real integral; skip the identically zero part
    return (np.real,) if complex(z).imag == 0 else (np.real, np.imag)


def _pack(parts: list) -> complex:
    return complex(parts[0], parts[1] if len(parts) > 1 else 0.0)


def fourier_half_line(f, A: float, kind: str = "cos") -> float:
    """int_0^inf f(t) cos(A t) dt (or sin) for slowly decaying smooth f.

    A few periods are integrated with the plain adaptive rule; the remaining
    tail goes to QUADPACK's Fourier rule for semi-infinite ranges, whose
    absolute target is set relative to the head so round-off never stalls it.
    """
    trig = math.cos if kind == "cos" else math.sin
    T = 16 * math.pi / A
    with warnings.catch_warnings():
        # round-off notices at the 1e-15 level are expected for tiny integrands
        warnings.simplefilter("ignore", IntegrationWarning)
        head = quad(lambda t: f(t) * trig(A * t), 0, T, epsabs=1e-15, epsrel=1e-12, limit=500)[0]
        tail = quad(f, T, np.inf, weight=kind, wvar=A, limlst=200, epsabs=max(1e-16, 1e-13 * abs(head)))[0]
    return head + tail


def cosine_transform(f, A: float) -> float:
    return fourier_half_line(f, A, "cos")


def sine_transform(f, A: float) -> float:
    return fourier_half_line(f, A, "sin")


def _power(t, z: complex, s: float):
    return (t * t + z * z) ** (-s)


def fourier_line_oracle(s, A: float, z) -> complex:
    """Adaptive quadrature of the same line integral; the cosine-weighted
    semi-infinite rule handles the oscillatory tail."""
    s = float(Fraction(s))
    z = _check_z(z)
    A = float(A)
    parts = []
    for part in _parts(z):
        f = lambda t, part=part: float(part(_power(t, z, s)))
        if A == 0:
            val = quad(f, 0, np.inf, **QUAD_OPTS)[0]
        else:
            val = cosine_transform(f, A)
        parts.append(2 * val)
    return _pack(parts)


def I_z(n: int, nu: int, x, z) -> complex:
    """int_{R^n} e^{i<xi,x>} / (|xi|^2 + z^2)^nu d xi via the K-Bessel form."""
    z = _check_z(z)
    if 2 * nu <= n:
        raise DomainError(f"divergent: need 2 nu > n, got nu={nu}, n={n}")
    r = float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=float))))
    m = Fraction(2 * nu - n, 2)
    if r == 0:
        return complex(math.pi ** (n / 2) * math.gamma(float(m)) / (math.gamma(nu) * z ** (2 * nu - n)))
    pre = math.pi ** (n / 2) / (2 ** (float(m) - 1) * math.gamma(nu))
    return complex(pre * (r / z) ** float(m) * bessel_k(m, r * z))


def _sphere_area(k: int) -> float:
    """Surface area of the unit sphere in R^k (k = 1 gives the two points)."""
    return 2 * math.pi ** (k / 2) / math.gamma(k / 2)


def _transverse(n: int, nu: int, w2: complex) -> complex:
    # int over R^{n-1} of (|eta|^2 + w2)^{-nu}, done radially
    k = n - 1
    parts = []
    for part in _parts(w2):
        f = lambda rho, part=part: float(part(rho ** (k - 1) * (rho * rho + w2) ** (-nu)))
        parts.append(quad(f, 0, np.inf, **QUAD_OPTS)[0])
    return _sphere_area(k) * _pack(parts)


def I_z_oracle(n: int, nu: int, x, z) -> complex:
    """Direct quadrature of I_z.

    The x-direction carries the phase and is integrated with the cosine
    rule; the transverse (n-1)-dimensional integral is done in polar form at
    every outer node.
    """
    z = _check_z(z)
    r = float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=float))))
    if n == 1:
        return fourier_line_oracle(nu, r, z)

    @lru_cache(maxsize=None)
    def inner(t: float) -> complex:
        return _transverse(n, nu, t * t + z * z)

    parts = []
    for part in _parts(z):
        f = lambda t, part=part: float(part(inner(t)))
        if r == 0:
            val = quad(f, 0, np.inf, epsabs=1e-14, epsrel=1e-10, limit=300)[0]
        else:
            val = cosine_transform(f, r)
        parts.append(2 * val)
    return _pack(parts)
