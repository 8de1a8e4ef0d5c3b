"""Modified Bessel function K of complex argument for integer and half-integer order.

Half-integer orders use the terminating closed form. Integer orders use the
ascending series below the crossover radius and a Laguerre-resummed version of
the large-argument expansion above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import roots_genlaguerre

from ..errors import DomainError

MAX_ORDER = 6
CROSSOVER = 8.0


@dataclass(frozen=True)
class BesselOrder:
    twice_order: int

    def __post_init__(self):
        if not isinstance(self.twice_order, (int, np.integer)) or self.twice_order < 0:
            raise DomainError(f"twice_order must be a non-negative integer, got {self.twice_order!r}")

    @classmethod
    def of(cls, order) -> "BesselOrder":
        """Accept a BesselOrder, an int, a Fraction, a float, or a string like '3/2'."""
        if isinstance(order, BesselOrder):
            return order
        if isinstance(order, str):
            order = Fraction(order.strip())
        tw = Fraction(order) * 2
        if tw.denominator != 1:
            raise DomainError(f"order {order} is neither integer nor half-integer")
        return cls(abs(int(tw)))

    @property
    def value(self) -> float:
        return self.twice_order / 2

    @property
    def is_half_integer(self) -> bool:
        return self.twice_order % 2 == 1

    def __str__(self) -> str:
        return f"{self.twice_order}/2" if self.is_half_integer else str(self.twice_order // 2)


def _check_z(z) -> complex:
    z = complex(z)
    if not z.real > 0:
        raise DomainError(f"K requires Re(z) > 0, got z = {z}")
    return z


def _check_order(order) -> BesselOrder:
    o = BesselOrder.of(order)
    if o.value > MAX_ORDER:
        raise DomainError(f"order {o} exceeds the supported maximum {MAX_ORDER}")
    return o


@lru_cache(maxsize=None)
def half_integer_coeffs(ell: int) -> tuple[Fraction, ...]:
    """c_k with K_{ell+1/2}(z) = sqrt(pi/2z) e^{-z} sum_k c_k (2z)^{-k}."""
    return tuple(
        Fraction(math.factorial(ell + k), math.factorial(k) * math.factorial(ell - k)) for k in range(ell + 1)
    )


def _k_half(ell: int, z: complex) -> complex:
    s = sum(float(c) / (2 * z) ** k for k, c in enumerate(half_integer_coeffs(ell)))
    return np.sqrt(np.pi / (2 * z)) * np.exp(-z) * s


def bessel_k_series(n: int, z) -> complex:
    """Ascending series for integer order, summed in extended precision.

    The logarithmic and polynomial parts cancel strongly once |z| grows, so the
    working precision scales with |z|.
    """
    z = _check_z(z)
    dps = 20 + int(0.87 * abs(z)) + 2 * n
    with mpmath.workdps(dps):
        zz = mpmath.mpc(z.real, z.imag)
        h = zz / 2
        q = h * h
        head = mpmath.mpf(0)
        for k in range(n):
            head += mpmath.factorial(n - k - 1) / mpmath.factorial(k) * (-q) ** k
        head *= h ** (-n) / 2
        # I_n and the digamma sum share the same power series.
        i_n = mpmath.mpf(0)
        tail = mpmath.mpf(0)
        term = h**n / mpmath.factorial(n)
        k = 0
        eps = mpmath.mpf(10) ** (-dps)
        # digamma(k+1) + digamma(n+k+1), updated through harmonic numbers
        psi = -2 * mpmath.euler + mpmath.fsum(mpmath.mpf(1) / j for j in range(1, n + 1))
        while True:
            i_n += term
            tail += psi * term
            k += 1
            psi += mpmath.mpf(1) / k + mpmath.mpf(1) / (n + k)
            term = term * q / (k * (n + k))
            if abs(term) * (1 + abs(mpmath.log(q)) + 2 * mpmath.log(k + n + 1)) < eps * abs(i_n) and k > 2:
                break
            if k > 4000:
                raise RuntimeError("Bessel series failed to converge")
        val = head + (-1) ** (n + 1) * mpmath.log(h) * i_n + (-1) ** n * tail / 2
        return complex(val)


@lru_cache(maxsize=None)
def _laguerre_rule(alpha: float, npts: int):
    return roots_genlaguerre(npts, alpha)


def bessel_k_large(order, z, npts: int = 60) -> complex:
    """Large-|z| branch: Gauss-Laguerre evaluation of the integral whose
    termwise expansion is the Hankel asymptotic series.

    K_v(z) = sqrt(pi/2z) e^{-z} / Gamma(v+1/2) * int_0^inf e^{-t} t^{v-1/2} (1 + t/2z)^{v-1/2} dt
    """
    o = _check_order(order)
    z = _check_z(z)
    v = o.value
    t, w = _laguerre_rule(v - 0.5, npts)
    integral = np.sum(w * (1 + t / (2 * z)) ** (v - 0.5))
    return np.sqrt(np.pi / (2 * z)) * np.exp(-z) * integral / math.gamma(v + 0.5)


def asymptotic_k(order, z, terms: int = 4) -> complex:
    """Truncated large-argument expansion with `terms` terms, mu = 4 v^2."""
    o = _check_order(order)
    z = complex(z)
    mu = 4 * o.value**2
    s = 0j
    c = 1.0
    for k in range(terms):
        s += c
        c *= (mu - (2 * k + 1) ** 2) / ((k + 1) * 8 * z)
    return np.sqrt(np.pi / (2 * z)) * np.exp(-z) * s


def bessel_k(order, z) -> complex:
    o = _check_order(order)
    z = _check_z(z)
    if o.is_half_integer:
        return complex(_k_half(o.twice_order // 2, z))
    n = o.twice_order // 2
    if abs(z) < CROSSOVER:
        return bessel_k_series(n, z)
    return complex(bessel_k_large(o, z))


def bessel_k_array(order, z) -> np.ndarray:
    """Elementwise bessel_k over an array of arguments."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    for idx, zz in np.ndenumerate(z):
        out[idx] = bessel_k(order, zz)
    return out


def k_integral_oracle(order, z) -> complex:
    """int_0^inf e^{-z cosh t} cosh(v t) dt by adaptive quadrature."""
    from scipy.integrate import quad

    o = BesselOrder.of(order)
    z = _check_z(z)
    v = o.value
    # past this point the integrand is e^{-750} below its value at t = 0
    upper = math.acosh(1 + 750 / z.real)
    # absolute target from the modulus integral, so a part that nearly cancels
    # does not chase relative accuracy it cannot reach
    scale = quad(lambda t: math.exp(-z.real * math.cosh(t)) * math.cosh(v * t), 0, upper, limit=400)[0]
    kw = dict(epsabs=1e-14 * scale, epsrel=1e-12, limit=400)
    re = quad(lambda t: math.exp(-z.real * math.cosh(t)) * math.cos(z.imag * math.cosh(t)) * math.cosh(v * t), 0, upper, **kw)[0]
    im = quad(lambda t: -math.exp(-z.real * math.cosh(t)) * math.sin(z.imag * math.cosh(t)) * math.cosh(v * t), 0, upper, **kw)[0]
    return complex(re, im)
