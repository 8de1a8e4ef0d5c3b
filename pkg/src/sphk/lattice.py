"""SL2(Z[i]): Gaussian-integer matrices, geodesic radius and enumeration by radius.

The geodesic distance in hyperbolic 3-space between the base point and g.x0
is arccosh(|g|_F^2 / 2), so a ball of radius R is the finite set of
integer quadruples with |a|^2 + |b|^2 + |c|^2 + |d|^2 <= 2 cosh R and
ad - bc = 1.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import DomainError

R_MAX = 6.0
DET_TOL = 1e-9
# exact int64 arithmetic needs |entries|^2 products far below 2^63
_SAFE_NORM = 2**28


@dataclass(frozen=True)
class GaussianInt:
    re: int
    im: int

    def __post_init__(self):
        object.__setattr__(self, "re", int(self.re))
        object.__setattr__(self, "im", int(self.im))

    @classmethod
    def of(cls, x) -> "GaussianInt":
        if isinstance(x, GaussianInt):
            return x
        x = complex(x)
        if x.real != int(x.real) or x.imag != int(x.imag):
            raise DomainError(f"{x} is not a Gaussian integer")
        return cls(int(x.real), int(x.imag))

    def __add__(self, o):
        o = GaussianInt.of(o)
        return GaussianInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussianInt.of(o))

    def __mul__(self, o):
        o = GaussianInt.of(o)
        return GaussianInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __str__(self) -> str:
        return f"{self.re}{self.im:+d}i"


def _sigma_from_norm(norm_sq: float) -> float:
    x = norm_sq / 2
    if x < 1 + 1e-12:
        return 0.0
    return math.acosh(x)


@dataclass(frozen=True)
class LatticeElement:
    a: GaussianInt
    b: GaussianInt
    c: GaussianInt
    d: GaussianInt

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, GaussianInt.of(getattr(self, k)))
        det = self.a * self.d - self.b * self.c
        if det != GaussianInt(1, 0):
            raise DomainError(f"determinant is {det}, not 1")

    @classmethod
    def from_entries(cls, a, b, c, d) -> "LatticeElement":
        return cls(*(GaussianInt.of(x) for x in (a, b, c, d)))

    @property
    def entries(self) -> tuple[GaussianInt, ...]:
        return self.a, self.b, self.c, self.d

    @property
    def norm_sq(self) -> int:
        return sum(x.norm() for x in self.entries)

    @cached_property
    def sigma(self) -> float:
        return _sigma_from_norm(self.norm_sq)

    def key(self) -> tuple[int, ...]:
        return tuple(v for x in self.entries for v in (x.re, x.im))

    def __matmul__(self, o: "LatticeElement") -> "LatticeElement":
        return LatticeElement(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> "LatticeElement":
        return LatticeElement(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "LatticeElement":
        return LatticeElement(-self.a, -self.b, -self.c, -self.d)

    def matrix(self) -> np.ndarray:
        return np.array([[complex(self.a), complex(self.b)], [complex(self.c), complex(self.d)]])


IDENTITY = LatticeElement.from_entries(1, 0, 0, 1)
T = LatticeElement.from_entries(1, 1, 0, 1)
S = LatticeElement.from_entries(0, -1, 1, 0)
GENERATORS = {"T": T, "S": S, "Ti": LatticeElement.from_entries(1, 1j, 0, 1)}


def sigma(m) -> float:
    """Geodesic radius arccosh(|m|_F^2 / 2) of a determinant-one matrix."""
    if isinstance(m, LatticeElement):
        return m.sigma
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise DomainError("expected a 2x2 matrix")
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det - 1) > DET_TOL:
        raise DomainError(f"determinant {det} is not 1")
    return _sigma_from_norm(float(np.sum(np.abs(m) ** 2)))


def _gaussian_disk(bound: int) -> np.ndarray:
    """All Gaussian integers with norm <= bound as an (N, 2) int64 array."""
    k = math.isqrt(bound)
    x, y = np.meshgrid(np.arange(-k, k + 1), np.arange(-k, k + 1), indexing="ij")
    pts = np.stack([x.ravel(), y.ravel()], axis=1).astype(np.int64)
    return pts[np.sum(pts * pts, axis=1) <= bound]


def _norm(p: np.ndarray) -> np.ndarray:
    return p[..., 0] * p[..., 0] + p[..., 1] * p[..., 1]


def _mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return np.stack([p[..., 0] * q[..., 0] - p[..., 1] * q[..., 1], p[..., 0] * q[..., 1] + p[..., 1] * q[..., 0]], axis=-1)


def _solutions_for_a(a: np.ndarray, disk: np.ndarray, bound: int) -> np.ndarray:
    """All (a, b, c, d) with this nonzero a: d = (1 + bc)/a must be integral."""
    na = int(_norm(a))
    rest = bound - na
    pts = disk[_norm(disk) <= rest]
    nb = _norm(pts)
    ib, ic = np.nonzero(nb[:, None] + nb[None, :] <= rest)
    b, c = pts[ib], pts[ic]
    num = _mul(b, c)
    num[:, 0] += 1
    # (1 + bc) conj(a) / |a|^2
    prod = _mul(num, np.array([a[0], -a[1]]))
    ok = np.all(prod % na == 0, axis=1)
    d = prod[ok] // na
    b, c = b[ok], c[ok]
    keep = _norm(b) + _norm(c) + _norm(d) <= rest
    n = int(np.sum(keep))
    return np.concatenate([np.tile(a, (n, 1)), b[keep], c[keep], d[keep]], axis=1)


def _solutions_a_zero(disk: np.ndarray, bound: int) -> np.ndarray:
    """a = 0 forces -bc = 1: b a unit, c = -1/b, d free within the bound."""
    out = []
    for u in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        b = np.array(u)
        c = -np.array([u[0], -u[1]])  # -1/u = -conj(u) for a unit
        d = disk[_norm(disk) <= bound - 2]
        n = len(d)
        out.append(np.concatenate([np.zeros((n, 2), np.int64), np.tile(b, (n, 1)), np.tile(c, (n, 1)), d], axis=1))
    return np.concatenate(out) if out else np.zeros((0, 8), np.int64)


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("SPHK_THREADS", "0")) or (os.cpu_count() or 1)
    return max(1, int(threads))


@dataclass
class LatticeBall:
    """Elements of SL2(Z[i]) with sigma <= radius, as an (N, 8) integer array
    (re a, im a, re b, ..., im d) sorted by (sigma, entries)."""

    radius: float
    entries: np.ndarray

    def __len__(self) -> int:
        return len(self.entries)

    @cached_property
    def norm_sq(self) -> np.ndarray:
        return np.sum(self.entries * self.entries, axis=1)

    @cached_property
    def sigmas(self) -> np.ndarray:
        return np.array([_sigma_from_norm(float(n)) for n in self.norm_sq])

    @cached_property
    def matrices(self) -> np.ndarray:
        """Complex (N, 2, 2) array."""
        e = self.entries.astype(float)
        z = e[:, 0::2] + 1j * e[:, 1::2]
        return z.reshape(-1, 2, 2)

    def __iter__(self) -> Iterator[LatticeElement]:
        for row in self.entries:
            yield LatticeElement.from_entries(*(complex(int(row[2 * k]), int(row[2 * k + 1])) for k in range(4)))

    def mod_center(self) -> "LatticeBall":
        """One representative of each {g, -g}: the first nonzero entry
        component is positive."""
        first = np.argmax(self.entries != 0, axis=1)
        sign = self.entries[np.arange(len(self)), first]
        return LatticeBall(self.radius, self.entries[sign > 0])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re_a", "im_a", "re_b", "im_b", "re_c", "im_c", "re_d", "im_d", "sigma"])
        for row, s in zip(self.entries, self.sigmas):
            w.writerow([*map(int, row), "%.17g" % s])
        return buf.getvalue()


def enumerate_ball(R: float, r_max: float = R_MAX, threads: int | None = None) -> LatticeBall:
    """Every gamma in SL2(Z[i]) with sigma(gamma) <= R, each exactly once."""
    if not R > 0:
        raise DomainError("R must be positive")
    if R > r_max:
        raise DomainError(f"R = {R} exceeds the configured maximum {r_max}")
    # integer norm bound; the tolerance keeps boundary elements with cosh R integral
    bound = math.floor(2 * math.cosh(R) + 1e-9)
    if bound > _SAFE_NORM:
        raise OverflowError("norm bound too large for exact int64 arithmetic")
    disk = _gaussian_disk(bound)
    a_values = [a for a in disk if _norm(a) > 0]
    with ThreadPoolExecutor(max_workers=_threads(threads)) as pool:
        parts = list(pool.map(lambda a: _solutions_for_a(a, disk, bound), a_values))
    parts.append(_solutions_a_zero(disk, bound))
    ent = np.concatenate(parts).astype(np.int64)
    norm = np.sum(ent * ent, axis=1)
    order = np.lexsort(tuple(ent[:, k] for k in range(7, -1, -1)) + (norm,))
    ent = ent[order]
    return LatticeBall(float(R), ent)


def left_multiply(g: LatticeElement, ball: LatticeBall) -> np.ndarray:
    """Entries of g*gamma for every gamma in the ball (same layout)."""
    e = ball.entries
    A = [e[:, 2 * k] + 1j * e[:, 2 * k + 1] for k in range(4)]
    ga, gb, gc, gd = (complex(x) for x in g.entries)
    out = [ga * A[0] + gb * A[2], ga * A[1] + gb * A[3], gc * A[0] + gd * A[2], gc * A[1] + gd * A[3]]
    return np.stack([v for x in out for v in (np.rint(x.real), np.rint(x.imag))], axis=1).astype(np.int64)
