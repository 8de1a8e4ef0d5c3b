"""Exact root systems of small complex semisimple Lie algebras.

Every vector lives in simple-root coordinates and the inner product is given
by the Gram matrix of the simple roots, so the only irrational lengths (G2,
C2) never appear: all pairings and squared lengths are rationals.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DomainError, UnsupportedAlgebraError

Q = Fraction
Matrix = tuple[tuple[Fraction, ...], ...]

MAX_RANK = 4

_SIMPLE_GRAMS: dict[str, list[list[Fraction]]] = {
    "A1": [[Q(2)]],
    "A2": [[Q(2), Q(-1)], [Q(-1), Q(2)]],
    "A3": [[Q(2), Q(-1), Q(0)], [Q(-1), Q(2), Q(-1)], [Q(0), Q(-1), Q(2)]],
    "C2": [[Q(1), Q(-1)], [Q(-1), Q(2)]],
    "G2": [[Q(1), Q(-3, 2)], [Q(-3, 2), Q(3)]],
}

WEYL_ORDERS = {"A1": 2, "A2": 6, "A3": 24, "C2": 8, "G2": 12}


@dataclass(frozen=True)
class WeylElement:
    matrix: Matrix
    sign: int

    def apply(self, v: Sequence) -> tuple:
        return tuple(sum(m * x for m, x in zip(row, v)) for row in self.matrix)


@dataclass(frozen=True)
class RootSystemData:
    label: str
    rank: int
    gram: Matrix
    positive_roots: tuple[tuple[int, ...], ...]
    rho: tuple[int, ...]
    weyl: tuple[WeylElement, ...]
    components: tuple[str, ...]

    @property
    def d(self) -> int:
        return len(self.positive_roots)

    @property
    def n(self) -> int:
        return self.rank

    @property
    def dim(self) -> int:
        """Real dimension of the symmetric space G/K."""
        return self.rank + 2 * self.d

    @property
    def weyl_order(self) -> int:
        return len(self.weyl)

    def pairing(self, u: Sequence, v: Sequence):
        return pairing(u, v, self)

    @cached_property
    def rho_norm_sq(self) -> Fraction:
        return pairing(self.rho, self.rho, self)

    @cached_property
    def pi_plus_rho(self) -> Fraction:
        return pi_plus_eval(self, self.rho)

    # Float views used by the numerical modules.

    @cached_property
    def gram_f(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.gram])

    @cached_property
    def chol(self) -> np.ndarray:
        """Lower-triangular L with gram = L L^T.

        Orthonormal coordinates of a vector with simple-root coordinates v are
        L^T v; a root a pairs with H as (L^T a) . (L^T H).
        """
        return np.linalg.cholesky(self.gram_f)

    @cached_property
    def roots_f(self) -> np.ndarray:
        return np.array(self.positive_roots, dtype=float)

    @cached_property
    def roots_orth(self) -> np.ndarray:
        """Positive roots in orthonormal coordinates, shape (d, n)."""
        return self.roots_f @ self.chol

    @cached_property
    def rho_f(self) -> np.ndarray:
        return np.array(self.rho, dtype=float)

    @cached_property
    def weyl_f(self) -> np.ndarray:
        return np.array([[[float(x) for x in row] for row in w.matrix] for w in self.weyl])

    @cached_property
    def weyl_signs(self) -> np.ndarray:
        return np.array([w.sign for w in self.weyl], dtype=float)

    def to_orth(self, v) -> np.ndarray:
        return np.asarray(v, dtype=complex if np.iscomplexobj(v) else float) @ self.chol

    def from_orth(self, x) -> np.ndarray:
        return np.linalg.solve(self.chol.T, np.asarray(x).T).T

    def norm(self, H) -> np.ndarray:
        H = np.asarray(H, dtype=float)
        return np.sqrt(np.einsum("...i,ij,...j->...", H, self.gram_f, H))

    def root_values(self, H) -> np.ndarray:
        """alpha(H) for every positive root; trailing axis indexes roots."""
        return np.asarray(H) @ (self.gram_f @ self.roots_f.T)

    def to_json(self) -> str:
        return json.dumps(
            {
                "label": self.label,
                "rank": self.rank,
                "gram": [[f"{x.numerator}/{x.denominator}" for x in row] for row in self.gram],
                "positive_roots": [list(a) for a in self.positive_roots],
                "rho": list(self.rho),
                "weyl_order": self.weyl_order,
            },
            sort_keys=True,
        )


def _check_dims(u: Sequence, v: Sequence, rank: int) -> None:
    if len(u) != rank or len(v) != rank:
        raise DomainError(f"expected vectors of length {rank}, got {len(u)} and {len(v)}")


def pairing(u: Sequence, v: Sequence, rs: RootSystemData):
    """u^T gram v, exact when the entries are rationals."""
    _check_dims(u, v, rs.rank)
    return sum(u[i] * rs.gram[i][j] * v[j] for i in range(rs.rank) for j in range(rs.rank))


def pi_plus_eval(rs: RootSystemData, mu: Sequence):
    """Product of <alpha, mu> over the positive roots (no multiplicities)."""
    if len(mu) != rs.rank:
        raise DomainError(f"expected a vector of length {rs.rank}, got {len(mu)}")
    out = 1
    for a in rs.positive_roots:
        out *= pairing(a, mu, rs)
    return out


def parse_label(label: str) -> tuple[str, ...]:
    parts = [p.strip().upper() for p in re.split(r"[+⊕xX*]", label.strip()) if p.strip()]
    if not parts:
        raise UnsupportedAlgebraError(f"empty algebra label {label!r}")
    for p in parts:
        if p not in _SIMPLE_GRAMS:
            raise UnsupportedAlgebraError(f"unsupported simple type {p!r} in {label!r}")
    return tuple(parts)


def _det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(row) for row in m]
    n = len(a)
    det = Q(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Q(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            for k in range(c, n):
                a[r][k] -= f * a[c][k]
    return det


def _matmul(x: Matrix, y: Matrix) -> Matrix:
    n = len(x)
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _simple_reflection(gram: Matrix, i: int) -> Matrix:
    n = len(gram)
    rows = []
    for r in range(n):
        row = [Q(int(r == c)) for c in range(n)]
        if r == i:
            row = [row[c] - 2 * gram[i][c] / gram[i][i] for c in range(n)]
        rows.append(tuple(row))
    return tuple(rows)


def _weyl_closure(gram: Matrix, expected: int) -> list[Matrix]:
    n = len(gram)
    gens = [_simple_reflection(gram, i) for i in range(n)]
    ident = tuple(tuple(Q(int(r == c)) for c in range(n)) for r in range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = _matmul(g, m)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
                    if len(seen) > 10 * expected:
                        raise RuntimeError("Weyl group closure ran away")
        frontier = nxt
    return sorted(seen)


def build_root_system(label: str) -> RootSystemData:
    comps = parse_label(label)
    rank = sum(len(_SIMPLE_GRAMS[c]) for c in comps)
    if rank > MAX_RANK:
        raise UnsupportedAlgebraError(f"rank {rank} exceeds the supported maximum {MAX_RANK}")

    gram_l = [[Q(0)] * rank for _ in range(rank)]
    off = 0
    for c in comps:
        g = _SIMPLE_GRAMS[c]
        for i, row in enumerate(g):
            for j, x in enumerate(row):
                gram_l[off + i][off + j] = x
        off += len(g)
    gram: Matrix = tuple(tuple(row) for row in gram_l)

    expected = 1
    for c in comps:
        expected *= WEYL_ORDERS[c]
    mats = _weyl_closure(gram, expected)
    weyl = tuple(WeylElement(m, int(_det(m))) for m in mats)

    simple = [tuple(Q(int(i == j)) for j in range(rank)) for i in range(rank)]
    roots = {w.apply(s) for w in weyl for s in simple}
    positive = sorted(
        (tuple(int(x) for x in r) for r in roots if all(x >= 0 for x in r)),
        key=lambda a: (sum(a), a[::-1]),
    )
    rho = tuple(sum(a[i] for a in positive) for i in range(rank))
    return RootSystemData(
        label="+".join(comps),
        rank=rank,
        gram=gram,
        positive_roots=tuple(positive),
        rho=rho,
        weyl=weyl,
        components=comps,
    )


def all_roots(rs: RootSystemData) -> set[tuple[int, ...]]:
    return set(rs.positive_roots) | {tuple(-x for x in a) for a in rs.positive_roots}


def gram_inverse(rs: RootSystemData) -> Matrix:
    """Exact inverse of the Gram matrix via adjugate over determinant."""
    n = rs.rank
    det = _det(rs.gram)
    adj = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [[rs.gram[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            cof = _det(minor) if minor else Q(1)
            row.append((-1) ** (i + j) * cof / det)
        adj.append(tuple(row))
    return tuple(adj)
