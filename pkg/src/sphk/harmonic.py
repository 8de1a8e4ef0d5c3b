"""Exact harmonicity of the positive-root product polynomial.

Polynomials are kept in simple-root coordinates with ``Fraction``
coefficients, so every zero test below is an exact identity rather than a
floating-point comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .rootsys import RootSystemData, gram_inverse, pairing

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class MultiPoly:
    nvars: int
    terms: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            if len(e) != self.nvars:
                raise DomainError(f"exponent {e} does not have {self.nvars} entries")
            c = Fraction(c)
            if c != 0:
                clean[tuple(e)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "MultiPoly":
        n = len(coeffs)
        return cls(n, {tuple(int(i == j) for j in range(n)): Fraction(c) for i, c in enumerate(coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def _check(self, other: "MultiPoly") -> None:
        if other.nvars != self.nvars:
            raise DomainError("polynomials in different numbers of variables")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.nvars, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return MultiPoly(self.nvars, {e: c * Fraction(other) for e, c in self.terms.items()})
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def diff(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return MultiPoly(self.nvars, out)

    def __call__(self, point: Sequence):
        if len(point) != self.nvars:
            raise DomainError(f"expected {self.nvars} coordinates")
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                term = term * x**k
            total = total + term
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "MultiPoly(0)"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return "MultiPoly(" + " + ".join(parts) + ")"


def product(polys: Iterable[MultiPoly], nvars: int) -> MultiPoly:
    out = MultiPoly.constant(nvars, 1)
    for p in polys:
        out = out * p
    return out


def root_form(rs: RootSystemData, a: Sequence[int]) -> MultiPoly:
    """The linear form mu -> <a, mu> in simple-root coordinates."""
    return MultiPoly.linear([sum(a[i] * rs.gram[i][j] for i in range(rs.rank)) for j in range(rs.rank)])


def pi_plus_poly(rs: RootSystemData) -> MultiPoly:
    return product((root_form(rs, a) for a in rs.positive_roots), rs.rank)


def laplacian(p: MultiPoly, rs: RootSystemData) -> MultiPoly:
    """Sum of (gram^-1)_ij d_i d_j p, the Laplacian dual to the root pairing."""
    if p.nvars != rs.rank:
        raise DomainError(f"polynomial has {p.nvars} variables, root system rank is {rs.rank}")
    ginv = gram_inverse(rs)
    out = MultiPoly(rs.rank)
    for i in range(rs.rank):
        di = p.diff(i)
        for j in range(rs.rank):
            if ginv[i][j]:
                out = out + di.diff(j) * ginv[i][j]
    return out


def _cleared_term(rs: RootSystemData, beta, gamma) -> MultiPoly:
    # <beta, gamma> * pi_plus / (beta * gamma): the product of the other roots.
    others = [root_form(rs, a) for a in rs.positive_roots if a != beta and a != gamma]
    return product(others, rs.rank) * pairing(beta, gamma, rs)


def nonorthogonal_pairs(rs: RootSystemData, roots=None) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    roots = rs.positive_roots if roots is None else roots
    return [(b, g) for b, g in combinations(roots, 2) if pairing(b, g, rs) != 0]


def cleared_pair_sum(rs: RootSystemData, pairs) -> MultiPoly:
    out = MultiPoly(rs.rank)
    for b, g in pairs:
        out = out + _cleared_term(rs, b, g)
    return out


def harmonicity_pair_sum(rs: RootSystemData) -> MultiPoly:
    """Sum over unordered non-orthogonal pairs of <b,g>/(b g), times pi_plus."""
    return cleared_pair_sum(rs, nonorthogonal_pairs(rs))


def length_class_breakdown(rs: RootSystemData) -> list[dict]:
    """Split the pair sum by root-length class of the two roots.

    For G2 the short roots and the long roots each form an embedded A2, and
    the remaining mixed pairs make up the third group.
    """
    lengths = {a: pairing(a, a, rs) for a in rs.positive_roots}
    levels = sorted(set(lengths.values()))
    groups: dict[str, list] = {}
    for b, g in nonorthogonal_pairs(rs):
        lb, lg = lengths[b], lengths[g]
        if lb == lg:
            name = ("short" if lb == levels[0] else "long") if len(levels) > 1 else "all"
            key = f"{name}-{name}"
        else:
            key = "mixed"
        groups.setdefault(key, []).append((b, g))
    out = []
    for key in sorted(groups):
        pairs = groups[key]
        roots = sorted({r for p in pairs for r in p}, key=lambda a: (sum(a), a[::-1]))
        out.append(
            {
                "group": key,
                "roots": [list(r) for r in roots],
                "n_pairs": len(pairs),
                "sum_zero": cleared_pair_sum(rs, pairs).is_zero(),
            }
        )
    return out


def verify_harmonicity(rs: RootSystemData) -> dict:
    pi = pi_plus_poly(rs)
    lap = laplacian(pi, rs)
    pair_sum = harmonicity_pair_sum(rs)
    return {
        "algebra": rs.label,
        "d": rs.d,
        "laplacian_zero": lap.is_zero(),
        "pair_sum_zero": pair_sum.is_zero(),
        "leibniz_consistent": lap == pair_sum * 2,
        "breakdown": length_class_breakdown(rs),
    }
