import math

import numpy as np
import pytest

from sphk.errors import DomainError, SingularInputError, TailToleranceError
from sphk.kernels import KernelSpec, v_z_sl2c_closed
from sphk.lattice import S, T, sigma
from sphk.poincare import (
    PoincareConfig,
    cauchy_check,
    constant_term_coeff,
    count_constant,
    invariance_check,
    kernel_profile,
    poincare_partial_sum,
    random_points,
    rank1_pattern_ratio,
    shell_fourier,
    shell_mass,
    sl2c_spectral_term,
    spectral_coefficient,
)
from sphk.rootsys import build_root_system
from sphk.spherical import zonal_spherical

A1 = build_root_system("A1")


def shell_cfg(R=4.0, nu=2, z=3.0, b=0.5, **kw):
    return PoincareConfig(KernelSpec(A1, z, nu, b), "shell", R, **kw)


class TestConfig:
    def test_gate(self):
        with pytest.raises(DomainError):
            shell_cfg(z=1.5)

    def test_validation(self):
        with pytest.raises(DomainError):
            PoincareConfig(KernelSpec(build_root_system("A2"), 3, 5), "fundamental")
        with pytest.raises(DomainError):
            PoincareConfig(KernelSpec(A1, 3, 2), "shell")
        with pytest.raises(DomainError):
            shell_cfg(R=7.0)
        with pytest.raises(DomainError):
            shell_cfg(nu=3)
        with pytest.raises(DomainError):
            PoincareConfig(KernelSpec(A1, 3, 2, 0.5), "heat")


class TestPartialSums:
    def test_cauchy(self):
        rep = cauchy_check(shell_cfg())
        assert rep["pass"]
        tails = [r["tail_bound"] for r in rep["results"]]
        assert tails[0] > tails[1] > tails[2]

    def test_geometric_increments(self):
        vals = [poincare_partial_sum(shell_cfg(R=R)).value for R in (2.0, 3.0, 4.0)]
        d1, d2 = abs(vals[1] - vals[0]), abs(vals[2] - vals[1])
        # empirical rate per unit R should not exceed e^{-2(Re z - 1)}
        assert d2 / d1 <= math.exp(-2 * (3 - 1))

    def test_single_term(self):
        # below the first nonzero radius only the 8 unitary elements of Gamma contribute,
        # and each one preserves sigma(g)
        r = 0.3
        g = np.diag([math.exp(r / 2), math.exp(-r / 2)])
        res = poincare_partial_sum(shell_cfg(R=r + 0.01), g)
        assert res.n_terms == 8
        assert res.value == pytest.approx(8 * v_z_sl2c_closed(r, 0.5, 3.0, 2), rel=1e-14)
        half = poincare_partial_sum(shell_cfg(R=r + 0.01, center_mode="mod_center"), g)
        assert half.n_terms == 4

    def test_real_for_real_z(self):
        assert poincare_partial_sum(shell_cfg(R=2.0)).value.imag == 0

    def test_conjugation(self):
        z = 3 + 0.5j
        a = poincare_partial_sum(shell_cfg(R=2.0, z=z)).value
        b = poincare_partial_sum(shell_cfg(R=2.0, z=z.conjugate())).value
        assert abs(a - b.conjugate()) <= 1e-12 * abs(a)

    def test_shell_hit_perturbs_b(self):
        # sigma(T) = arccosh(3/2) lies exactly on the shell for this b
        b = math.acosh(1.5)
        res = poincare_partial_sum(shell_cfg(R=2.0, b=b))
        assert res.b_used == pytest.approx(b + 1e-9, abs=1e-15)

    def test_tolerance_error(self):
        with pytest.raises(TailToleranceError):
            poincare_partial_sum(shell_cfg(R=2.0), tol=1e-12)

    def test_fundamental_kernel(self):
        cfg = PoincareConfig(KernelSpec(A1, 3.0, 2), "fundamental", 3.0)
        res = poincare_partial_sum(cfg)
        assert res.tail_bound < 1e-2
        # each of the 8 unitary elements gives the r -> 0 value
        prof = kernel_profile(cfg, np.array([0.0, 1e-6]))
        assert prof[0] == pytest.approx(prof[1], rel=1e-5)

    def test_nu1_shell(self):
        rep = cauchy_check(shell_cfg(nu=1), radii=(2.0, 3.0))
        assert rep["pass"]

    def test_count_constant(self):
        assert 5 < count_constant() < 20


class TestInvariance:
    def test_random_points(self):
        pts = random_points()
        assert len(pts) == 5
        for g in pts:
            assert abs(np.linalg.det(g) - 1) < 1e-12
            assert sigma(g) <= 1

    def test_generators(self):
        rep = invariance_check(shell_cfg(R=3.0), points=random_points(2))
        assert rep["pass"]
        assert len(rep["rows"]) == 4


class TestSpectral:
    @pytest.mark.parametrize("t", [0.0, 1e-9, 1e-4, 0.3, 1.0, 4.0, 12.0])
    def test_rank1_pattern(self, t):
        b, z = 0.5 / math.sqrt(2), 6 * math.sqrt(2)
        expected = 2 * math.sinh(0.5) ** 2 / 8**2
        assert abs(rank1_pattern_ratio(t, b, z) - expected) <= 1e-10 * expected

    def test_removable_limits(self):
        assert sl2c_spectral_term(0.0, 0.5, 3) == pytest.approx(0.5 / (math.sinh(0.5) * 81), rel=1e-15)
        assert sl2c_spectral_term(1e-9, 0.5, 3) == pytest.approx(sl2c_spectral_term(0.0, 0.5, 3), rel=1e-14)

    def test_term_even(self):
        t = np.linspace(0.1, 5, 7)
        assert np.allclose(sl2c_spectral_term(t, 0.7, 2.5), sl2c_spectral_term(-t, 0.7, 2.5), rtol=1e-15)

    def test_constant_term(self):
        assert constant_term_coeff(0.5, 1.5) == pytest.approx(0.25, rel=1e-15)
        # the constant eigenfunction sits at t = i/2
        assert sl2c_spectral_term(0.5j, 0.8, 1.5) == pytest.approx(constant_term_coeff(0.8, 1.5), rel=1e-12)

    # for G2 the shell integral is a 1e-8 remainder of O(1) terms divided by
    # pi+(xi) ~ 3e-4, so round-off sets a 1e-8 floor
    @pytest.mark.parametrize("label,tol", [("A1", 1e-12), ("A2", 1e-10), ("C2", 1e-10), ("G2", 1e-6)])
    def test_weyl_invariance(self, label, tol):
        rs = build_root_system(label)
        xi = np.array([0.7, 0.3][: rs.rank])
        c0 = spectral_coefficient(rs, xi, 0.6, 2.0, 2)
        for w in rs.weyl_f:
            assert spectral_coefficient(rs, w @ xi, 0.6, 2.0, 2) == pytest.approx(c0, rel=tol)

    @pytest.mark.parametrize("label", ["A1", "A2", "C2"])
    def test_matches_shell_transform(self, label):
        # pi+(rho)/pi+(-i xi) int e^{-i<xi,H>} prod sinh = S_b(phi_xi) / (|W| 2^d),
        # with S_b(phi_xi) computed from zonal spherical functions folded into the chamber
        rs = build_root_system(label)
        xi = np.array([0.7, 0.3][: rs.rank])
        b = 0.6
        if rs.rank == 2:
            th = (np.arange(720) + 0.5) * 2 * np.pi / 720
            pts, w = b * np.stack([np.cos(th), np.sin(th)], axis=1), 2 * np.pi * b / 720
        else:
            pts, w = np.array([[b], [-b]]), 1.0
        total = 0
        for H in rs.from_orth(pts):
            H = np.atleast_1d(H)
            folded = next(h for h in (m @ H for m in rs.weyl_f) if np.all(rs.root_values(h) >= -1e-14))
            total += zonal_spherical(rs, xi, folded) * np.prod(4 * np.sinh(rs.root_values(H)) ** 2)
        expected = total * w / (rs.weyl_order * 2**rs.d)
        assert shell_fourier(rs, xi, b) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("label", ["A1", "A2"])
    def test_small_b(self, label):
        rs = build_root_system(label)
        xi = np.array([0.7, 0.3][: rs.rank])
        errs = []
        for b in [0.1, 0.05]:
            c = spectral_coefficient(rs, xi, b, 2.0, 2)
            scale = shell_mass(rs, b) / (rs.weyl_order * 2**rs.d)
            n2 = float(rs.norm(xi)) ** 2
            errs.append(abs(c * (n2 + 4) ** 2 / scale - 1))
        assert errs[1] < errs[0] / 3
        assert errs[1] < 1e-2

    def test_singular_xi(self):
        with pytest.raises(SingularInputError):
            spectral_coefficient(build_root_system("A2"), [1.0, -1.0], 0.5, 2.0, 2)

    def test_rank_limit(self):
        with pytest.raises(DomainError):
            spectral_coefficient(build_root_system("A3"), [0.1, 0.2, 0.3], 0.5, 2.0, 2)
