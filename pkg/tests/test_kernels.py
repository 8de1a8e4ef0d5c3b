import math

import numpy as np
import pytest

from sphk.errors import DomainError, SingularInputError
from sphk.kernels import (
    KernelSpec,
    RadialBump,
    calibration_constant,
    composite_distance,
    hall_mitchell_check,
    j_half_inverse,
    minimal_nu,
    ray_point,
    resolvent_relation_check,
    u_z_closed,
    u_z_minimal_form,
    u_z_radial,
    u_z_spectral,
    u_z_spectral_folded,
    v_z_a1_closed,
    v_z_convolution,
    v_z_radial,
    v_z_sl2c_closed,
    v_z_sl2c_printed,
    v_z_spectral,
    weak_solution_residual,
)
from sphk.rootsys import build_root_system

A1 = build_root_system("A1")
A2 = build_root_system("A2")
ZS = [1.0, 2.0, 1.5 + 0.5j]


def rel(a, b):
    return abs(a - b) / abs(b)


class TestSpec:
    def test_lambda_z(self):
        s = KernelSpec(A2, 2, 5)
        # |rho|^2 = 8 for A2 in the Gram normalization
        assert s.lambda_z == pytest.approx(4 - 8)
        assert s.dim == 8

    @pytest.mark.parametrize("z", [0, -1, 1j])
    def test_bad_z(self, z):
        with pytest.raises(DomainError):
            KernelSpec(A1, z, 2)

    def test_bad_nu_and_b(self):
        with pytest.raises(DomainError):
            KernelSpec(A1, 1, 0)
        with pytest.raises(DomainError):
            KernelSpec(A1, 1, 1, b=-0.5)

    def test_minimal_nu(self):
        assert minimal_nu(A1) == 2
        assert minimal_nu(A2) == 5
        assert KernelSpec(A1, 1, 2).pointwise_u
        assert not KernelSpec(A1, 1, 1).pointwise_u

    def test_too_small_nu_rejected(self):
        with pytest.raises(DomainError):
            u_z_closed(KernelSpec(A1, 1, 1), [0.3])


class TestFundamental:
    @pytest.mark.parametrize("z", ZS)
    def test_a1_closed_vs_spectral(self, z):
        s = KernelSpec(A1, z, 2)
        for r in np.linspace(0.2, 3, 8):
            H = ray_point(A1, r)
            assert rel(u_z_spectral(s, H), u_z_closed(s, H)) < 1e-6

    @pytest.mark.parametrize("z", ZS)
    def test_a2_closed_vs_spectral(self, z):
        s = KernelSpec(A2, z, 5)
        for r in [0.2, 1.0, 3.0]:
            H = ray_point(A2, r, [1.0, 0.7])
            assert rel(u_z_spectral(s, H), u_z_closed(s, H)) < 1e-4

    @pytest.mark.parametrize("rs,nu", [(A1, 2), (A2, 5)])
    def test_weyl_folding(self, rs, nu):
        s = KernelSpec(rs, 2.0, nu)
        H = ray_point(rs, 0.8)
        assert rel(u_z_spectral_folded(s, H), u_z_spectral(s, H)) < 1e-4

    @pytest.mark.parametrize("rs,nu", [(A1, 2), (A2, 5), (A1, 3)])
    def test_real_z_real_kernel(self, rs, nu):
        s = KernelSpec(rs, 2.0, nu)
        H = ray_point(rs, 0.7)
        assert abs(u_z_spectral(s, H).imag) < 1e-10 * abs(u_z_closed(s, H))
        assert u_z_closed(s, H).imag == 0

    @pytest.mark.parametrize("rs,nu", [(A1, 2), (A1, 3), (A2, 5)])
    def test_conjugation(self, rs, nu):
        z = 1.5 + 0.5j
        H = ray_point(rs, 1.1)
        a = u_z_closed(KernelSpec(rs, z, nu), H)
        b = u_z_closed(KernelSpec(rs, z.conjugate(), nu), H)
        assert abs(a - b.conjugate()) <= 1e-12 * abs(a)

    @pytest.mark.parametrize("rs", [A1, A2])
    def test_minimal_form(self, rs):
        s = KernelSpec(rs, 1.5 + 0.5j, minimal_nu(rs))
        for r in [0.3, 1.0, 2.5]:
            H = ray_point(rs, r)
            assert rel(u_z_minimal_form(s, H), u_z_closed(s, H)) < 1e-12

    def test_a1_exponential_shape(self):
        # u * sinh(alpha) / (alpha e^{-z r}) is constant in r
        s = KernelSpec(A1, 2.0, 2)
        vals = []
        for r in [0.3, 1.0, 2.0]:
            H = ray_point(A1, r)
            a = A1.root_values(H)[0]
            vals.append(u_z_closed(s, H) * math.sinh(a) / (a * math.exp(-2 * r)))
        assert np.ptp(np.abs(vals)) < 1e-12 * abs(vals[0])

    @pytest.mark.parametrize("rs", [A1, A2])
    def test_origin_limit(self, rs):
        s = KernelSpec(rs, 2.0, minimal_nu(rs))
        at0 = u_z_closed(s, np.zeros(rs.rank))
        near = u_z_closed(s, ray_point(rs, 1e-5))
        assert math.isfinite(abs(at0))
        assert rel(near, at0) < 1e-4

    @pytest.mark.parametrize("rs", [A1, A2])
    def test_decay(self, rs):
        s = KernelSpec(rs, 2.0, minimal_nu(rs))
        rs_ = np.linspace(1, 8, 15)
        vals = np.array([abs(u_z_closed(s, ray_point(rs, r))) * math.exp(2.0 * r) for r in rs_])
        assert np.all(np.diff(vals) < 0)

    def test_large_z_even_rank(self):
        # |H| K_1(z|H|)/z ~ sqrt(pi/2) sqrt(|H|/z) e^{-z|H|}/z, relative error O(1/z|H|)
        H = ray_point(A2, 1.0)
        ratios = []
        for z in [20.0, 40.0, 80.0]:
            s = KernelSpec(A2, z, 5)
            asym = math.sqrt(math.pi / 2) * math.sqrt(1.0 / z) * math.exp(-z) / z
            ratios.append(u_z_closed(s, H) / asym)
        # ratio converges like 1 + 3/(8 z); successive differences shrink by 2
        d1, d2 = abs(ratios[1] - ratios[0]), abs(ratios[2] - ratios[1])
        assert d2 / d1 == pytest.approx(0.5, rel=0.05)

    def test_spectral_rank_limit(self):
        with pytest.raises(DomainError):
            u_z_spectral(KernelSpec(build_root_system("A3"), 2, 8), [0.1, 0.2, 0.3])


class TestHallMitchell:
    def test_j_at_origin(self):
        assert j_half_inverse(KernelSpec(A1, 1, 2), [0.0]) == 1.0

    def test_intertwining(self):
        rep = hall_mitchell_check(KernelSpec(A1, 2.0, 2), np.linspace(0.2, 3, 12))
        assert rep.deviation < 1e-6
        assert rep.z_variation < 1e-5

    def test_rank2_rejected(self):
        with pytest.raises(DomainError):
            hall_mitchell_check(KernelSpec(A2, 2.0, 5), [0.5])


R_GRID = [0.2, 0.5 - 1e-3, 0.5 + 1e-3, 1.5]


class TestShell:
    @pytest.mark.parametrize("nu", [1, 2])
    @pytest.mark.parametrize("z", ZS)
    def test_spectral_vs_closed(self, nu, z):
        s = KernelSpec(A1, z, nu, 0.5)
        for r in R_GRID:
            assert rel(v_z_radial(s, r), v_z_a1_closed(s, r)) < 1e-6

    @pytest.mark.parametrize("z", [2.0, 1.5 + 0.5j])
    @pytest.mark.parametrize("b", [0.3, 1.0])
    def test_convolution(self, z, b):
        s = KernelSpec(A1, z, 1, b)
        for r in [0.2, b - 0.05, b + 0.05, 1.7]:
            assert rel(v_z_convolution(s, r), v_z_radial(s, r)) < 1e-6

    def test_convolution_nu2(self):
        s = KernelSpec(A1, 2.0, 2, 0.5)
        for r in [0.3, 0.8]:
            assert rel(v_z_convolution(s, r), v_z_a1_closed(s, r)) < 1e-6

    def test_continuity_nu1(self):
        for z in ZS:
            left = v_z_sl2c_closed(0.7, 0.7, z, 1, side="left")
            right = v_z_sl2c_closed(0.7, 0.7, z, 1, side="right")
            assert abs(left - right) < 1e-8 * abs(left)
            expected = -math.sinh(0.7) / (z * math.sinh(0.7)) * np.exp(-1.4 * z) * np.sinh(1.4 * z)
            assert rel(left, expected) < 1e-12

    def test_exact_shell_needs_side(self):
        with pytest.raises(SingularInputError):
            v_z_sl2c_closed(0.5, 0.5, 2, 1)

    def test_nu_range(self):
        with pytest.raises(DomainError):
            v_z_sl2c_closed(0.3, 0.5, 2, 3)

    @pytest.mark.parametrize("z", ZS)
    def test_origin_limit(self, z):
        assert rel(v_z_sl2c_closed(0.0, 0.5, z, 1), -2 * math.sinh(0.5) * np.exp(-z)) < 1e-14
        assert rel(v_z_sl2c_closed(1e-6, 0.5, z, 1), v_z_sl2c_closed(0.0, 0.5, z, 1)) < 1e-9
        assert rel(v_z_sl2c_closed(1e-6, 0.5, z, 2), v_z_sl2c_closed(0.0, 0.5, z, 2)) < 1e-9

    def test_printed_nu2_diverges_at_origin(self):
        small = [abs(v_z_sl2c_printed(r, 0.5, 2.0)) for r in [1e-2, 1e-3, 1e-4]]
        assert small[2] > 50 * small[0]

    def test_printed_nu2_fails_oracle(self):
        s = KernelSpec(A1, 2.0, 2, 0.5)
        k = math.sqrt(2)
        r = 1.5
        printed = v_z_sl2c_printed(k * r, k * 0.5, 2.0 / (2 * k))
        from sphk.kernels import sl2c_scale

        assert rel(sl2c_scale(s) * printed, v_z_radial(s, r)) > 0.1

    def test_radial_symmetry(self):
        s = KernelSpec(A1, 1.5 + 0.5j, 2, 0.5)
        assert v_z_spectral(s, [0.4]) == pytest.approx(v_z_spectral(s, [-0.4]), rel=1e-13)

    @pytest.mark.parametrize("nu", [1, 2])
    def test_conjugation(self, nu):
        z = 1.5 + 0.5j
        a = KernelSpec(A1, z, nu, 0.5)
        b = KernelSpec(A1, z.conjugate(), nu, 0.5)
        for f in (v_z_radial, v_z_a1_closed, v_z_convolution):
            x, y = f(a, 0.8), f(b, 0.8)
            assert abs(x - y.conjugate()) <= 1e-12 * abs(x)

    def test_rank2_circle_converges(self):
        s = KernelSpec(A2, 2.0, 3, 0.5)
        H = ray_point(A2, 0.8)
        assert rel(v_z_spectral(s, H, 180), v_z_spectral(s, H, 360)) < 1e-10

    def test_singular_inputs(self):
        with pytest.raises(SingularInputError):
            v_z_spectral(KernelSpec(A1, 2, 1, 0.5), [0.5 / math.sqrt(2)])
        with pytest.raises(DomainError):
            v_z_spectral(KernelSpec(A1, 2, 1), [0.3])

    def test_composite_distance_endpoints(self):
        r, b = 0.9, 0.4
        assert composite_distance(r, b, math.pi) == pytest.approx(abs(r - b), abs=1e-12)
        assert composite_distance(r, b, 0.0) == pytest.approx(r + b, abs=1e-12)
        mids = [composite_distance(r, b, t) for t in np.linspace(0, math.pi, 9)]
        assert np.all(np.diff(mids) < 0)

    def test_small_b_limit(self):
        # v / (shell mass 2 m(b)) -> u as b -> 0
        r = 0.9
        u = u_z_radial(KernelSpec(A1, 2.0, 2), r)
        errs = []
        for b in [1e-1, 5e-2]:
            s = KernelSpec(A1, 2.0, 2, b)
            mass = 2 * 4 * math.sinh(math.sqrt(2) * b) ** 2
            errs.append(rel(v_z_convolution(s, r) / mass, u))
        assert errs[1] < errs[0] / 3
        assert errs[1] < 1e-2


class TestWeak:
    def test_calibration_frozen(self):
        c1 = calibration_constant()
        c2 = calibration_constant()
        assert c1 == c2
        # with Haar measure 1/(2 pi) times the radial density the point mass
        # integrates to 2 pi in these units
        assert c1 == pytest.approx(2 * math.pi, rel=1e-9)

    @pytest.mark.parametrize("nu,z", [(2, 2.0), (2, 3.0), (3, 2.0), (2, 1.5 + 0.5j)])
    def test_delta_mode(self, nu, z):
        assert weak_solution_residual(KernelSpec(A1, z, nu)) < 1e-3

    @pytest.mark.parametrize("nu,b", [(1, 0.5), (2, 0.5), (1, 1.2)])
    def test_shell_mode(self, nu, b):
        assert weak_solution_residual(KernelSpec(A1, 2.0, nu, b), mode="shell") < 1e-3
        wide = RadialBump(0.0, b + 0.6)
        assert weak_solution_residual(KernelSpec(A1, 2.0, nu, b), wide, mode="shell") < 1e-3

    def test_off_source(self):
        phi = RadialBump(1.2, 0.3)
        assert weak_solution_residual(KernelSpec(A1, 2.0, 2), phi) < 1e-6
        assert weak_solution_residual(KernelSpec(A1, 2.0, 1, 0.5), phi, mode="shell") < 1e-6
        inner = RadialBump(0.25, 0.15)
        assert weak_solution_residual(KernelSpec(A1, 2.0, 1, 0.5), inner, mode="shell") < 1e-6

    def test_bump_validation(self):
        with pytest.raises(DomainError):
            RadialBump(0.1, 0.3)
        assert RadialBump(0.0, 1.0)(0.0) == 1.0
        assert RadialBump(0.5, 0.2)(0.8) == 0.0

    def test_mode_validation(self):
        with pytest.raises(DomainError):
            weak_solution_residual(KernelSpec(A1, 2.0, 2), mode="line")


class TestResolvent:
    GRID = [0.2, 0.4, 0.7, 1.0, 1.5, 2.5]

    def test_u(self):
        rep = resolvent_relation_check(KernelSpec(A1, 2.0, 3), self.GRID, "u")
        assert rep.deviation < 1e-4
        assert rep.observed_order == pytest.approx(4, abs=0.3)

    @pytest.mark.parametrize("kernel", ["v", "sl2c"])
    def test_v_nu2(self, kernel):
        rep = resolvent_relation_check(KernelSpec(A1, 2.0, 2, 0.5), self.GRID, kernel)
        assert rep.deviation < 1e-4

    @pytest.mark.parametrize("kernel", ["v", "sl2c"])
    def test_homogeneous(self, kernel):
        rep = resolvent_relation_check(KernelSpec(A1, 2.0, 1, 0.5), self.GRID, kernel, homogeneous=True)
        assert rep.deviation < 1e-5

    def test_printed_formula_fails(self):
        rep = resolvent_relation_check(KernelSpec(A1, 2.0, 2, 0.5), self.GRID, "sl2c_printed")
        assert rep.deviation > 0.1

    def test_grid_on_shell_rejected(self):
        with pytest.raises(DomainError):
            resolvent_relation_check(KernelSpec(A1, 2.0, 2, 0.5), [0.5], "v")

    def test_nu1_needs_homogeneous(self):
        with pytest.raises(DomainError):
            resolvent_relation_check(KernelSpec(A1, 2.0, 1), [0.5], "u")
