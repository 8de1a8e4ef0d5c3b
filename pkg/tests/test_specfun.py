import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from sphk.errors import DomainError
from sphk.rootsys import build_root_system
from sphk.specfun import (
    BesselOrder,
    I_z,
    I_z_oracle,
    asymptotic_k,
    bessel_k,
    bessel_k_large,
    bessel_k_series,
    fourier_line_integral,
    fourier_line_oracle,
    hecke_identity_check,
    k_integral_oracle,
    p_ell,
)


def rel(a, b):
    return abs(a - b) / abs(b)


# P_ell


def test_p_ell_values():
    assert p_ell(0).coeffs == (1,)
    assert p_ell(1).coeffs == (Fraction(1, 2), Fraction(1, 2))
    assert p_ell(2).coeffs == (Fraction(3, 8), Fraction(3, 8), Fraction(1, 8))


def test_p_ell_negative():
    with pytest.raises(DomainError):
        p_ell(-1)


# Bessel K


def test_order_parsing():
    assert BesselOrder.of("3/2").twice_order == 3
    assert BesselOrder.of(2).twice_order == 4
    assert str(BesselOrder.of(Fraction(5, 2))) == "5/2"
    with pytest.raises(DomainError):
        BesselOrder.of(Fraction(1, 3))
    with pytest.raises(DomainError):
        BesselOrder(-1)


@pytest.mark.parametrize("z", [1, 2, 1 + 1j])
def test_k_half_closed_form(z):
    expected = np.sqrt(np.pi / (2 * z)) * np.exp(-z)
    assert rel(bessel_k("1/2", z), expected) < 1e-15


def test_k1_at_2_against_integral():
    assert rel(bessel_k(1, 2.0), k_integral_oracle(1, 2.0)) < 1e-9


@pytest.mark.parametrize("order", [0, 1, 2, 3, 4, 5, 6, "1/2", "3/2", "5/2", "7/2", "11/2"])
@pytest.mark.parametrize("z", [0.3, 1.0, 2.5 + 1j, 4 - 3j, 7.5, 9 + 2j, 15])
def test_k_against_integral_oracle(order, z):
    assert rel(bessel_k(order, z), k_integral_oracle(order, z)) < 1e-10


@pytest.mark.parametrize("order", range(7))
@pytest.mark.parametrize("z", [0.05, 0.7, 3 + 4j, 6.5j + 1, 12, 20 - 5j])
def test_k_against_scipy(order, z):
    assert rel(bessel_k(order, z), sp.kv(order, z)) < 1e-13


@pytest.mark.parametrize("order", [0, 1])
@pytest.mark.parametrize("theta", [0.0, 0.6, -1.0])
def test_four_term_asymptotic_at_20(order, theta):
    z = 20 * np.exp(1j * theta)
    assert rel(asymptotic_k(order, z), bessel_k(order, z)) < 1e-6


def test_four_terms_exact_for_small_half_orders():
    for order in ("1/2", "3/2", "5/2", "7/2"):
        assert rel(asymptotic_k(order, 3.0), bessel_k(order, 3.0)) < 1e-14


@pytest.mark.parametrize("n", range(7))
def test_crossover_branches_agree(n):
    worst = 0
    for r in np.linspace(6, 10, 9):
        for th in np.linspace(-1.3, 1.3, 7):
            z = r * np.exp(1j * th)
            worst = max(worst, rel(bessel_k_series(n, z), bessel_k_large(n, z)))
    assert worst < 1e-9


@settings(max_examples=40, deadline=None)
@given(
    v=st.integers(min_value=1, max_value=5),
    re=st.floats(min_value=0.2, max_value=14),
    im=st.floats(min_value=-10, max_value=10),
)
def test_recurrence(v, re, im):
    z = complex(re, im)
    lhs = bessel_k(v + 1, z) - bessel_k(v - 1, z)
    rhs = 2 * v / z * bessel_k(v, z)
    assert abs(lhs - rhs) <= 1e-10 * max(abs(bessel_k(v + 1, z)), abs(rhs))


def test_k_domain_errors():
    with pytest.raises(DomainError):
        bessel_k(1, -1.0)
    with pytest.raises(DomainError):
        bessel_k(1, 2j)
    with pytest.raises(DomainError):
        bessel_k(7, 1.0)


def test_conjugation_symmetry():
    for order in (0, 2, "3/2"):
        z = 1.3 + 0.8j
        assert abs(bessel_k(order, z.conjugate()) - bessel_k(order, z).conjugate()) < 1e-15


# Line integrals


def test_line_integral_s1():
    assert rel(fourier_line_integral(1, 1, 2), math.pi * math.exp(-2) / 2) < 1e-15


def test_line_integral_s2():
    assert rel(fourier_line_integral(2, 1, 1), math.pi * math.exp(-1)) < 1e-15
    assert rel(fourier_line_oracle(2, 1, 1), math.pi * math.exp(-1)) < 1e-8


@pytest.mark.parametrize("s", [1, 2, 3, 4, "3/2", "5/2", "7/2"])
@pytest.mark.parametrize("z", [1, 2, 1.5 + 0.5j])
def test_line_integral_at_zero_frequency(s, z):
    assert rel(fourier_line_integral(s, 0.0, z), fourier_line_oracle(s, 0.0, z)) < 1e-9
    # and continuity of the closed form into A = 0
    assert rel(fourier_line_integral(s, 1e-7, z), fourier_line_integral(s, 0.0, z)) < 1e-6


@pytest.mark.parametrize("s", [1, 2, 3, "3/2", "5/2", "7/2"])
@pytest.mark.parametrize("A", [0.3, 1.1, 2.9])
@pytest.mark.parametrize("z", [1, 2, 1.5 + 0.5j])
def test_line_integral_vs_quadrature(s, A, z):
    assert rel(fourier_line_integral(s, A, z), fourier_line_oracle(s, A, z)) < 1e-8


def test_line_integral_domain():
    with pytest.raises(DomainError):
        fourier_line_integral("1/2", 1, 1)
    with pytest.raises(DomainError):
        fourier_line_integral("4/3", 1, 1)
    with pytest.raises(DomainError):
        fourier_line_integral(2, 1, -1)


# I_z


def test_iz_n1():
    assert rel(I_z(1, 1, [1.0], 1), math.pi * math.exp(-1)) < 1e-15


def test_iz_n2():
    assert rel(I_z(2, 2, [1.0, 0.0], 1), math.pi * sp.kv(1, 1)) < 1e-14


@pytest.mark.parametrize("n", [1, 3, 5])
def test_iz_odd_specialization(n):
    nu = (n + 1) // 2
    x = np.full(n, 0.7)
    r = np.linalg.norm(x)
    z = 1.2 + 0.3j
    expected = math.pi ** ((n + 1) / 2) / math.factorial((n - 1) // 2) * np.exp(-r * z) / z
    assert rel(I_z(n, nu, x, z), expected) < 1e-13


@pytest.mark.parametrize("n", [2, 4])
def test_iz_even_specialization(n):
    nu = n // 2 + 1
    x = np.full(n, 0.6)
    r = np.linalg.norm(x)
    z = 0.9 - 0.4j
    expected = math.pi ** (n / 2) / math.factorial(n // 2) * r * sp.kv(1, r * z) / z
    assert rel(I_z(n, nu, x, z), expected) < 1e-13


def test_iz_n3_oracle():
    x = np.array([0.4, -1.1, 0.7])
    assert rel(I_z(3, 2, x, 1.5), I_z_oracle(3, 2, x, 1.5)) < 1e-4


def test_iz_origin():
    for n, nu in [(1, 1), (2, 2), (3, 2)]:
        assert rel(I_z(n, nu, np.zeros(n), 1.3), I_z_oracle(n, nu, np.zeros(n), 1.3)) < 1e-8
        assert rel(I_z(n, nu, np.full(n, 1e-6), 1.3), I_z(n, nu, np.zeros(n), 1.3)) < 1e-4


def test_iz_divergent():
    with pytest.raises(DomainError):
        I_z(2, 1, [1, 0], 1)


@pytest.mark.parametrize("n,nu", [(1, 1), (2, 2), (3, 2), (3, 3)])
def test_iz_z_squared_derivative(n, nu):
    x = np.linspace(0.3, 0.9, n)
    z = 1.4 + 0.2j
    w = z * z
    h = 1e-4
    f = lambda w2: I_z(n, nu, x, np.sqrt(w2))
    d = (f(w + h) - f(w - h)) / (2 * h)
    assert rel(I_z(n, nu + 1, x, z), -d / nu) < 1e-5


# Hecke


def test_hecke_a1():
    fit = hecke_identity_check(build_root_system("A1"))
    assert fit.max_rel_deviation < 1e-6
    assert fit.zero_at_origin < 1e-12
    assert abs(fit.exponent - 0.25) < 1e-8


@pytest.mark.parametrize("label", ["A2", "C2", "G2", "A1+A1"])
def test_hecke_rank2(label):
    rs = build_root_system(label)
    fit = hecke_identity_check(rs)
    assert fit.max_rel_deviation < 1e-5
    assert abs(fit.constant - fit.exact_constant) < 1e-8 * abs(fit.exact_constant)


def test_hecke_constant_stable_across_grids():
    rs = build_root_system("A2")
    a = hecke_identity_check(rs).constant
    from sphk.specfun.hecke import default_y_grid

    b = hecke_identity_check(rs, default_y_grid(rs, seed=11)).constant
    assert abs(a - b) < 1e-5 * abs(a)


def test_hecke_rank_limit():
    with pytest.raises(DomainError):
        hecke_identity_check(build_root_system("A3"))
