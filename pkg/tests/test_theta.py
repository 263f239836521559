import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hurwitz_frobenius.errors import DomainError
from hurwitz_frobenius.theta import (ThetaCache, dedekind_eta_theta, theta1, wp, wp_derivs,
                                     wp_laurent, wp_sigma_derivs)

SIGMAS = [1j, 0.3 + 0.9j, -0.45 + 1.3j, 0.1 + 0.6j]
moduli = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.6, 1.6))
points = st.builds(complex, st.floats(-0.45, 0.45), st.floats(-0.3, 0.3))


def eisenstein(q2, weight, terms=200):
    """E_k(sigma) from sum n^{k-1} q^{2n} / (1 - q^{2n}), q2 = exp(2 pi i sigma)."""
    norm = {2: -24, 4: 240, 6: -504}[weight]
    return 1 + norm * sum(n ** (weight - 1) * q2 ** n / (1 - q2 ** n) for n in range(1, terms))


@pytest.mark.parametrize("sigma", SIGMAS)
def test_theta_against_mpmath(sigma):
    c = ThetaCache(sigma)
    for u in (0.13 + 0.05j, -0.31 + 0.2j, 0.4 - 0.1j):
        ref = complex(mpmath.jtheta(1, math.pi * u, c.q))
        assert abs(theta1(u, c) - ref) < 1e-13 * max(1, abs(ref))
        d1 = complex(mpmath.jtheta(1, math.pi * u, c.q, 1)) * math.pi
        assert abs(theta1(u, c, 1) - d1) < 1e-12 * max(1, abs(d1))


@pytest.mark.parametrize("sigma", SIGMAS)
def test_invariants_against_eisenstein(sigma):
    c = ThetaCache(sigma)
    q2 = cmath.exp(2j * math.pi * sigma)
    g2 = 4 * math.pi ** 4 / 3 * eisenstein(q2, 4)
    g3 = 8 * math.pi ** 6 / 27 * eisenstein(q2, 6)
    C = -math.pi ** 2 * eisenstein(q2, 2) / 3
    assert abs(c.invariants[0] - g2) < 1e-11 * abs(g2)
    assert abs(c.invariants[1] - g3) < 1e-11 * max(1, abs(g3))
    assert abs(c.wp_constant - C) < 1e-12 * abs(C)


@pytest.mark.parametrize("sigma", SIGMAS)
def test_theta_prime_product_formula(sigma):
    c = ThetaCache(sigma)
    q = c.q
    prod = 2 * math.pi * cmath.exp(1j * math.pi * sigma / 4)
    for n in range(1, 200):
        prod *= (1 - q ** (2 * n)) ** 3
    assert abs(c.theta_prime_zero - prod) < 1e-12 * abs(prod)
    assert abs(dedekind_eta_theta(sigma) ** 3 - prod) < 1e-12 * abs(prod)


def test_square_lattice_constant():
    # E_2(i) = 3 / pi, so C = -pi.
    assert abs(ThetaCache(1j).wp_constant + math.pi) < 1e-12


def test_modulus_domain():
    with pytest.raises(DomainError):
        ThetaCache(0.3 + 0.01j)


@given(moduli, points)
def test_wp_differential_equation(sigma, z):
    c = ThetaCache(sigma)
    if abs(z) < 0.05:
        z += 0.1
    g2, g3 = c.invariants
    p, dp = wp_derivs(z, c, 1)
    assert abs(dp ** 2 - (4 * p ** 3 - g2 * p - g3)) < 1e-8 * max(1, abs(p) ** 3)


@given(moduli, points)
def test_wp_periodic_and_even(sigma, z):
    c = ThetaCache(sigma)
    if abs(z) < 0.05:
        z += 0.1
    v = wp(z, c)
    for w in (z + 1, z + sigma, -z, z - 2 * sigma + 3):
        assert abs(wp(w, c) - v) < 1e-9 * max(1, abs(v))


@pytest.mark.parametrize("sigma", SIGMAS)
def test_laurent_matches_taylor(sigma):
    c = ThetaCache(sigma)
    ser = wp_laurent(c, 20)
    z = 0.07 + 0.03j
    approx = sum(ser.coefficient(k) * z ** k for k in range(-2, 20))
    assert abs(approx - wp(z, c)) < 1e-10 * abs(approx)


@pytest.mark.parametrize("sigma", SIGMAS[:2])
def test_sigma_derivative_matches_finite_difference(sigma):
    z = np.array([0.21 + 0.17j, -0.33 + 0.05j])
    exact = wp_sigma_derivs(z, ThetaCache(sigma), 2)
    h = 1e-5
    fd = (wp_derivs(z, ThetaCache(sigma + h), 2) - wp_derivs(z, ThetaCache(sigma - h), 2)) / (2 * h)
    assert np.max(np.abs(exact - fd)) < 1e-6 * np.max(np.abs(exact))
