import math

import mpmath
import numpy as np
import pytest

from hurwitz_frobenius import CoveringG1
from hurwitz_frobenius.errors import DomainError
from hurwitz_frobenius.frobenius import bergmann_quantities, hamiltonians, rotation_coeffs
from hurwitz_frobenius.theta import ThetaCache


def test_square_torus_half_periods(torus2):
    br = torus2.branch_data()
    assert len(br) == 3
    zs = sorted((torus2.cache.reduce(2 * b.z) for b in br), key=lambda z: (round(z.real, 6), z.imag))
    assert np.allclose(zs, 0, atol=1e-9)          # all at half-periods
    vals = sorted(b.lam.real for b in br)
    assert vals == pytest.approx([-6.875185818020373, 0.0, 6.875185818020373], abs=1e-9)


def test_h1_identity(torus2):
    # zeta_1 = lambda^{-1/2} = z (1 + O(z^4)), so dz/dzeta_1 = 1.
    assert torus2.infinity_factors() == [(3, pytest.approx(1.0))]


def test_h1_cubic():
    c = CoveringG1(0.2 + 1.1j, 0.3, (0.5, 2.0))
    h = c.infinity_factors()[0][1]
    # lambda ~ -2 c_3 / z^3 at the pole.
    assert abs(h) ** 3 == pytest.approx(2 * abs(c.c[-1]), rel=1e-12)


def test_critical_point_count_and_values():
    c = CoveringG1(0.2 + 1.1j, 0.3, (0.5, 2.0 - 0.5j))
    br = c.branch_data()
    assert len(br) == 4
    for b in br:
        d = c.derivs(b.z, 1)
        assert abs(d[1]) < 1e-9
        assert d[0] == pytest.approx(b.lam)


def test_a_cycle_integral_is_mean_value():
    c = CoveringG1(0.1 + 0.9j, 0.7 - 0.2j, (1.3 + 0.4j,))
    C = c.cache.wp_constant
    assert abs(c.a_cycle_integral() - (c.c0 + c.c[0] * C)) < 1e-12
    # independent of the horizontal path height
    assert abs(c.a_cycle_integral(z0=0.3j) - c.a_cycle_integral()) < 1e-12


def test_kernel_against_theta():
    c = CoveringG1(0.3 + 1.0j, 0, (1,))
    u = mpmath.mpc(0.21, 0.13)
    q = mpmath.mpc(c.cache.q)
    second = mpmath.diff(lambda x: mpmath.log(mpmath.jtheta(1, mpmath.pi * x, q)), u, 2)
    assert abs(c.kernel(complex(u)) + complex(second)) < 1e-10


def test_param_jacobian_sigma_column():
    c = CoveringG1(0.1 + 1.05j, 0.2, (0.8, 0.3 + 0.2j))
    br = c.branch_data()
    J = c.param_jacobian(br)
    h = 1e-6
    p = np.array(c.params)
    for j in range(len(p)):
        dp = np.zeros(len(p), complex)
        dp[j] = h
        up = c.with_params(p + dp).branch_data(reference=br)
        dn = c.with_params(p - dp).branch_data(reference=br)
        fd = (np.array([b.lam for b in up]) - np.array([b.lam for b in dn])) / (2 * h)
        assert np.allclose(fd, J[:, j], atol=1e-6), j


def test_domain_checks():
    with pytest.raises(DomainError):
        CoveringG1(1 - 1j, 0, (1,))
    with pytest.raises(DomainError):
        CoveringG1(1j, 0, (0.0,))


def test_hamiltonian_relation_genus1():
    c = CoveringG1(-0.2 + 0.95j, 0.4, (1.1 - 0.3j, 0.7j))
    br = c.branch_data()
    H = hamiltonians(rotation_coeffs(c, br), np.array([b.lam for b in br]))
    assert np.max(np.abs(H + bergmann_quantities(c, br) / 2)) < 1e-9


def test_lattice_reduction_idempotent():
    cache = ThetaCache(0.4 + 0.8j)
    z = np.array([3.7 + 2.9j, -1.2 - 0.5j])
    r = cache.reduce(z)
    assert np.allclose(cache.reduce(r), r)
    assert np.all(np.abs(r.imag) <= 0.4 + 1e-12)
