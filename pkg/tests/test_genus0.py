import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hurwitz_frobenius import CoveringG0, NonSimpleStratumError
from hurwitz_frobenius.errors import DomainError
from hurwitz_frobenius.frobenius import bergmann_quantities, hamiltonians, rotation_coeffs
from hurwitz_frobenius.verification import annulus

annulus_pt = st.builds(lambda r, a: r * cmath.exp(1j * a), st.floats(0.5, 1.5), st.floats(0, 2 * math.pi))


def lams(c):
    return np.array([b.lam for b in c.branch_data()])


def test_anchor_branch_points(anchor):
    br = anchor.branch_data()
    assert [b.z for b in br] == pytest.approx([1, -1])
    assert [b.lam for b in br] == pytest.approx([-2, 2])
    assert br[0].second_deriv == pytest.approx(6)
    assert br[0].alpha == pytest.approx(1 / math.sqrt(3))
    assert br[1].alpha == pytest.approx(-1j / math.sqrt(3))
    assert anchor.bergmann_value(br, 0, 1) == pytest.approx(-1j / 12)
    assert anchor.proj_connection(br, 0) == pytest.approx(1 / 12)


def test_anchor_jacobian(anchor):
    assert np.allclose(anchor.param_jacobian(), [[1, 1], [-1, 1]])


def test_laurent_examples():
    c = CoveringG0.laurent(1, [0, 1])          # z + 1/z
    assert sorted(lams(c).real) == pytest.approx([-2, 2])
    assert c.infinity_factors()[0][1] == pytest.approx(1)
    c3 = CoveringG0.laurent(1, [0, 0, 8])      # z + 8/z^2
    assert c3.infinity_factors()[0] == (3, pytest.approx(math.sqrt(8)))


def test_non_simple_stratum():
    with pytest.raises(NonSimpleStratumError):
        CoveringG0.polynomial([0, 0]).branch_data()


def test_domain_errors():
    with pytest.raises(DomainError):
        CoveringG0.laurent(1, [1, 0])
    with pytest.raises(DomainError):
        CoveringG0("polynomial", 3, (1,))
    with pytest.raises(DomainError):
        CoveringG0.rational((1, 1), (), (1,))


def test_critical_values_via_derivative(rng):
    c = CoveringG0.laurent(2, annulus(rng, 4))
    for b in c.branch_data():
        h = 1e-6
        d = (c(b.z + h) - c(b.z - h)) / (2 * h)
        assert abs(d) < 1e-7
        assert c(b.z) == pytest.approx(b.lam)


def test_rational_kind_frames(rng):
    c = CoveringG0.rational((2, 1, 1), (0.7 + 0.2j, -0.9 + 0.1j), annulus(rng, 3))
    br = c.branch_data()
    assert len(br) == c.M == 5
    assert len(c.infinity_factors()) == 2
    H = hamiltonians(rotation_coeffs(c, br), lams(c))
    assert np.max(np.abs(H + bergmann_quantities(c, br) / 2)) < 1e-9


@pytest.mark.parametrize("make", [
    lambda rng: CoveringG0.polynomial(annulus(rng, 3)),
    lambda rng: CoveringG0.laurent(2, annulus(rng, 3)),
    lambda rng: CoveringG0.rational((2, 1), (0.6 - 0.3j,), annulus(rng, 2)),
])
def test_param_jacobian_matches_resolved_values(make, rng):
    c = make(rng)
    br = c.branch_data()
    J = c.param_jacobian(br)
    p = np.array(c.params)
    for j in range(len(p)):
        h = 1e-6
        dp = np.zeros(len(p), complex)
        dp[j] = h
        up = c.with_params(p + dp).branch_data(reference=br)
        dn = c.with_params(p - dp).branch_data(reference=br)
        fd = (np.array([b.lam for b in up]) - np.array([b.lam for b in dn])) / (2 * h)
        assert np.allclose(fd, J[:, j], atol=1e-7)


@pytest.mark.parametrize("make", [
    lambda rng: CoveringG0.polynomial(annulus(rng, 3)),
    lambda rng: CoveringG0.laurent(1, annulus(rng, 3)),
    lambda rng: CoveringG0.rational((2, 1), (0.6 - 0.3j,), annulus(rng, 2)),
])
def test_translation_and_dilation(make, rng):
    c = make(rng)
    base = np.sort_complex(lams(c))
    assert np.allclose(np.sort_complex(lams(c.translate(0.3 - 0.1j))), np.sort_complex(base + 0.3 - 0.1j))
    f = 1.2 + 0.4j
    assert np.allclose(np.sort_complex(lams(c.dilate(f))), np.sort_complex(f * base))


def test_reference_tracking_keeps_order_and_sign(rng):
    c = CoveringG0.polynomial(annulus(rng, 3))
    br = c.branch_data()
    moved = c.with_params(np.array(c.params) + 1e-4).branch_data(reference=br)
    for a, b in zip(br, moved):
        assert abs(a.z - b.z) < 1e-2
        assert abs(a.alpha - b.alpha) < 1e-2


@given(st.lists(annulus_pt, min_size=3, max_size=3))
def test_frames_invert_lambda(a):
    c = CoveringG0.polynomial(a)
    try:
        br = c.branch_data()
    except NonSimpleStratumError:
        return
    x = 1e-2
    for b in br:
        z = b.frame(x)
        assert abs(c(z) - b.lam - x * x) < 1e-9 * max(1, abs(b.lam))


@given(st.lists(annulus_pt, min_size=2, max_size=4))
def test_hamiltonian_relation(a):
    c = CoveringG0.polynomial(a)
    try:
        br = c.branch_data()
    except NonSimpleStratumError:
        return
    H = hamiltonians(rotation_coeffs(c, br), np.array([b.lam for b in br]))
    B = bergmann_quantities(c, br)
    assert np.max(np.abs(H + B / 2)) < 1e-8 * max(1, np.max(np.abs(B)))
