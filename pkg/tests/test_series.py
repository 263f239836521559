import numpy as np
import pytest
from hypothesis import given, strategies as st

from hurwitz_frobenius.errors import NotInvertibleError, PrecisionError
from hurwitz_frobenius.series import TruncatedSeries, compose, residue, revert, schwarzian

ORDER = 8
cplx = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)
coeff_lists = st.lists(cplx, min_size=ORDER, max_size=ORDER)


def ser(c, lowest=0):
    return TruncatedSeries(c, lowest)


def close(a, b, upto, tol=1e-9):
    for k in range(min(a.lowest, b.lowest), upto):
        assert abs(a.coefficient(k) - b.coefficient(k)) < tol * (1 + abs(b.coefficient(k))), k


def test_compose_square():
    x = TruncatedSeries.variable(6)
    out = compose(x * x, x + x * x)
    assert np.allclose([out.coefficient(k) for k in range(6)], [0, 0, 1, 2, 1, 0])


def test_compose_geometric():
    x = TruncatedSeries.variable(5)
    geo = ser([1, 1, 1, 1, 1])
    out = compose(geo, x * 2)
    assert np.allclose([out.coefficient(k) for k in range(4)], [1, 2, 4, 8])


def test_revert_catalan():
    x = TruncatedSeries.variable(6)
    r = revert(x + x * x)
    assert np.allclose([r.coefficient(k) for k in range(1, 5)], [1, -1, 2, -5])


def test_schwarzian_cubic():
    x = TruncatedSeries.variable(6)
    assert schwarzian(x + x ** 3) == pytest.approx(6.0)


def test_schwarzian_of_moebius_vanishes():
    x = TruncatedSeries.variable(8)
    m = x * 2 / (x * 3 + 1)
    assert abs(schwarzian(m)) < 1e-12


def test_precision_error_beyond_truncation():
    s = ser([1, 2, 3])
    with pytest.raises(PrecisionError):
        s.coefficient(3)


def test_inverse_of_nonunit_raises():
    with pytest.raises(NotInvertibleError):
        ser([0.0, 1.0]).inverse()


def test_residue_of_power_series_is_zero():
    assert residue(ser([1, 2, 3])) == 0
    assert residue(ser([5, 7, 1], lowest=-2)) == 7


@given(coeff_lists, coeff_lists, coeff_lists)
def test_multiplication_associative(a, b, c):
    A, B, C = ser(a), ser(b), ser(c)
    close((A * B) * C, A * (B * C), ORDER)


@given(coeff_lists)
def test_inverse_roundtrip(a):
    a = [1.0 + 0j] + a[1:]
    A = ser(a)
    close(A * A.inverse(), TruncatedSeries.constant(1.0, ORDER), ORDER)


@given(coeff_lists)
def test_revert_is_compositional_inverse(a):
    a = [0j, 1.0 + 0.5j] + a[2:]
    A = ser(a)
    close(compose(A, revert(A)), TruncatedSeries.variable(ORDER), ORDER, tol=1e-7)


@given(coeff_lists, st.integers(1, 4), st.integers(1, 4))
def test_power_matches_repeated_product(a, num, den):
    a = [1.0 + 0j] + a[1:]
    A = ser(a)
    root = A.power(1, den)
    close(root ** den, A, ORDER, tol=1e-7)
    close(A.power(num, den), root ** num, ORDER, tol=1e-7)


@given(coeff_lists)
def test_log_derivative(a):
    a = [1.0 + 0j] + a[1:]
    A = ser(a)
    close(A.log().derivative(), A.derivative() / A, ORDER - 1, tol=1e-7)
