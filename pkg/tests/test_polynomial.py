import numpy as np
import pytest

from akhiezer import DomainError, MonicPolynomial, TwoIntervalSet, ZeroCountError, extract_zeros


def test_leading_coefficient_enforced():
    with pytest.raises(DomainError):
        MonicPolynomial(np.array([2.0, 1.0]))
    with pytest.raises(DomainError):
        MonicPolynomial(np.array([1.0, np.inf]))


def test_normalization_idempotent():
    f = MonicPolynomial.from_coeffs([3.0, -6.0, 1.5])
    np.testing.assert_array_equal(f.coeffs, [1.0, -2.0, 0.5])
    np.testing.assert_array_equal(f.normalized().coeffs, f.coeffs)


def test_from_roots_and_product_form():
    f = MonicPolynomial.from_roots([0.5, -0.25, 0.9])
    x = np.linspace(-1, 1, 11)
    np.testing.assert_allclose(f(x), np.polyval(f.coeffs, x), atol=1e-15)
    assert f.degree == 3


def test_multiplication_keeps_zeros():
    f = MonicPolynomial.from_roots([0.1]) * MonicPolynomial.from_roots([-0.4, 0.7])
    np.testing.assert_allclose(f.zeros, [-0.4, 0.1, 0.7])
    np.testing.assert_allclose(f.coeffs, np.poly([-0.4, 0.1, 0.7]), atol=1e-15)


def test_extract_x2_minus_1():
    z = extract_zeros(MonicPolynomial(np.array([1.0, 0.0, -1.0])))
    np.testing.assert_allclose(z, [-1.0, 1.0], atol=1e-13)


def test_extract_close_zeros_on_short_interval():
    s = TwoIntervalSet(-0.99995, 0.3)
    roots = [-0.99999, -0.99997, 0.5, 0.8]
    z = extract_zeros(MonicPolynomial.from_coeffs(np.poly(roots)), s)
    np.testing.assert_allclose(z, roots, atol=1e-12)


def test_extract_missing_zero_raises():
    # x^2 + 1 has no real zeros
    with pytest.raises(ZeroCountError):
        extract_zeros(MonicPolynomial(np.array([1.0, 0.0, 1.0])))


def test_derivative_values():
    f = MonicPolynomial.from_roots([-0.5, 0.2, 0.6])
    x = np.array([-0.3, 0.0, 0.9])
    np.testing.assert_allclose(f.derivative_values(x), np.polyval(np.polyder(f.coeffs), x), atol=1e-14)


def test_chebyshev_round_trip():
    f = MonicPolynomial.from_roots([-0.7, -0.1, 0.4, 0.95])
    x = np.linspace(-1, 1, 9)
    np.testing.assert_allclose(f.chebyshev()(x), f(x), atol=1e-14)
