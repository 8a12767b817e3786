import gmpy2
import numpy as np
import pytest

from bergman.polynomial import PolynomialC, horner


def test_horner_matches_polyval():
    rng = np.random.default_rng(0)
    c = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    z = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    np.testing.assert_allclose(horner(c, z), np.polyval(c[::-1], z), rtol=1e-13)


def test_horner_multiprecision():
    with gmpy2.context(gmpy2.get_context(), precision=200):
        c = [gmpy2.mpc(1), gmpy2.mpc(0), gmpy2.mpc(2)]
        assert complex(horner(c, gmpy2.mpc(2))) == 9


def test_trimming_and_degree():
    p = PolynomialC([1, 2, 0, 0])
    assert p.degree == 1 and p.leading == 2
    assert PolynomialC([0, 0]).degree == 0


def test_arithmetic():
    p = PolynomialC([1, 1])
    q = p * p
    np.testing.assert_array_equal(q.coeffs, [1, 2, 1])
    np.testing.assert_array_equal((q - p).coeffs, [0, 1, 1])
    np.testing.assert_array_equal((2 * p).coeffs, [2, 2])
    np.testing.assert_array_equal(q.derivative().coeffs, [2, 2])
    np.testing.assert_array_equal(PolynomialC([2, 4]).monic().coeffs, [0.5, 1])


def test_star():
    p = PolynomialC([1j, 2, 3])
    np.testing.assert_array_equal(p.star().coeffs, [3, 2, -1j])
    np.testing.assert_array_equal(PolynomialC([0, 1]).star(3).coeffs, [0, 0, 1])
    with pytest.raises(ValueError):
        p.star(1)


def test_roots_against_construction():
    r = np.array([0.5, -0.2 + 0.3j, 0.9j, -0.7])
    p = PolynomialC([1])
    for x in r:
        p = p * PolynomialC([-x, 1])
    np.testing.assert_allclose(np.sort_complex(p.roots()), np.sort_complex(r), atol=1e-13)


def test_scalar_call_returns_complex():
    assert PolynomialC([1, 0, 2])(2.0) == 9 + 0j
