import numpy as np
import pytest
from sklearn.base import clone

from bergman import BergmanPolynomials, WeightSpec
from bergman.estimator import check_points


def test_unit_transform():
    est = BergmanPolynomials(degree=6).fit()
    z = np.array([0.1, 0.3 + 0.2j, -0.5j])
    expected = np.sqrt(np.arange(7) + 1.0) * z[:, None] ** np.arange(7)
    np.testing.assert_allclose(est.transform(z), expected, atol=1e-13)
    assert est.n_features_out_ == 7
    assert list(est.get_feature_names_out())[:2] == ["p0", "p1"]


def test_dict_weight_and_methods_agree():
    weight = {"outer": {"kind": "poly", "factors": [[0.5, 0, 2]]}}
    a = BergmanPolynomials(weight, degree=20, method="taylor").fit()
    b = BergmanPolynomials(weight, degree=20, method="quadrature").fit()
    np.testing.assert_allclose(a.gammas_, b.gammas_, rtol=1e-12)
    assert a.radii_.rho_w == 0.5


def test_real_pairs_accepted():
    est = BergmanPolynomials(degree=3).fit()
    a = est.transform(np.array([[0.1, 0.2], [0.0, -0.3]]))
    b = est.transform(np.array([0.1 + 0.2j, -0.3j]))
    np.testing.assert_array_equal(a, b)


def test_singular_weight_uses_quadrature():
    est = BergmanPolynomials(WeightSpec(None, ((0.5, 1),)), degree=10).fit()
    assert est.basis_.hp_coeffs is None
    assert est.gammas_.shape == (11,)


def test_clone_and_params():
    est = BergmanPolynomials(degree=4, method="quadrature", radial_order=40)
    again = clone(est)
    assert again.get_params()["radial_order"] == 40


def test_errors():
    with pytest.raises(ValueError):
        BergmanPolynomials(degree=-1).fit()
    with pytest.raises(ValueError):
        BergmanPolynomials(method="magic").fit()
    with pytest.raises(ValueError):
        check_points(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        check_points([np.nan])
    with pytest.raises(Exception):
        BergmanPolynomials().transform([0.1])
