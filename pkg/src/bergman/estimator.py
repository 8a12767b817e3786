"""scikit-learn style front-end: fit a Bergman basis, transform points to features."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .orthosystem import analytic_orthonormalize, bergman_orthonormalize
from .quadrature import build_disk_rule, suggest_orders
from .weightspec import WeightSpec, critical_radii, parse_weight


def check_points(X) -> np.ndarray:
    """Coerce input to a 1-D complex array of points.

    Accepts a complex array of shape (n,) or (n, 1), or a real array of
    shape (n, 2) holding (real, imaginary) columns.
    """
    X = np.asarray(X)
    if X.ndim == 0:
        X = X.reshape(1)
    if np.iscomplexobj(X):
        if X.ndim == 2 and X.shape[1] == 1:
            X = X[:, 0]
        if X.ndim != 1:
            raise ValueError(f"complex input must have shape (n,) or (n, 1), got {X.shape}")
        out = X.astype(complex)
    else:
        X = X.astype(float)
        if X.ndim == 2 and X.shape[1] == 2:
            out = X[:, 0] + 1j * X[:, 1]
        elif X.ndim == 1:
            out = X.astype(complex)
        else:
            raise ValueError(f"real input must have shape (n,) or (n, 2), got {X.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError("input contains NaN or infinity")
    return out


def _coerce_weight(weight) -> WeightSpec:
    if weight is None:
        return WeightSpec()
    if isinstance(weight, WeightSpec):
        return weight
    return parse_weight(weight)


class BergmanPolynomials(TransformerMixin, BaseEstimator):
    """Orthonormal polynomials p_0..p_degree for a weight on the unit disk.

    Parameters
    ----------
    weight : WeightSpec, dict or None
        The weight; a dict is parsed with the JSON config schema and ``None``
        means w = 1.
    degree : int
        Highest degree N.
    method : {"auto", "quadrature", "taylor"}
        ``"taylor"`` orthogonalizes in Taylor-coefficient space and needs
        every exponent m_k even and positive; ``"auto"`` picks it when it applies.
    radial_order, angular_order : int or None
        Disk quadrature orders for ``"quadrature"``; ``None`` picks orders
        adequate for ``degree``.

    Attributes
    ----------
    basis_ : OrthoBasis
    weight_ : WeightSpec
    radii_ : CriticalRadii
    gammas_ : ndarray of shape (degree + 1,)
    """

    def __init__(self, weight=None, degree=16, method="auto", radial_order=None, angular_order=None):
        self.weight = weight
        self.degree = degree
        self.method = method
        self.radial_order = radial_order
        self.angular_order = angular_order

    def fit(self, X=None, y=None):
        """Build the basis; ``X`` and ``y`` are ignored (the weight defines the problem)."""
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError("degree must be a nonnegative integer")
        spec = _coerce_weight(self.weight)
        method = self.method
        if method == "auto":
            method = "taylor" if spec.analytic_weight else "quadrature"
        if method == "taylor":
            basis = analytic_orthonormalize(spec, int(self.degree))
        elif method == "quadrature":
            rad, ang = suggest_orders(spec, int(self.degree))
            rule = build_disk_rule(spec, self.radial_order or rad, self.angular_order or ang)
            basis = bergman_orthonormalize(spec, int(self.degree), rule)
        else:
            raise ValueError(f"unknown method {self.method!r}")
        self.weight_ = spec
        self.basis_ = basis
        self.radii_ = critical_radii(spec)
        self.gammas_ = np.asarray(basis.gammas)
        self.n_features_out_ = int(self.degree) + 1
        return self

    def transform(self, X):
        """Matrix of p_k(z_i), shape (n_points, degree + 1), complex."""
        check_is_fitted(self, "basis_")
        return self.basis_.values(check_points(X))

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "basis_")
        return np.array([f"p{k}" for k in range(self.n_features_out_)], dtype=object)
