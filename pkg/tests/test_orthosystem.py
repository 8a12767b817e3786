import json
import math

import numpy as np
import pytest

from bergman.orthosystem import (
    OrthoBasis,
    QuadratureResolutionError,
    analytic_orthonormalize,
    bergman_orthonormalize,
    eval_poly,
    gram_residual,
    monic_norm_extremality,
    szego_monic,
    szego_monic_mp,
)
from bergman.quadrature import build_disk_rule, suggest_orders
from bergman.weightspec import ExpPolynomial, PolyZerosOutside, PowerProduct, WeightSpec, critical_radii

SHIPPED = {
    "poly2": WeightSpec(PolyZerosOutside([(0.5, 2)])),
    "exp": WeightSpec(ExpPolynomial([0, 1])),
    "s1": WeightSpec(None, ((0.5, 1),)),
    "s2": WeightSpec(None, ((0.4, 1), (-0.3j, -0.5))),
    "branch": WeightSpec(PowerProduct([(0.6, 0.5)])),
}


def _quad_basis(spec, N, factor=1):
    rad, ang = suggest_orders(spec, N)
    rule = build_disk_rule(spec, factor * rad, factor * ang)
    return bergman_orthonormalize(spec, N, rule), rule


def test_unit_weight_basis():
    basis, _ = _quad_basis(WeightSpec(), 40)
    expected = np.diag(np.sqrt(np.arange(41) + 1.0))
    assert np.max(np.abs(basis.coeffs - expected)) < 1e-10
    np.testing.assert_allclose(basis.gammas, np.sqrt(np.arange(41) + 1.0), rtol=1e-12)


@pytest.mark.parametrize("m", [1, -1, 2.5])
def test_radial_power_basis(m):
    spec = WeightSpec(None, ((0, m),))
    basis, _ = _quad_basis(spec, 24)
    np.testing.assert_allclose(basis.gammas, np.sqrt(np.arange(25) + 1 + m / 2), rtol=1e-11)


def test_taylor_oracle_matches_quadrature():
    spec = SHIPPED["poly2"]
    quad, _ = _quad_basis(spec, 48)
    exact = analytic_orthonormalize(spec, 48)
    assert np.max(np.abs(quad.coeffs - exact.coeffs)) < 1e-11


def test_multiprecision_matches_double():
    spec = WeightSpec(PolyZerosOutside([(0.5, 1)]), ((0.3, 2),))
    lo = analytic_orthonormalize(spec, 32)
    hi = analytic_orthonormalize(spec, 32, dps=40)
    assert hi.hp_coeffs is not None
    assert np.max(np.abs(lo.coeffs - hi.coeffs)) < 1e-12
    np.testing.assert_allclose(complex(hi.eval_hp(20, 0.4 + 0.1j)), lo.poly(20)(0.4 + 0.1j), rtol=1e-12)


def test_taylor_oracle_rejects_odd_exponents():
    with pytest.raises(ValueError):
        analytic_orthonormalize(SHIPPED["s1"], 8)


def test_frozen_poly2_values():
    basis = analytic_orthonormalize(SHIPPED["poly2"], 16)
    np.testing.assert_allclose(
        basis.gammas[[0, 1, 2, 8, 16]],
        [0.8108848540793832, 1.2646945253233073, 1.6232876371775922, 2.9751032879366885, 4.113570058810551],
        rtol=1e-12,
    )
    np.testing.assert_allclose(basis.poly(8)(0.3), 0.03796895709970112, rtol=1e-10)


@pytest.mark.parametrize("name", sorted(SHIPPED))
def test_gram_residual_and_gamma_envelope(name):
    spec = SHIPPED[name]
    basis, rule = _quad_basis(spec, 64)
    assert gram_residual(basis, spec, rule) < 1e-9
    c0 = critical_radii(spec).c0
    assert np.all(basis.gammas > 0)
    n = np.arange(8, 65)
    assert np.all(np.abs(basis.gammas[8:] / (c0 * np.sqrt(n)) - 1) < 0.25)


def test_leading_coefficients_are_gammas():
    basis, _ = _quad_basis(SHIPPED["s2"], 30)
    for n in range(31):
        p = basis.poly(n)
        assert p.degree == n
        np.testing.assert_allclose(p.leading, basis.gammas[n], rtol=1e-14)


def test_refinement_independence():
    spec = SHIPPED["s1"]
    a, _ = _quad_basis(spec, 40)
    b, _ = _quad_basis(spec, 40, factor=2)
    assert np.max(np.abs(a.coeffs - b.coeffs)) < 1e-8


def test_under_resolved_rule_raises():
    rule = build_disk_rule(WeightSpec(), 16, 32)
    with pytest.raises(QuadratureResolutionError):
        bergman_orthonormalize(WeightSpec(), 40, rule)


def test_eval_poly_examples():
    basis, _ = _quad_basis(WeightSpec(), 8)
    np.testing.assert_allclose(eval_poly(basis, 3, 1.0), 2.0, rtol=1e-13)
    spec = WeightSpec(PolyZerosOutside([(0.5, 1)]), ((0, 2),))
    b2, _ = _quad_basis(spec, 10)
    for n in range(1, 11):
        np.testing.assert_allclose(eval_poly(b2, n, 0.0), b2.coeffs[n, 0])
    z = np.random.default_rng(3).standard_normal(5) * 0.5
    for n in (4, 9):
        direct = sum(b2.coeffs[n, j] * z**j for j in range(n + 1))
        np.testing.assert_allclose(b2.values(z, n)[:, n], direct, rtol=1e-12)


def test_monic_extremality():
    basis, rule = _quad_basis(WeightSpec(), 8)
    rep = monic_norm_extremality(WeightSpec(), basis, 5, rule)
    assert rep.max_violation <= 1e-14
    assert rep.identity_residual < 1e-10
    np.testing.assert_allclose(rep.monic_norm_sq, rep.expected_norm_sq, rtol=1e-12)
    spec = SHIPPED["s2"]
    b2, r2 = _quad_basis(spec, 16)
    rep = monic_norm_extremality(spec, b2, 12, r2, trials=100)
    assert rep.max_violation <= 1e-12 and rep.identity_residual < 1e-10


def test_szego_unit():
    psi, psi_star = szego_monic(PolyZerosOutside([]), 6, 64)
    for n in range(7):
        np.testing.assert_allclose(psi[n].coeffs, np.eye(n + 1)[n], atol=1e-14)
        np.testing.assert_allclose(psi_star[n](0.3 + 0.2j), 1, atol=1e-14)


def test_szego_exp_orthogonality():
    outer = ExpPolynomial([0, 1])
    psi, _ = szego_monic(outer, 12, 256)
    z = np.exp(2j * np.pi * np.arange(256) / 256)
    u = np.abs(outer.value(z)) ** 2 * 2 * np.pi / 256
    for n in range(1, 13):
        for m in range(n):
            assert abs(np.sum(psi[n](z) * np.conj(z**m) * u)) < 1e-10


def test_szego_mp_agrees_and_psi0_nonzero():
    outer = ExpPolynomial([0, 1])
    hp = szego_monic_mp(outer, 24, 256, dps=50)
    lo, _ = szego_monic(outer, 10, 256)
    for n in range(11):
        np.testing.assert_allclose(np.array([complex(c) for c in hp[n]]), lo[n].coeffs, atol=1e-13)
    assert all(abs(complex(p[0])) > 0 for p in hp)


def test_json_roundtrip():
    basis, _ = _quad_basis(SHIPPED["s2"], 6)
    again = OrthoBasis.from_json(json.loads(json.dumps(basis.to_json())))
    np.testing.assert_array_equal(again.coeffs, basis.coeffs)
    np.testing.assert_array_equal(again.gammas, basis.gammas)


def test_limsup_growth_outside_critical_radius():
    basis = analytic_orthonormalize(SHIPPED["poly2"], 200)
    zeta = 0.8 * np.exp(0.4j)
    root = abs(basis.poly(200)(zeta)) ** (1 / 200)
    assert abs(root - abs(zeta)) < 0.02
    assert math.isfinite(root)
