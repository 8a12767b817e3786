import json

import numpy as np
import pytest

from bergman.weightspec import (
    BlaschkeSingularity,
    DomainError,
    ExpPolynomial,
    PolyZerosOutside,
    PowerProduct,
    WeightSpec,
    critical_radii,
    eval_outer,
    eval_q_qstar,
    eval_vstar,
    eval_weight,
    load_weight,
    parse_weight,
)

OUTERS = [
    PolyZerosOutside([]),
    PolyZerosOutside([(0.5, 2)]),
    PolyZerosOutside([(0.3 + 0.4j, 1), (-0.6, 3)], scale=2.0),
    PowerProduct([(0.6, 0.5)]),
    PowerProduct([(0.5, -1), (-0.2j, 1.5)]),
    ExpPolynomial([0.0, 1.0]),
    ExpPolynomial([0.1, 0.3j, -0.2]),
]


def test_critical_radii_examples():
    unit = critical_radii(WeightSpec())
    assert unit.rho_w == 0 and unit.c0 == 1
    assert critical_radii(WeightSpec(PolyZerosOutside([(0.5, 1)]))).rho_w == 0.5
    r = critical_radii(WeightSpec(ExpPolynomial([0, 1]), ((0.5, 2),)))
    assert (r.rho_v, r.rho_a, r.rho_w) == (0.0, 0.5, 0.5)


def test_c0_and_mtotal():
    spec = WeightSpec(PolyZerosOutside([(0.5, 2)], scale=3.0), ((0.2, 1), (-0.4j, -0.5)))
    r = critical_radii(spec)
    np.testing.assert_allclose(r.c0, 1 / 3.0)
    assert r.m_total == 0.5


def test_critical_radii_is_pure():
    spec = WeightSpec(PowerProduct([(0.6, 0.5)]), ((0.3, 1),))
    assert critical_radii(spec) == critical_radii(spec)


def test_eval_outer_examples():
    assert eval_outer(WeightSpec(), 0.3 + 0.1j) == 1
    np.testing.assert_allclose(eval_outer(WeightSpec(PolyZerosOutside([(0.5, 2)])), 1.0), 0.25)
    np.testing.assert_allclose(eval_outer(WeightSpec(ExpPolynomial([0, 1])), 1j * np.pi / 2), 1j, atol=1e-15)


def test_eval_vstar_examples():
    assert eval_vstar(WeightSpec(), 0.4) == 1
    np.testing.assert_allclose(eval_vstar(WeightSpec(PolyZerosOutside([(0.5, 1)])), 2.0), 4 / 3)


@pytest.mark.parametrize("outer", OUTERS, ids=repr)
def test_vstar_times_conj_v_is_one_on_circle(outer):
    z = np.exp(2j * np.pi * np.random.default_rng(1).random(10_000))
    np.testing.assert_allclose(outer.vstar(z) * np.conj(outer.value(z)), 1, rtol=0, atol=1e-12)


def test_weight_examples():
    assert eval_weight(WeightSpec(None, ((0, 2),)), 0.5) == pytest.approx(0.25)
    assert eval_weight(WeightSpec(), 0.3j) == 1
    spec = WeightSpec(PolyZerosOutside([(0.5, 1)]), ((0.3, 1),))
    direct = abs(1 - 0.5 * 0.6) ** 2 * abs((0.6 - 0.3) / (1 - 0.18))
    np.testing.assert_allclose(eval_weight(spec, 0.6), direct, rtol=1e-14)


def test_weight_factorwise_in_annulus():
    spec = WeightSpec(PowerProduct([(0.6, 0.5)]), ((0.3 + 0.2j, 1), (-0.5, -1.5)))
    rng = np.random.default_rng(2)
    z = (0.61 + 0.38 * rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    direct = np.abs((1 - 0.6 * z) ** 0.5) ** 2
    direct = direct * np.abs((z - (0.3 + 0.2j)) / (1 - z * (0.3 - 0.2j))) * np.abs((z + 0.5) / (1 + 0.5 * z)) ** -1.5
    np.testing.assert_allclose(eval_weight(spec, z), direct, rtol=1e-13)


def test_q_qstar_examples():
    assert eval_q_qstar(WeightSpec(), 0.2) == (1, 1)
    q, qs = eval_q_qstar(WeightSpec(None, ((0.5, 1),)), 0)
    np.testing.assert_allclose([q, qs], [-0.5, 1])
    a = [0.3, -0.4j]
    q, qs = eval_q_qstar(WeightSpec(None, ((a[0], 1), (a[1], 2))), 0.1)
    np.testing.assert_allclose(q, (0.1 - a[0]) * (0.1 - a[1]))
    np.testing.assert_allclose(qs, (1 - 0.1 * np.conj(a[0])) * (1 - 0.1 * np.conj(a[1])))


def test_q_qstar_reflection_identity():
    # q*(z) = z^s conj(q(1/conj z)), so the ratio on the circle is z^s
    spec = WeightSpec(None, ((0.3, 1), (-0.4j, 2), (0.1 + 0.5j, -1)))
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 50, endpoint=False))
    _, qs = eval_q_qstar(spec, z)
    q_ref, _ = eval_q_qstar(spec, 1 / np.conj(z))
    np.testing.assert_allclose(qs / np.conj(q_ref), z**3, atol=1e-12)


@pytest.mark.parametrize("a, m", [(1.0, 1), (0.5, -2), (0.5, 0), (0.2, -3)])
def test_bad_singularity(a, m):
    with pytest.raises(ValueError):
        BlaschkeSingularity(a, m)


def test_duplicate_singularities_rejected():
    with pytest.raises(ValueError):
        WeightSpec(None, ((0.5, 1), (0.5, 2)))


def test_outer_zero_inside_closed_disk_rejected():
    with pytest.raises(ValueError):
        PolyZerosOutside([(1.0, 1)])
    with pytest.raises(ValueError):
        PolyZerosOutside([(0.5, 1.5)])


def test_power_branch_domain():
    v = PowerProduct([(0.6, 0.5)])
    np.testing.assert_allclose(v.value(0.5), np.sqrt(1 - 0.3))
    with pytest.raises(DomainError):
        v.value(2.0)


def test_maclaurin_matches_values():
    for outer in OUTERS:
        c = np.asarray(outer.maclaurin(80), dtype=complex)
        z = 0.4 * np.exp(1j * np.arange(5))
        np.testing.assert_allclose(np.polyval(c[::-1], z), outer.value(z), rtol=1e-13)
        r = np.asarray(outer.reciprocal_maclaurin(80), dtype=complex)
        np.testing.assert_allclose(np.polyval(r[::-1], z), 1 / outer.value(z), rtol=1e-13)


def test_json_roundtrip(tmp_path):
    spec = WeightSpec(PowerProduct([(0.6 + 0.1j, 0.5)], scale=1.5), ((0.3, 1), (-0.2j, -0.5)))
    data = spec.to_json()
    assert WeightSpec.from_json(json.loads(json.dumps(data))) == spec
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"weight": data}))
    assert load_weight(path) == spec


def test_parse_weight_missing_outer_is_unit():
    spec = parse_weight({"singularities": [[0.5, 0, 1]]})
    assert spec.s == 1 and spec.outer.v0() == 1
    with pytest.raises(ValueError):
        parse_weight({"outer": {"kind": "nope"}})
