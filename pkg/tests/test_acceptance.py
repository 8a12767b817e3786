"""Acceptance criteria, one test per criterion.

Each test appends a ``criterion N: PASS|FAIL ...`` line that is printed in
the terminal summary.  The N = 256 bases are built once per session; the
whole module takes a few minutes and about 1.5 GB of memory.
"""

import math
import time

import numpy as np
import pytest

from bergman.asymptotics import (
    alpha_decay_report,
    alpha_structure_report,
    bounded_verdict,
    branch_ratio_report,
    bs_zero_report,
    exp_weight_identity_residual,
    faber_report,
    gamma_report,
    kernel_consistency_report,
    rk0_point_report,
    strong_asymptotics_report,
)
from bergman.kernel import j_constant, make_kernel
from bergman.orthosystem import analytic_orthonormalize, bergman_orthonormalize
from bergman.quadrature import build_disk_rule, suggest_orders
from bergman.representation import Qn_eval, alpha_table, hg_recursion, theorem1_eval
from bergman.weightspec import ExpPolynomial, PolyZerosOutside, PowerProduct, WeightSpec

N_LIST = [16, 32, 64, 128, 256]
LATE = [32, 64, 128, 256]

POLY2 = WeightSpec(PolyZerosOutside([(0.5, 2)]))
EXP = WeightSpec(ExpPolynomial([0.0, 1.0]))
RATIONAL = WeightSpec(PolyZerosOutside([(0.5, 1)]))
S1 = WeightSpec(None, ((0.5, 1),))
S2 = WeightSpec(None, ((0.4, 1), (-0.3j, -0.5)))
BS = WeightSpec(PowerProduct([(0.5, -1)]), ((0.5, 2),))
RK0 = WeightSpec(None, ((0.6, 2),))
BRANCH = WeightSpec(PowerProduct([(0.6, 0.5)]))
SHIPPED = {"unit": WeightSpec(), "poly2": POLY2, "exp": EXP, "rational": RATIONAL, "s1": S1, "s2": S2,
           "bs_family": BS, "rk0": RK0, "branch": BRANCH}


def _log(log, number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    log.append(line)
    print(line)


def _quad(spec, N):
    rule = build_disk_rule(spec, *suggest_orders(spec, N))
    return bergman_orthonormalize(spec, N, rule), rule


@pytest.fixture(scope="session")
def poly2_256():
    return _quad(POLY2, 256)


@pytest.fixture(scope="session")
def exp_256():
    return _quad(EXP, 256)


@pytest.fixture(scope="session")
def s1_256():
    return _quad(S1, 256)


@pytest.fixture(scope="session")
def s2_120():
    return _quad(S2, 120)


@pytest.fixture(scope="session")
def rational_256():
    return _quad(RATIONAL, 256)


def _fmt(values):
    return "[" + ", ".join(f"{v:.3g}" for v in values) + "]"


def test_c01_unit_weight_exactness(acceptance_log):
    start = time.perf_counter()
    spec = WeightSpec()
    basis, _ = _quad(spec, 120)
    exact = np.diag(np.sqrt(np.arange(41) + 1.0))
    coeff_err = float(np.max(np.abs(basis.coeffs[:41, :41] - exact)))
    rng = np.random.default_rng(20240601)
    z = 0.7 * np.sqrt(rng.random(50)) * np.exp(2j * np.pi * rng.random(50))
    kernel = make_kernel(spec)
    worst = 0.0
    for n in range(41):
        hs = hg_recursion(alpha_table(spec, basis, n, 3 * n), 2 * n)
        for x in z:
            target = (n + 1) * x**n
            got = theorem1_eval(spec, n, 0.9, x, hs, kernel)
            worst = max(worst, abs(got - target) / max(1.0, abs(target)))
    elapsed = time.perf_counter() - start
    ok = coeff_err < 1e-10 and worst < 1e-10 and elapsed < 30
    _log(acceptance_log, 1, ok, f"coeff err {coeff_err:.2e}, representation err {worst:.2e}, {elapsed:.1f}s")
    assert coeff_err < 1e-10
    assert worst < 1e-10
    assert elapsed < 30


def test_c02_gamma_rate(acceptance_log, poly2_256, exp_256):
    details, oks = [], []
    for name, spec, (basis, _) in (("(1-0.5z)^2", POLY2, poly2_256), ("exp(z)", EXP, exp_256)):
        # the disk quadrature oracle agrees with the coefficient-space one
        taylor = analytic_orthonormalize(spec, 256)
        assert np.max(np.abs(basis.gammas - taylor.gammas) / taylor.gammas) < 1e-10
        rep = gamma_report(spec, basis, N_LIST)
        oks.append(rep.passed)
        details.append(f"{name} {_fmt(r[3] for r in rep.rows)}")
    _log(acceptance_log, 2, all(oks), "; ".join(details))
    assert all(oks)


def test_c03_strong_asymptotics(acceptance_log, poly2_256, exp_256, s1_256):
    details, oks = [], []
    for name, spec, (basis, _) in (("(1-0.5z)^2", POLY2, poly2_256), ("exp(z)", EXP, exp_256), ("s1", S1, s1_256)):
        rep = strong_asymptotics_report(spec, basis, N_LIST)
        oks.append(rep.passed)
        details.append(f"{name} {_fmt(r[3] for r in rep.rows)}")
    _log(acceptance_log, 3, all(oks), "; ".join(details))
    assert all(oks)


def test_c04_alpha_structure(acceptance_log, s1_256, s2_120):
    worst = {}
    for name, spec in SHIPPED.items():
        if name == "s1":
            basis = s1_256[0]
        elif name == "s2":
            basis = s2_120[0]
        elif spec.analytic_weight:
            basis = analytic_orthonormalize(spec, 48)
        else:
            basis = _quad(spec, 48)[0]
        rep = alpha_structure_report(spec, basis, [8, 16, 32], K_extra=16, tol=1e-8)
        worst[name] = (rep.passed, max(r[3] for r in rep.rows))
    ok = all(p for p, _ in worst.values())
    _log(acceptance_log, 4, ok, "max deviation " + ", ".join(f"{k} {v:.1e}" for k, (_, v) in worst.items()))
    assert ok


def test_c05_alpha_decay(acceptance_log, s1_256):
    rep = alpha_decay_report(S1, s1_256[0], 16, width=32)
    scaled = [r[3] for r in rep.rows]
    _log(acceptance_log, 5, rep.passed,
         f"eta {rep.details['eta']}, envelope constant {rep.details['constant']:.3g}, last/first {scaled[-1] / scaled[0]:.3g}")
    assert rep.passed


def test_c06_faber_norm(acceptance_log, rational_256, s1_256):
    details, oks = [], []
    for name, spec, rule in (("(1-0.5z)", RATIONAL, rational_256[1]), ("s1", S1, s1_256[1])):
        rep = faber_report(spec, rule, N_LIST, slope_range=(-1.4, -0.6))
        oks.append(rep.passed)
        details.append(f"{name} {_fmt(r[3] for r in rep.rows)} slope {rep.details['loglog_slope']:.3f}")
    _log(acceptance_log, 6, all(oks), "; ".join(details))
    assert all(oks)


def _interior_points(r, count=20):
    mods = np.linspace(0.75, 0.88, count)
    assert mods.max() < r
    return mods * np.exp(2j * np.pi * 0.618034 * np.arange(count))


def test_c07_representation_fidelity(acceptance_log, poly2_256, s1_256, s2_120):
    # With Jmax = 2n the dropped part of H_n is about |h(n, 2n+1)| |z|^{2n+1},
    # so the 1e-6 target needs n large enough; n = 8 is reported but not gated
    # (see test_c07_small_n_truncation_limit).
    r = 0.92
    z = _interior_points(r)
    ns = [16, 24, 32, 40]
    details, oks = [], []
    for name, spec, basis in (("(1-0.5z)^2", POLY2, poly2_256[0]), ("s1", S1, s1_256[0]), ("s2", S2, s2_120[0])):
        kernel = make_kernel(spec)
        v0 = spec.outer.v0()
        with_h, scaled = [], []
        for n in [8] + ns:
            hs = hg_recursion(alpha_table(spec, basis, n, 3 * n), 2 * n)
            ref = v0 * basis.gammas[n] * basis.values(z, n)[:, n]
            with_h.append(max(abs(theorem1_eval(spec, n, r, x, hs, kernel) / y - 1) for x, y in zip(z, ref)))
            scaled.append(n * max(abs(Qn_eval(spec, n, r, x, kernel) / y - 1) for x, y in zip(z, ref)))
        bounded, _ = bounded_verdict(ns, scaled[1:])
        oks.append(max(with_h[1:]) < 1e-6 and bounded)
        details.append(f"{name} with H {max(with_h[1:]):.1e} (n=8: {with_h[0]:.1e}), n*err without H {_fmt(scaled[1:])}")
    _log(acceptance_log, 7, all(oks), "; ".join(details))
    assert all(oks)


def test_c07_small_n_truncation_limit():
    # At n = 8 near |z| = 0.88 the Jmax = 2n cut leaves an error of order 1e-6;
    # twenty more terms remove it, so the miss is truncation and not the formula.
    basis = analytic_orthonormalize(POLY2, 60)
    z = _interior_points(0.92)
    kernel = make_kernel(POLY2)
    ref = POLY2.outer.v0() * basis.gammas[8] * basis.values(z, 8)[:, 8]

    def worst(jmax):
        hs = hg_recursion(alpha_table(POLY2, basis, 8, 8 + jmax), jmax)
        return max(abs(theorem1_eval(POLY2, 8, 0.92, x, hs, kernel) / y - 1) for x, y in zip(z, ref))

    assert 1e-7 < worst(16) < 1e-5
    assert worst(36) < 1e-11


def test_c08_exp_identity(acceptance_log):
    start = time.perf_counter()
    rule = build_disk_rule(EXP, *suggest_orders(EXP, 24))
    rep = exp_weight_identity_residual(24, 256, rule, grid=10, tol=1e-7)
    elapsed = time.perf_counter() - start
    worst = max(r[1] for r in rep.rows)
    ok = rep.passed and rep.details["grid_points"] == 100 and elapsed < 120
    _log(acceptance_log, 8, ok, f"max residual {worst:.2e}, min |psi_n(0)| {rep.details['min_abs_psi0']:.2e}, {elapsed:.1f}s")
    assert ok


def test_c09_bernstein_szego_zeros(acceptance_log):
    basis = analytic_orthonormalize(BS, 256, dps=100)
    rep = bs_zero_report(BS, basis, LATE, companion_n=64)
    gamma_rows = rep.details["bs_gamma"]["rows"]
    _log(acceptance_log, 9, rep.passed,
         f"n^2 drift err {_fmt(r[3] for r in rep.rows)}, n gamma^2 err {_fmt(r[3] for r in gamma_rows)}, "
         f"companion diff {rep.details['companion_check']['difference']:.1e}")
    assert rep.passed


@pytest.fixture(scope="module")
def rk0_basis():
    return analytic_orthonormalize(RK0, 256, dps=100)


@pytest.mark.xfail(strict=True, reason=(
    "p_n(a)/((1 + m/2) a^n) grows like n: the quoted on-singularity value omits the gamma_n (about sqrt(n)) "
    "normalization on both sides of the residue identity; see the corrected check below"))
def test_c10_rk0_on_singularity_value(acceptance_log, rk0_basis):
    rep = rk0_point_report(RK0, rk0_basis, LATE, normalization="literal")
    _log(acceptance_log, 10, rep.passed, f"literal n|p_n(0.6)/(2*0.6^n) - 1| {_fmt(r[3] for r in rep.rows)}")
    assert rep.passed


def test_c10b_rk0_corrected_normalization(acceptance_log, rk0_basis):
    rep = rk0_point_report(RK0, rk0_basis, LATE, normalization="corrected")
    interior = rep.details["rk0_point_corrected_interior"]["rows"]
    _log(acceptance_log, "10b", rep.passed,
         f"gamma_n p_n(0.6) vs 2(n+1)0.6^n: n*err {_fmt(r[3] for r in rep.rows)}; interior {_fmt(r[3] for r in interior)}")
    assert rep.passed


def test_c11_branch_point(acceptance_log):
    basis = analytic_orthonormalize(BRANCH, 256, dps=100)
    rep = branch_ratio_report(0.6, 0.5, 0.0, LATE, basis=basis, final_max=0.05)
    _log(acceptance_log, 11, rep.passed, f"ratio error {_fmt(r[3] for r in rep.rows)}")
    assert rep.passed


def test_c12_kernel_consistency(acceptance_log):
    reps = [kernel_consistency_report(spec, grid=6, N=64, tol=1e-7) for spec in (S1, S2)]
    rad, ang = suggest_orders(S2.pure_blaschke(), 64)
    j_base = j_constant(S2, radial_order=rad, angular_order=ang)
    j_fine = j_constant(S2, radial_order=2 * rad, angular_order=2 * ang)
    stable = abs(j_base - j_fine) < 1e-7
    ok = all(r.passed for r in reps) and stable
    _log(acceptance_log, 12, ok,
         f"structural vs series s=1 {reps[0].rows[0][1]:.1e}, s=2 {reps[1].rows[0][1]:.1e}; "
         f"J {j_base:.12f}, doubling change {abs(j_base - j_fine):.1e}")
    assert ok
    assert math.isfinite(j_base)
