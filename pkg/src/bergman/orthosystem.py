"""Orthonormal Bergman polynomials and monic Szegő polynomials.

Two oracles compute the Bergman basis:

* :func:`bergman_orthonormalize` works with a discrete inner product given by
  a disk quadrature rule and any weight in the family;
* :func:`analytic_orthonormalize` applies when every exponent m_k is an even
  positive integer.  Then w = |F|^2 with F analytic on the closed disk, and
  <f, g>_w is the Bergman inner product of fF and gF, which in Taylor
  coefficients is sum_j a_j conj(b_j) / (j + 1).  No quadrature is involved,
  and with ``dps`` set the arithmetic runs in gmpy2 at that many digits.

Both use the Arnoldi recurrence: z q_k is orthogonalized against q_0..q_k
and normalized to give q_{k+1}, while the monomial coefficients are carried
along.  This avoids the exponentially ill-conditioned moment matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import gmpy2
import numpy as np

from . import _mp
from .polynomial import PolynomialC, horner
from .quadrature import DiskRule
from .weightspec import OuterPart, WeightSpec, eval_weight


class QuadratureResolutionError(RuntimeError):
    """The discrete inner product cannot separate polynomials of the requested degree."""


@dataclass(frozen=True, eq=False)
class OrthoBasis:
    """Orthonormal polynomials p_0..p_N stored as a lower-triangular table.

    Row n of ``coeffs`` holds the ascending coefficients of p_n.  When the
    basis came from the multiprecision oracle, ``hp_coeffs`` keeps the same
    table as gmpy2 numbers and ``precision_bits`` their working precision.
    """

    coeffs: np.ndarray
    gammas: np.ndarray
    rule_fingerprint: str
    hp_coeffs: np.ndarray | None = field(default=None, repr=False)
    precision_bits: int | None = None

    @property
    def degree(self) -> int:
        return len(self.gammas) - 1

    @property
    def polys(self) -> list:
        return [self.poly(n) for n in range(self.degree + 1)]

    def poly(self, n: int) -> PolynomialC:
        self._check(n)
        return PolynomialC(self.coeffs[n, : n + 1])

    def _check(self, n):
        if not 0 <= n <= self.degree:
            raise IndexError(f"degree {n} outside basis range 0..{self.degree}")

    def values(self, z, nmax: int | None = None) -> np.ndarray:
        """Matrix [p_k(z_i)] for k = 0..nmax, via a Vandermonde product."""
        nmax = self.degree if nmax is None else nmax
        self._check(nmax)
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        powers = np.ones((len(z), nmax + 1), dtype=complex)
        for j in range(1, nmax + 1):
            powers[:, j] = powers[:, j - 1] * z
        return powers @ self.coeffs[: nmax + 1, : nmax + 1].T

    def eval_hp(self, n: int, z):
        """p_n(z) evaluated in multiprecision, returned as a gmpy2 number; requires ``hp_coeffs``."""
        self._check(n)
        if self.hp_coeffs is None:
            raise ValueError("basis has no multiprecision coefficients")
        with gmpy2.context(gmpy2.get_context(), precision=self.precision_bits):
            z = complex(z)
            zz = gmpy2.mpc(z.real, z.imag)
            return horner(list(self.hp_coeffs[n, : n + 1]), zz)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "gammas": [float(g) for g in self.gammas],
            "coeffs": [[[c.real, c.imag] for c in self.coeffs[n, : n + 1]] for n in range(self.degree + 1)],
            "rule_fingerprint": self.rule_fingerprint,
        }

    @classmethod
    def from_json(cls, data: dict) -> "OrthoBasis":
        N = int(data["degree"])
        coeffs = np.zeros((N + 1, N + 1), dtype=complex)
        for n, row in enumerate(data["coeffs"]):
            coeffs[n, : len(row)] = [complex(re, im) for re, im in row]
        return cls(coeffs, np.asarray(data["gammas"], dtype=float), data.get("rule_fingerprint", ""))


def _arnoldi(start, times_z, N):
    """Orthonormal Krylov basis of (start, z start, ...) in the plain 2-norm.

    Returns the (N+1, N+1) table of monomial coefficients.  Each step is
    classical Gram-Schmidt applied twice, which keeps orthogonality at the
    level of rounding for any N.
    """
    M = len(start)
    Q = np.empty((N + 1, M), dtype=complex)
    C = np.zeros((N + 1, N + 1), dtype=complex)
    nrm = np.linalg.norm(start)
    if not nrm > 0:
        raise QuadratureResolutionError("weight vanishes on every quadrature node")
    Q[0] = start / nrm
    C[0, 0] = 1 / nrm
    for k in range(N):
        t = times_z(Q[k])
        size = np.linalg.norm(t)
        h = np.zeros(k + 1, dtype=complex)
        for _ in range(2):
            proj = np.conj(np.conj(t) @ Q[: k + 1].T)
            t -= proj @ Q[: k + 1]
            h += proj
        nrm = np.linalg.norm(t)
        if not nrm > 1e-9 * size:
            raise QuadratureResolutionError(
                f"discrete Gram matrix numerically singular at degree {k + 1}; refine the rule"
            )
        Q[k + 1] = t / nrm
        row = np.zeros(N + 1, dtype=complex)
        row[1:] = C[k, :-1]
        row -= h @ C[: k + 1]
        C[k + 1] = row / nrm
        C[k + 1, k + 1] = C[k + 1, k + 1].real
    return C


def _finish(C, fingerprint, hp=None, bits=None):
    gammas = np.real(np.diag(C)).copy()
    C.setflags(write=False)
    gammas.setflags(write=False)
    return OrthoBasis(C, gammas, fingerprint, hp, bits)


def bergman_orthonormalize(spec: WeightSpec, N: int, rule: DiskRule) -> OrthoBasis:
    """Orthonormal p_0..p_N for the discrete inner product of ``rule``."""
    if N < 0:
        raise ValueError("degree must be nonnegative")
    if N > rule.resolvable_degree:
        raise QuadratureResolutionError(
            f"rule of orders ({rule.radial_order}, {rule.angular_order}) cannot resolve degree {N}"
        )
    mu = rule.weights * eval_weight(spec, rule.nodes)
    nodes = rule.nodes
    C = _arnoldi(np.sqrt(mu).astype(complex), lambda q: nodes * q, N)
    return _finish(C, rule.fingerprint())


# -- coefficient-space oracle ---------------------------------------------


def _series_length(spec: WeightSpec, digits: float) -> int:
    """A first guess for how many Taylor terms of F are above 10^-digits."""
    radii = [abs(x.a) for x in spec.singularities]
    outer = spec.outer
    if getattr(outer, "kind", "") == "power":
        radii += [abs(b) for b, r in outer.factors]
    extra = sum(int(r) for b, r in getattr(outer, "factors", ()) if float(r).is_integer() and r > 0)
    rho = max(radii, default=0.0)
    if rho == 0:
        return extra + 64 + int(digits)
    return extra + 64 + int(np.ceil(digits * np.log(10) / -np.log(rho)))


def analytic_factor_series(spec: WeightSpec, dps: int | None = None) -> np.ndarray:
    """Taylor coefficients of F (w = |F|^2) down to the working precision."""
    digits = (dps if dps is not None else 17) + 8
    L = _series_length(spec, digits)
    while True:
        F = spec.analytic_factor(L, dps)
        mags = np.array([abs(complex(x)) for x in F]) if dps is not None else np.abs(F)
        tol = mags.max() * 10.0 ** (-digits)
        if np.all(mags[-8:] <= tol):
            keep = np.flatnonzero(mags > tol)
            return F[: keep[-1] + 1]
        L *= 2
        if L > 1 << 16:
            raise QuadratureResolutionError("Taylor series of the weight factor decays too slowly")


def _arnoldi_mp(start, ratio, N, real):
    M = len(start)
    zero = start[0] * 0
    one = zero + 1
    conj = (lambda x: x) if real else _mp.conj
    Q = np.empty((N + 1, M), dtype=object)
    Qc = Q if real else np.empty((N + 1, M), dtype=object)
    C = np.empty((N + 1, N + 1), dtype=object)
    C[:] = zero
    nrm = gmpy2.sqrt(np.sum(_mp.abs2(start)))
    Q[0] = start / nrm
    if not real:
        Qc[0] = conj(Q[0])
    C[0, 0] = one / nrm
    for k in range(N):
        t = np.empty(M, dtype=object)
        t[0] = zero
        t[1:] = Q[k, :-1] * ratio[1:]
        h = Qc[: k + 1] @ t
        t = t - h @ Q[: k + 1]
        nrm = gmpy2.sqrt(np.sum(_mp.abs2(t)))
        Q[k + 1] = t / nrm
        if not real:
            Qc[k + 1] = conj(Q[k + 1])
        row = np.empty(N + 1, dtype=object)
        row[0] = zero
        row[1:] = C[k, :-1]
        row = row - h @ C[: k + 1]
        C[k + 1] = row / nrm
    return C


def analytic_orthonormalize(spec: WeightSpec, N: int, dps: int | None = None) -> OrthoBasis:
    """Orthonormal p_0..p_N computed exactly in Taylor-coefficient space.

    Requires every m_k to be an even positive integer.  With ``dps`` the
    computation runs in gmpy2 at roughly that many decimal digits; the
    result then carries ``hp_coeffs`` for evaluations where double precision
    would be swamped by cancellation (for example p_n at a point where it is
    exponentially small).
    """
    if N < 0:
        raise ValueError("degree must be nonnegative")
    if not spec.analytic_weight:
        raise ValueError("coefficient-space orthogonalization needs every m_k even and positive")
    tag = f"taylor:{json.dumps(spec.to_json(), sort_keys=True)}:dps={dps}"
    if dps is None:
        F = analytic_factor_series(spec)
        M = len(F) + N + 1
        start = np.zeros(M, dtype=complex)
        start[: len(F)] = F
        idx = np.arange(M)
        start /= np.sqrt(idx + 1)
        ratio = np.sqrt(idx / (idx + 1.0))

        def times_z(q):
            out = np.empty_like(q)
            out[0] = 0
            out[1:] = q[:-1] * ratio[1:]
            return out

        return _finish(_arnoldi(start, times_z, N), tag)

    work = dps + 20
    with _mp.precision(work) as ctx:
        F = analytic_factor_series(spec, work)
        real = spec.is_real
        M = len(F) + N + 1
        zero = gmpy2.mpfr(0) if real else gmpy2.mpc(0)
        start = np.empty(M, dtype=object)
        start[:] = zero
        start[: len(F)] = F
        sq = np.array([gmpy2.sqrt(gmpy2.mpfr(i + 1)) for i in range(M)], dtype=object)
        ratio = np.empty(M, dtype=object)
        ratio[0] = gmpy2.mpfr(0)
        ratio[1:] = sq[:-1] / sq[1:]
        start = start / sq
        C = _arnoldi_mp(start, ratio, N, real)
        bits = ctx.precision
    return _finish(_mp.to_complex(C), tag, C, bits)


# -- evaluation and checks --------------------------------------------------


def eval_poly(basis: OrthoBasis, n: int, z):
    """Horner evaluation of p_n."""
    return basis.poly(n)(z)


def gram_matrix(basis: OrthoBasis, spec: WeightSpec, rule: DiskRule, nmax: int | None = None) -> np.ndarray:
    """Discrete Gram matrix of p_0..p_nmax, evaluated afresh from coefficients."""
    V = basis.values(rule.nodes, nmax)
    mu = rule.weights * eval_weight(spec, rule.nodes)
    return (V.T * mu) @ np.conj(V)


def gram_residual(basis: OrthoBasis, spec: WeightSpec, rule: DiskRule, nmax: int | None = None) -> float:
    G = gram_matrix(basis, spec, rule, nmax)
    return float(np.max(np.abs(G - np.eye(len(G)))))


@dataclass(frozen=True)
class ExtremalityReport:
    n: int
    trials: int
    max_violation: float
    identity_residual: float
    monic_norm_sq: float
    expected_norm_sq: float


def monic_norm_extremality(spec, basis, n, rule, trials=100, seed=0, scale=1.0) -> ExtremalityReport:
    """Check that gamma_n^{-1} p_n minimizes the weighted norm among monic polynomials."""
    mu = rule.weights * eval_weight(spec, rule.nodes)
    z = rule.nodes

    def norm_sq(values):
        return float(np.sum(mu * np.abs(values) ** 2))

    monic = basis.poly(n) * (1 / basis.gammas[n])
    base_vals = monic(z)
    base = norm_sq(base_vals)
    rng = np.random.default_rng(seed)
    worst = 0.0
    resid = 0.0
    for _ in range(trials):
        noise = PolynomialC(scale * (rng.standard_normal(max(n, 1)) + 1j * rng.standard_normal(max(n, 1))) if n else [0])
        noise_vals = noise(z)
        total = norm_sq(base_vals + noise_vals)
        worst = max(worst, base - total)
        resid = max(resid, abs(total - (norm_sq(noise_vals) + base)) / max(total, 1e-300))
    return ExtremalityReport(n, trials, worst, resid, base, float(basis.gammas[n] ** -2))


def szego_monic(outer: OuterPart, N: int, circle_count: int):
    """Monic orthogonal polynomials on the unit circle for u = |v|^2.

    The discrete inner product is sum_l (2 pi / count) f(z_l) conj(g(z_l)) u(z_l)
    over equispaced z_l.  Returns ``(psi, psi_star)``, two lists of
    :class:`PolynomialC` with psi_star[n] = z^n conj(psi[n](1/conj(z))).
    """
    if circle_count < 2 * N + 2:
        raise QuadratureResolutionError("circle rule too coarse for the requested degree")
    z = np.exp(2j * np.pi * np.arange(circle_count) / circle_count)
    u = np.abs(outer.value(z)) ** 2
    mu = np.full(circle_count, 2 * np.pi / circle_count) * u
    C = _arnoldi(np.sqrt(mu).astype(complex), lambda q: z * q, N)
    psi = [PolynomialC(C[n, : n + 1] / C[n, n]) for n in range(N + 1)]
    return psi, [p.star(n) for n, p in enumerate(psi)]


def _circle_values_mp(outer: OuterPart, nodes, dps: int):
    """v at mp circle nodes by its Maclaurin series, lengthened until the tail is negligible."""
    K = 32
    while True:
        c = outer.maclaurin(K, dps)
        tail = max(abs(complex(x)) for x in c[-4:])
        head = max(abs(complex(x)) for x in c)
        if tail <= 10.0 ** (-dps - 4) * head or K >= 8192:
            break
        K *= 2
    return np.array([horner(c, z) for z in nodes], dtype=object)


def szego_monic_mp(outer: OuterPart, N: int, circle_count: int, dps: int = 60) -> list:
    """Multiprecision version of :func:`szego_monic`.

    Returns ascending monic coefficient vectors (object arrays of gmpy2
    values), one per degree.  Needed when psi_n(0) is so small that dividing
    by it amplifies double rounding beyond use.
    """
    if circle_count < 2 * N + 2:
        raise QuadratureResolutionError("circle rule too coarse for the requested degree")
    with _mp.precision(dps + 20):
        two_pi = 2 * gmpy2.const_pi()
        nodes = np.array([gmpy2.exp(gmpy2.mpc(0, two_pi * l / circle_count)) for l in range(circle_count)],
                         dtype=object)
        vals = _circle_values_mp(outer, nodes, dps + 20)
        start = np.array([gmpy2.sqrt(two_pi / circle_count) * abs(x) for x in vals], dtype=object)
        start = start + gmpy2.mpc(0)
        M = circle_count
        Q = np.empty((N + 1, M), dtype=object)
        Qc = np.empty((N + 1, M), dtype=object)
        C = np.full((N + 1, N + 1), gmpy2.mpc(0), dtype=object)
        nrm = gmpy2.sqrt(np.sum(_mp.abs2(start)))
        Q[0] = start / nrm
        Qc[0] = _mp.conj(Q[0])
        C[0, 0] = 1 / nrm
        for k in range(N):
            t = Q[k] * nodes
            row = np.empty(N + 1, dtype=object)
            row[0] = gmpy2.mpc(0)
            row[1:] = C[k, :-1]
            for _ in range(2):
                h = Qc[: k + 1] @ t
                t = t - h @ Q[: k + 1]
                row = row - h @ C[: k + 1]
            nrm = gmpy2.sqrt(np.sum(_mp.abs2(t)))
            Q[k + 1] = t / nrm
            Qc[k + 1] = _mp.conj(Q[k + 1])
            C[k + 1] = row / nrm
        return [C[n, : n + 1] / C[n, n] for n in range(N + 1)]
