"""Contour-integral representation of p_n and the alpha / h-g machinery.

alpha_{n,k} pairs conj(p_k) with z^n v in the Hardy inner product on the unit
circle.  Given Taylor coefficients v_i of v this is the finite sum

    alpha_{n,k} = sum_j conj(p_{k,j}) v_{j-n},

and it vanishes for k < n.  The h/g recursion turns the upper-triangular
table into the coefficients of H_n, and

    v(0) gamma_n p_n(z) = 1/(2 pi i v(z)) * contour integral over |zeta| = r of
                          (v v*)(zeta) L(z, zeta) zeta^{n+1} (1 + H_n(zeta)) d zeta.

Q_n denotes the same integral with H_n dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .faber import LaurentCoeffs
from .kernel import KernelL, _geometric_tail, make_kernel
from .orthosystem import OrthoBasis
from .polynomial import horner
from .quadrature import CircleRule, integrate_circle
from .weightspec import DomainError, WeightSpec, critical_radii


class AlphaCrossCheckError(RuntimeError):
    """The two independent computations of alpha_{n,k} disagree."""


class RecursionCorruptionError(RuntimeError):
    """A diagonal alpha_{k,k} is numerically zero."""


@dataclass(frozen=True, eq=False)
class AlphaTable:
    """alpha_{i,k} for n <= i <= K and i <= k <= K.

    ``block[i - n, k - n]`` holds alpha_{i,k}; entries with k < i are the
    computed (not assumed) values and should be at rounding level.
    """

    n: int
    K: int
    block: np.ndarray
    cross_check: float = 0.0
    lower_max: float = 0.0

    def __call__(self, i: int, k: int) -> complex:
        if not (self.n <= i <= self.K and self.n <= k <= self.K):
            raise IndexError(f"alpha_({i},{k}) outside the stored range {self.n}..{self.K}")
        return complex(self.block[i - self.n, k - self.n])

    @property
    def alpha(self) -> dict:
        """Row n as a map k -> alpha_{n,k}, k = n..K."""
        return {k: complex(self.block[0, k - self.n]) for k in range(self.n, self.K + 1)}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "K": self.K,
            "alpha": [[a.real, a.imag] for a in self.block[0]],
            "cross_check": self.cross_check,
        }


def _alpha_matrix(spec: WeightSpec, basis: OrthoBasis, K: int) -> np.ndarray:
    """Full (K+1) x (K+1) matrix A[i, k] = alpha_{i,k} by convolution."""
    v = np.asarray(spec.outer.maclaurin(K + 1), dtype=complex)
    P = np.conj(basis.coeffs[: K + 1, : K + 1])
    j = np.arange(K + 1)
    diff = j[:, None] - j[None, :]
    T = np.where(diff >= 0, v[np.clip(diff, 0, K)], 0)
    return (P @ T).T


def _alpha_circle(spec: WeightSpec, basis: OrthoBasis, K: int, eta: float, count: int) -> np.ndarray:
    """alpha_{i,k} from the circle quadrature of zeta^{-i} p_k(zeta) / v*(zeta)."""
    rule = CircleRule(eta, count)
    zeta = rule.nodes
    inv_vstar = np.conj(spec.outer.value(1 / np.conj(zeta)))
    V = basis.values(zeta, K)
    out = np.empty((K + 1, K + 1), dtype=complex)
    weighted = V * inv_vstar[:, None]
    for i in range(K + 1):
        out[i] = np.conj(np.sum(zeta[:, None] ** (-i) * weighted, axis=0) / count)
    return out


def alpha_table(
    spec: WeightSpec,
    basis: OrthoBasis,
    n: int,
    K: int,
    coeffs: LaurentCoeffs | None = None,
    eta: float | None = None,
    tol: float = 1e-8,
    circle_count: int | None = None,
) -> AlphaTable:
    """alpha_{i,k} for n <= i, k <= K, with an independent circle cross-check.

    The cross-check evaluates on |zeta| = eta, which must exceed rho_v; the
    default is 1.  A relative disagreement above ``tol`` raises.
    """
    if not 0 <= n <= K <= basis.degree:
        raise IndexError(f"need 0 <= n <= K <= {basis.degree}")
    radii = critical_radii(spec)
    eta = 1.0 if eta is None else float(eta)
    if not eta > radii.rho_v:
        raise DomainError(f"cross-check radius {eta} must exceed rho_v = {radii.rho_v}")
    A = _alpha_matrix(spec, basis, K)
    count = circle_count or 2 * (2 * K + 64)
    B = _alpha_circle(spec, basis, K, eta, count)
    scale = max(1.0, float(np.max(np.abs(A))))
    check = float(np.max(np.abs(A[n:, n:] - B[n:, n:]))) / scale
    if check > tol:
        raise AlphaCrossCheckError(f"alpha cross-check disagreement {check:.3g} exceeds {tol:.3g}")
    if coeffs is not None:
        diag = np.abs(np.diag(A)[n:] * coeffs.c[0] / basis.gammas[n : K + 1] - 1)
        if np.max(diag) > tol:
            raise AlphaCrossCheckError(f"alpha_kk c0 / gamma_k deviates by {np.max(diag):.3g}")
    block = A[n:, n:].copy()
    lower = np.tril(block, -1)
    block.setflags(write=False)
    return AlphaTable(n, K, block, check, float(np.max(np.abs(lower), initial=0.0)))


@dataclass(frozen=True, eq=False)
class HSeries:
    """Coefficients h(n,0..J) of 1 + H_n, with h(n,0) = 1."""

    n: int
    h: np.ndarray

    @property
    def J(self) -> int:
        return len(self.h) - 1


def hg_recursion(alpha: AlphaTable, Jmax: int) -> HSeries:
    """h(n, 0..Jmax) from the alpha table by the h/g recursion."""
    n = alpha.n
    if alpha.K < n + Jmax:
        raise IndexError(f"alpha table reaches K={alpha.K}, recursion needs {n + Jmax}")
    A = alpha.block
    diag = np.abs(np.diag(A))
    if np.any(diag[: Jmax + 1] < 1e-12 * diag.max()):
        raise RecursionCorruptionError("a diagonal alpha_{k,k} is numerically zero")
    h = np.zeros(Jmax + 1, dtype=complex)
    h[0] = 1
    g = -A[0].copy()
    for m in range(Jmax):
        idx = m + 1
        h[idx] = g[idx] / A[idx, idx]
        g = g - h[idx] * A[idx]
    h.setflags(write=False)
    return HSeries(n, h)


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail: float
    certified: bool


def eval_Hn(hs: HSeries, z) -> SeriesValue:
    """H_n(z) = sum_{j>=1} h(n,j) z^j, with a geometric tail estimate."""
    if not abs(z) < 1:
        raise DomainError("H_n is evaluated inside the unit disk")
    coeffs = np.array(hs.h, dtype=complex)
    coeffs[0] = 0
    value = complex(horner(coeffs, complex(z)))
    terms = np.abs(coeffs[1:]) * abs(z) ** np.arange(1, len(coeffs))
    tail = _geometric_tail(terms) if len(terms) >= 2 else 0.0
    return SeriesValue(value, tail, bool(np.isfinite(tail)))


def circle_count_for(n: int, r: float, z, rho: float = 0.0) -> int:
    """Node count: at least 8(n+16), more when z sits close to the circle."""
    inner = max(abs(complex(z)), rho)
    count = 8 * (n + 16)
    if inner > 0:
        count = max(count, int(math.ceil(40.0 / math.log(r / inner))) + 2 * n)
    return count + count % 2


def _contour(spec, n, r, z, kernel, h_coeffs, count):
    radii = critical_radii(spec)
    if not radii.rho_w < r < 1:
        raise DomainError(f"radius {r} must lie in (rho_w, 1) = ({radii.rho_w}, 1)")
    if not abs(z) < r:
        raise DomainError(f"|z| = {abs(z)} must be below the radius {r}")
    kernel = kernel if kernel is not None else make_kernel(spec)
    count = count or circle_count_for(n, r, z, radii.rho_w)
    count += count % 2
    rule = CircleRule(r, count)
    poles = [complex(z)] + [x.a for x in spec.singularities]
    if min(np.min(np.abs(rule.nodes - p)) for p in poles) < 1e-8 * r:
        rule = CircleRule(r, count, np.pi / count)
    outer = spec.outer

    def integrand(zeta):
        f = outer.value(zeta) * outer.vstar(zeta) * kernel(z, zeta) * zeta ** (n + 1)
        if h_coeffs is not None:
            f = f * horner(h_coeffs, zeta)
        return f

    return integrate_circle(rule, integrand) / outer.value(complex(z))


def Qn_eval(spec: WeightSpec, n: int, r: float, z, kernel: KernelL | None = None, count: int | None = None) -> complex:
    """Q_n(z): the representation integral without the H_n factor."""
    return _contour(spec, n, r, z, kernel, None, count)


def theorem1_eval(spec: WeightSpec, n: int, r: float, z, hs: HSeries | None = None,
                  kernel: KernelL | None = None, count: int | None = None) -> complex:
    """Right-hand side of the representation; approximates v(0) gamma_n p_n(z).

    Without ``hs`` this is Q_n(z), the H_n = 0 truncation.
    """
    h = None if hs is None else np.asarray(hs.h, dtype=complex)
    if hs is not None and hs.n != n:
        raise ValueError(f"H-series belongs to n={hs.n}, not {n}")
    return _contour(spec, n, r, z, kernel, h, count)
