"""Reproducing kernels and the rational kernel L(z, zeta) for s <= 2.

For the pure Blaschke-power weight h (v = 1) the kernel K_h(z, 1/conj(zeta))
equals zeta^2 L(z, zeta) with

    L = 1/(zeta - z)^2
        + sum_k (m_k/2)(1 - |a_k|^2) / ((zeta - z)(zeta - a_k)(1 - z conj(a_k)))
        + J / (q*(z) q(zeta)),

where J = 0 for s <= 1 and, for s = 2, J = K_h(0,0) - 1 - sum_k (m_k/2)(1 - |a_k|^2).
No closed form for J is available when s > 2, so such weights are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .orthosystem import OrthoBasis, analytic_orthonormalize, bergman_orthonormalize
from .quadrature import build_disk_rule, suggest_orders
from .weightspec import DomainError, WeightSpec, eval_q_qstar


class UnsupportedWeightError(ValueError):
    """The requested kernel is not available for this weight (s > 2)."""


class KernelConvergenceError(RuntimeError):
    """A kernel series did not reach the requested tolerance within its degree cap."""


@lru_cache(maxsize=32)
def blaschke_basis(spec: WeightSpec, N: int, radial_order: int | None = None, angular_order: int | None = None) -> OrthoBasis:
    """Orthonormal basis for the pure Blaschke weight h of ``spec`` (memoized)."""
    h = spec.pure_blaschke()
    if h.analytic_weight and radial_order is None and angular_order is None:
        return analytic_orthonormalize(h, N)
    rad, ang = suggest_orders(h, N)
    rule = build_disk_rule(h, radial_order or rad, angular_order or ang)
    return bergman_orthonormalize(h, N, rule)


def _geometric_tail(terms, floor: float = 0.0):
    """Tail estimate for a nonnegative series from its last few terms.

    Terms at or below ``floor`` are rounding noise and count as zero.
    """
    last = np.asarray(terms[-8:], dtype=float)
    last = np.where(last > floor, last, 0.0)
    if last.max() == 0:
        return 0.0
    ratios = [float(last[i + 1] / last[i]) for i in range(len(last) - 1) if last[i] > 0]
    ratio = max(ratios) if ratios else 1.0
    if ratio >= 1:
        return float("inf")
    return float(last[-1] * ratio / (1 - ratio))


@lru_cache(maxsize=32)
def kh_origin(spec: WeightSpec, tol: float = 1e-13, max_degree: int = 256,
              radial_order: int | None = None, angular_order: int | None = None) -> float:
    """K_h(0,0) = sum_k |p_k^h(0)|^2 summed until the geometric tail is below ``tol``."""
    N = 16
    while True:
        basis = blaschke_basis(spec, N, radial_order, angular_order)
        terms = np.abs(basis.coeffs[:, 0]) ** 2
        # squared double-precision coefficients carry noise near (eps * gamma_k)^2
        noise = (1e3 * np.finfo(float).eps) ** 2 * N * terms.max()
        tail = _geometric_tail(terms, noise)
        if tail < tol:
            return float(np.sum(terms) + tail)
        if N >= max_degree:
            raise KernelConvergenceError(f"K_h(0,0) series tail {tail:.3g} above tol {tol:.3g} at degree {N}")
        N = min(2 * N, max_degree)


@dataclass(frozen=True)
class KernelL:
    """The rational kernel L(z, zeta) of a weight with at most two singularities."""

    spec: WeightSpec
    J_constant: complex = 0j

    def __call__(self, z, zeta):
        spec = self.spec
        z = complex(z) if np.ndim(z) == 0 else np.asarray(z, dtype=complex)
        zeta_arr = np.asarray(zeta, dtype=complex)
        if np.any(zeta_arr == z):
            raise DomainError("L(z, zeta) has a pole at zeta = z")
        diff = zeta_arr - z
        out = 1 / diff**2
        for x in spec.singularities:
            if np.any(zeta_arr == x.a):
                raise DomainError(f"L(z, zeta) has a pole at zeta = {x.a}")
            out = out + (x.m / 2) * (1 - abs(x.a) ** 2) / (diff * (zeta_arr - x.a) * (1 - z * np.conj(x.a)))
        if self.J_constant != 0:
            q, _ = eval_q_qstar(spec, zeta_arr)
            _, qs = eval_q_qstar(spec, z)
            out = out + self.J_constant / (qs * q)
        return out.item() if np.ndim(out) == 0 else out


def j_constant(spec: WeightSpec, tol: float = 1e-13, **orders) -> float:
    """J for s = 2 (zero for s <= 1)."""
    if spec.s > 2:
        raise UnsupportedWeightError("the kernel constant J is only known for s <= 2")
    if spec.s < 2:
        return 0.0
    khat = kh_origin(spec, tol, **orders)
    return khat - 1 - sum((x.m / 2) * (1 - abs(x.a) ** 2) for x in spec.singularities)


def make_kernel(spec: WeightSpec, tol: float = 1e-13, **orders) -> KernelL:
    if spec.s > 2:
        raise UnsupportedWeightError(f"L(z, zeta) is not available for s = {spec.s} > 2")
    return KernelL(spec, complex(j_constant(spec, tol, **orders)))


def kernel_L(spec: WeightSpec, z, zeta, kernel: KernelL | None = None):
    """L(z, zeta); builds (and caches J for) the kernel when none is passed."""
    kernel = kernel if kernel is not None else make_kernel(spec)
    return kernel(z, zeta)


@dataclass(frozen=True)
class KernelValue:
    value: complex
    tail: float
    converged: bool


def kernel_Kw(spec: WeightSpec, z, zeta, basis: OrthoBasis, tol: float = 1e-10) -> KernelValue:
    """Truncated expansion sum_{k<=N} p_k(z) conj(p_k(zeta)) with a tail estimate."""
    if not (abs(z) < 1 and abs(zeta) < 1):
        raise DomainError("K_w is evaluated inside the unit disk only")
    vz = basis.values(z)[0]
    vzeta = basis.values(zeta)[0]
    terms = vz * np.conj(vzeta)
    tail = _geometric_tail(np.abs(terms))
    return KernelValue(complex(np.sum(terms)), tail, bool(tail < tol))


def kh_series(spec: WeightSpec, z, w, N: int = 64, **orders) -> complex:
    """K_h(z, w) from the orthonormal expansion of degree N (for cross-checks)."""
    basis = blaschke_basis(spec, N, orders.get("radial_order"), orders.get("angular_order"))
    vz = basis.values(z)
    vw = basis.values(w)
    out = np.sum(vz * np.conj(vw), axis=1)
    return out.item() if np.ndim(z) == 0 else out
