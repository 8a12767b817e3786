"""Laurent coefficients of v* at infinity and the Faber polynomials of z^n v*."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polynomial import PolynomialC
from .quadrature import DiskRule, integrate_disk
from .weightspec import WeightSpec, eval_weight

# Guard terms for series that do not terminate (power factors).
GUARD = 32


@dataclass(frozen=True, eq=False)
class LaurentCoeffs:
    """v*(z) = c_0 + c_1/z + ... + c_K/z^K + ...; ``c`` holds c_0..c_K."""

    c: np.ndarray

    @property
    def K(self) -> int:
        return len(self.c) - 1


def laurent_coeffs(spec: WeightSpec, K: int) -> LaurentCoeffs:
    """c_j = conj(d_j) where sum d_j w^j is the Maclaurin series of 1/v."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    d = spec.outer.reciprocal_maclaurin(K + 1 + GUARD)[: K + 1]
    c = np.conj(np.asarray(d, dtype=complex))
    c[0] = c[0].real
    c.setflags(write=False)
    return LaurentCoeffs(c)


def faber_poly(spec: WeightSpec, n: int, coeffs: LaurentCoeffs) -> PolynomialC:
    """Polynomial part of z^n v*(z): c_0 z^n + c_1 z^{n-1} + ... + c_n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if coeffs.K < n:
        raise ValueError(f"need Laurent coefficients up to index {n}, have {coeffs.K}")
    return PolynomialC(coeffs.c[: n + 1][::-1])


def faber_weighted_norm(spec: WeightSpec, n: int, rule: DiskRule, coeffs: LaurentCoeffs) -> float:
    """Squared weighted norm of F_n: the disk integral of |F_n|^2 w."""
    F = faber_poly(spec, n, coeffs)
    z = rule.nodes
    return float(np.real(integrate_disk(rule, np.abs(F(z)) ** 2 * eval_weight(spec, z))))
