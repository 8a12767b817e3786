"""Dense polynomials with complex coefficients."""

from __future__ import annotations

import numpy as np


def horner(coeffs, z):
    """Evaluate sum coeffs[j] z^j; works for complex arrays and gmpy2 objects."""
    if isinstance(z, np.ndarray):
        out = np.zeros(z.shape, dtype=np.result_type(z.dtype, np.asarray(coeffs).dtype))
    else:
        out = coeffs[-1] * 0
    for c in coeffs[::-1]:
        out = out * z + c
    return out


class PolynomialC:
    """Polynomial with ascending complex coefficients; trailing zeros trimmed.

    >>> p = PolynomialC([1, 0, 2])
    >>> p(2.0)
    (9+0j)
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).ravel()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        self.coeffs = c

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if np.any(self.coeffs) else 0

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        if np.ndim(z) == 0:
            return complex(horner(self.coeffs, complex(z)))
        return horner(self.coeffs, np.asarray(z, dtype=complex))

    def __repr__(self):
        return f"PolynomialC({self.coeffs.tolist()!r})"

    def __eq__(self, other):
        return isinstance(other, PolynomialC) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def derivative(self) -> "PolynomialC":
        if len(self.coeffs) == 1:
            return PolynomialC([0])
        return PolynomialC(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def star(self, n: int | None = None) -> "PolynomialC":
        """Reversed polynomial z^n conj(p(1/conj(z))), n defaulting to the degree."""
        n = self.degree if n is None else n
        if n < self.degree:
            raise ValueError("reversal order below the degree")
        padded = np.zeros(n + 1, dtype=complex)
        padded[: len(self.coeffs)] = self.coeffs
        return PolynomialC(np.conj(padded[::-1]))

    def monic(self) -> "PolynomialC":
        return PolynomialC(self.coeffs / self.coeffs[-1])

    def __add__(self, other):
        other = other if isinstance(other, PolynomialC) else PolynomialC([other])
        n = max(len(self.coeffs), len(other.coeffs))
        out = np.zeros(n, dtype=complex)
        out[: len(self.coeffs)] += self.coeffs
        out[: len(other.coeffs)] += other.coeffs
        return PolynomialC(out)

    def __sub__(self, other):
        other = other if isinstance(other, PolynomialC) else PolynomialC([other])
        return self + PolynomialC(-other.coeffs)

    def __mul__(self, other):
        if isinstance(other, PolynomialC):
            return PolynomialC(np.convolve(self.coeffs, other.coeffs))
        return PolynomialC(self.coeffs * complex(other))

    __rmul__ = __mul__

    def roots(self) -> np.ndarray:
        """Zeros via the eigenvalues of the companion matrix."""
        c = self.coeffs
        if len(c) <= 1:
            return np.zeros(0, dtype=complex)
        comp = np.zeros((len(c) - 1, len(c) - 1), dtype=complex)
        comp[1:, :-1] = np.eye(len(c) - 2)
        comp[:, -1] = -c[:-1] / c[-1]
        return np.linalg.eigvals(comp)
