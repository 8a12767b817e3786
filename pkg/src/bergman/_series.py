"""Truncated power-series arithmetic.

Every routine works on 1-D numpy arrays of either complex doubles or gmpy2
objects; recurrences are written so both element types go through the same
code path.
"""

import numpy as np

from . import _mp


def _zero_like(a):
    return a[0] * 0


def _zeros(n, like):
    out = np.empty(n, dtype=like.dtype)
    out[:] = _zero_like(like)
    return out


def pad(a, n):
    """First ``n`` coefficients of ``a``, zero-padded."""
    a = np.asarray(a)
    out = _zeros(n, a)
    k = min(n, len(a))
    out[:k] = a[:k]
    return out


def mul(a, b, n):
    """Coefficients 0..n-1 of the product of two series."""
    a = pad(a, n)
    b = pad(b, n)
    if a.dtype != object:
        return np.convolve(a, b)[:n]
    out = _zeros(n, a)
    for k in range(n):
        out[k] = np.dot(a[: k + 1], b[k::-1])
    return out


def reciprocal(a, n):
    """Coefficients of 1/a; requires a[0] != 0."""
    a = pad(a, n)
    out = _zeros(n, a)
    inv0 = 1 / a[0]
    out[0] = inv0
    for k in range(1, n):
        out[k] = -inv0 * np.dot(a[1 : k + 1], out[k - 1 :: -1])
    return out


def exp_series(g, n):
    """Coefficients of exp(g) via e' = g' e."""
    g = pad(g, n)
    out = _zeros(n, g)
    out[0] = _mp.exp(g[0])
    if n == 1:
        return out
    dg = g[1:] * np.arange(1, n)
    for k in range(1, n):
        out[k] = np.dot(dg[:k], out[k - 1 :: -1]) / k
    return out


def binomial(c, r, n):
    """Coefficients of (1 + c z)^r for real r (principal branch at z = 0).

    ``c`` may be a Python complex or a gmpy2 number; the result dtype follows.
    """
    out = np.empty(n, dtype=complex if isinstance(c, (complex, float, int)) else object)
    out[0] = c * 0 + 1
    for i in range(n - 1):
        out[i + 1] = out[i] * (r - i) * c / (i + 1)
    return out
