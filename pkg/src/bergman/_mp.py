"""Multiprecision plumbing on top of gmpy2.

Values live in numpy object arrays of ``gmpy2.mpc`` (or ``mpfr`` when every
input is real) so the same vectorised expressions work in both precisions.
"""

from contextlib import contextmanager

import gmpy2
import numpy as np


def bits_for_digits(dps):
    return int(dps * 3.3219280948873626) + 24


@contextmanager
def precision(dps):
    """Run a block with gmpy2 working precision of about ``dps`` digits."""
    with gmpy2.context(gmpy2.get_context(), precision=bits_for_digits(dps)) as ctx:
        yield ctx


def to_mp(values, real=False):
    """Convert complex doubles exactly into an object array of mpc/mpfr."""
    values = np.asarray(values)
    out = np.empty(values.shape, dtype=object)
    flat = out.reshape(-1)
    for i, x in enumerate(values.reshape(-1)):
        x = complex(x)
        flat[i] = gmpy2.mpfr(x.real) if real else gmpy2.mpc(x.real, x.imag)
    return out


def to_complex(values):
    values = np.asarray(values, dtype=object)
    out = np.empty(values.shape, dtype=complex)
    flat = out.reshape(-1)
    for i, x in enumerate(values.reshape(-1)):
        flat[i] = complex(x)
    return out


def is_mp(values):
    return isinstance(values, np.ndarray) and values.dtype == object


_conj = np.frompyfunc(lambda x: x.conjugate() if isinstance(x, gmpy2.mpc) else x, 1, 1)
_abs2 = np.frompyfunc(lambda x: gmpy2.norm(x) if isinstance(x, gmpy2.mpc) else x * x, 1, 1)


def conj(values):
    if is_mp(values):
        return _conj(values)
    return np.conj(values)


def abs2(values):
    if is_mp(values):
        return _abs2(values)
    return np.abs(values) ** 2


def sqrt(x):
    if isinstance(x, (gmpy2.mpfr, gmpy2.mpc)):
        return gmpy2.sqrt(x)
    return np.sqrt(x)


def exp(x):
    if isinstance(x, (gmpy2.mpfr, gmpy2.mpc)):
        return gmpy2.exp(x)
    return np.exp(x)
