"""Weights of the form w = |v|^2 * prod |(z - a_k) / (1 - conj(a_k) z)|^{m_k}.

The outer factor ``v`` is analytic and zero-free on the closed disk and comes
in three closed-form families, which is enough to get v*, its singular radius
and any number of Taylor coefficients without general analytic continuation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import gmpy2
import numpy as np

from . import _mp, _series


class DomainError(ValueError):
    """A point lies outside the region where the requested function is defined."""


class SingularPointError(DomainError):
    """Evaluation exactly at a singularity of the weight."""


def _as_points(z):
    return np.asarray(z, dtype=complex)


def _scalar_or_array(value, like):
    if np.ndim(like) == 0:
        return value.item() if isinstance(value, np.ndarray) else value
    return value


@dataclass(frozen=True)
class BlaschkeSingularity:
    a: complex
    m: float

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "m", float(self.m))
        if not abs(self.a) < 1:
            raise ValueError(f"singularity location {self.a} must satisfy |a| < 1")
        if not (self.m > -2 and self.m != 0):
            raise ValueError(f"exponent m={self.m} must satisfy m > -2, m != 0")

    @property
    def is_even_positive(self) -> bool:
        """True when |(z-a)/(1-conj(a)z)|^m is |analytic|^2 (m = 2, 4, ...)."""
        return self.m > 0 and self.m % 2 == 0


class OuterPart:
    """Analytic, zero-free factor v of the weight.

    Subclasses provide ``value``, ``vstar``, ``rho_v`` and Taylor coefficients.
    ``scale`` multiplies v and is the knob that keeps v(0) > 0.
    """

    kind = "abstract"
    scale: float

    def value(self, z):
        raise NotImplementedError

    def vstar(self, z):
        raise NotImplementedError

    @property
    def rho_v(self) -> float:
        raise NotImplementedError

    def maclaurin(self, K, dps=None):
        """Taylor coefficients v_0..v_{K-1}; gmpy2 objects when ``dps`` is given."""
        raise NotImplementedError

    def reciprocal_maclaurin(self, K, dps=None):
        """Taylor coefficients of 1/v."""
        raise NotImplementedError

    def v0(self) -> float:
        return float(np.real(self.value(0.0)))

    def singular_orders(self):
        """Points of the punctured plane where v* fails to be analytic or vanishes.

        Returns a list of ``(point, order, branch)``: ``order`` is the pole
        (negative) or zero (positive) order when ``branch`` is False.
        """
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @property
    def is_real(self) -> bool:
        """Taylor coefficients of v are all real."""
        raise NotImplementedError


def _check_b(b):
    b = complex(b)
    if not 0 < abs(b) < 1:
        raise ValueError(f"factor location {b} must satisfy 0 < |b| < 1")
    return b


class _ProductOuter(OuterPart):
    """Shared code for v = scale * prod (1 - conj(b) z)^r."""

    def __init__(self, factors=(), scale=1.0):
        self.factors = tuple((_check_b(b), self._check_r(r)) for b, r in factors)
        if not scale > 0:
            raise ValueError("scale must be positive")
        self.scale = float(scale)

    @staticmethod
    def _check_r(r):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and (self.factors, self.scale) == (other.factors, other.scale)

    def __hash__(self):
        return hash((type(self).__name__, self.factors, self.scale))

    def __repr__(self):
        return f"{type(self).__name__}(factors={list(self.factors)!r}, scale={self.scale!r})"

    @property
    def is_real(self) -> bool:
        return all(b.imag == 0 for b, _ in self.factors)

    @property
    def rho_v(self) -> float:
        return max((abs(b) for b, _ in self.factors), default=0.0)

    def _factor_power(self, base, r):
        return base**r

    def value(self, z):
        zz = _as_points(z)
        out = np.full(zz.shape, self.scale, dtype=complex)
        for b, r in self.factors:
            out = out * self._factor_power(1 - np.conj(b) * zz, r)
        return _scalar_or_array(out, z)

    def vstar(self, z):
        zz = _as_points(z)
        if np.any(np.abs(zz) <= self.rho_v) or np.any(zz == 0):
            raise DomainError(f"v* is only defined for |z| > {self.rho_v}")
        out = np.full(zz.shape, 1.0 / self.scale, dtype=complex)
        for b, r in self.factors:
            out = out * self._factor_power(1 - b / zz, -r)
        return _scalar_or_array(out, z)

    def _series(self, K, dps, sign):
        if dps is None:
            out = np.zeros(K, dtype=complex)
            out[0] = self.scale**sign
            for b, r in self.factors:
                out = _series.mul(out, _series.binomial(-np.conj(b), sign * r, K), K)
            return out
        with _mp.precision(dps):
            real = self.is_real
            out = _mp.to_mp(np.zeros(K), real=real)
            out[0] = gmpy2.mpfr(self.scale) ** sign
            for b, r in self.factors:
                c = -gmpy2.mpfr(b.real) if real else -gmpy2.mpc(b.real, -b.imag)
                out = _series.mul(out, _series.binomial(c, sign * gmpy2.mpfr(r), K), K)
            return out

    def maclaurin(self, K, dps=None):
        return self._series(K, dps, 1)

    def reciprocal_maclaurin(self, K, dps=None):
        return self._series(K, dps, -1)

    def singular_orders(self):
        # v*(z) = prod (z / (z - b))^r / scale
        out = []
        for b, r in self.factors:
            integral = float(r).is_integer()
            out.append((b, -int(r) if integral else 0, not integral))
            if not integral:
                out.append((0j, 0, True))
        return out

    def to_json(self):
        return {
            "kind": self.kind,
            "factors": [[b.real, b.imag, r] for b, r in self.factors],
            "scale": self.scale,
        }


class PolyZerosOutside(_ProductOuter):
    """v = scale * prod (1 - conj(b) z)^r with positive integer r: a polynomial."""

    kind = "poly"

    @staticmethod
    def _check_r(r):
        if float(r) != int(r) or int(r) <= 0:
            raise ValueError(f"polynomial factor exponent must be a positive integer, got {r}")
        return int(r)


class PowerProduct(_ProductOuter):
    """v = scale * prod (1 - conj(b) z)^r, real r != 0, principal branches.

    The principal branch of each factor is the continuation along rays from
    0, which is analytic on |z| < 1/|b|; outside that disk values are refused.
    """

    kind = "power"

    @staticmethod
    def _check_r(r):
        r = float(r)
        if r == 0 or not math.isfinite(r):
            raise ValueError("power factor exponent must be finite and nonzero")
        return r

    def value(self, z):
        zz = _as_points(z)
        for b, r in self.factors:
            if not float(r).is_integer() and np.any(np.abs(zz) * abs(b) >= 1):
                raise DomainError(f"z outside the principal disk |z| < {1 / abs(b)} of a branch factor")
        return super().value(z)

    def _factor_power(self, base, r):
        if float(r).is_integer():
            return base ** int(r)
        return np.exp(r * np.log(base))


class ExpPolynomial(OuterPart):
    """v = scale * exp(g(z)) for a polynomial g with real constant term."""

    kind = "exp"

    def __init__(self, coeffs=(0.0,), scale=1.0):
        coeffs = tuple(complex(c) for c in coeffs) or (0j,)
        if coeffs[0].imag != 0:
            raise ValueError("g(0) must be real so that v(0) > 0")
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not scale > 0:
            raise ValueError("scale must be positive")
        self.coeffs = coeffs
        self.scale = float(scale)

    def __eq__(self, other):
        return type(self) is type(other) and (self.coeffs, self.scale) == (other.coeffs, other.scale)

    def __hash__(self):
        return hash(("exp", self.coeffs, self.scale))

    def __repr__(self):
        return f"ExpPolynomial(coeffs={list(self.coeffs)!r}, scale={self.scale!r})"

    @property
    def rho_v(self) -> float:
        return 0.0

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self.coeffs)

    def value(self, z):
        zz = _as_points(z)
        g = np.polyval(self.coeffs[::-1], zz)
        return _scalar_or_array(self.scale * np.exp(g), z)

    def vstar(self, z):
        zz = _as_points(z)
        if np.any(zz == 0) and len(self.coeffs) > 1:
            raise DomainError("v* has an essential singularity at 0")
        gbar = np.polyval(np.conj(self.coeffs[::-1]), 1 / np.where(zz == 0, 1, zz))
        return _scalar_or_array(np.exp(-gbar) / self.scale, z)

    def _series(self, K, dps, sign):
        if dps is None:
            g = np.zeros(K, dtype=complex)
            g[: min(K, len(self.coeffs))] = self.coeffs[:K]
            g[0] += math.log(self.scale)
            return _series.exp_series(sign * g, K)
        with _mp.precision(dps):
            real = self.is_real
            g = _mp.to_mp(np.zeros(K), real=real)
            for i, c in enumerate(self.coeffs[:K]):
                g[i] = gmpy2.mpfr(c.real) if real else gmpy2.mpc(c.real, c.imag)
            g[0] += gmpy2.log(gmpy2.mpfr(self.scale))
            return _series.exp_series(g * sign, K)

    def maclaurin(self, K, dps=None):
        return self._series(K, dps, 1)

    def reciprocal_maclaurin(self, K, dps=None):
        return self._series(K, dps, -1)

    def singular_orders(self):
        return [(0j, 0, True)] if len(self.coeffs) > 1 else []

    def to_json(self):
        return {"kind": "exp", "coeffs": [[c.real, c.imag] for c in self.coeffs], "scale": self.scale}


def unit_outer() -> OuterPart:
    return PolyZerosOutside(())


@dataclass(frozen=True)
class CriticalRadii:
    rho_w: float
    rho_v: float
    rho_a: float
    c0: float
    m_total: float
    rho_w_sharp: float = field(default=0.0)


@dataclass(frozen=True)
class WeightSpec:
    outer: OuterPart = field(default_factory=unit_outer)
    singularities: tuple = ()

    def __post_init__(self):
        if self.outer is None:
            object.__setattr__(self, "outer", unit_outer())
        sing = tuple(
            s if isinstance(s, BlaschkeSingularity) else BlaschkeSingularity(*s) for s in self.singularities
        )
        locs = [s.a for s in sing]
        if len(set(locs)) != len(locs):
            raise ValueError("singularity locations must be pairwise distinct")
        object.__setattr__(self, "singularities", sing)
        v0 = self.outer.value(0.0)
        if not (abs(np.imag(v0)) <= 1e-15 * abs(v0) and np.real(v0) > 0):
            raise ValueError("the outer factor must satisfy v(0) > 0")

    @property
    def s(self) -> int:
        return len(self.singularities)

    @property
    def a(self) -> np.ndarray:
        return np.array([x.a for x in self.singularities], dtype=complex)

    @property
    def m(self) -> np.ndarray:
        return np.array([x.m for x in self.singularities], dtype=float)

    @property
    def analytic_weight(self) -> bool:
        """w = |F|^2 with F analytic on the closed disk (every m_k even positive)."""
        return all(x.is_even_positive for x in self.singularities)

    def pure_blaschke(self) -> "WeightSpec":
        """The weight h obtained by dropping the outer factor (v = 1)."""
        return WeightSpec(unit_outer(), self.singularities)

    def analytic_factor(self, K, dps=None):
        """Taylor coefficients of F = v * prod ((z-a)/(1-conj(a)z))^{m/2}.

        Only defined when :attr:`analytic_weight` holds, in which case
        w = |F|^2 on the disk.
        """
        if not self.analytic_weight:
            raise ValueError("analytic factor requires every exponent m_k to be an even positive integer")
        if dps is None:
            out = self.outer.maclaurin(K)
            for sing in self.singularities:
                num = np.array([-sing.a, 1.0], dtype=complex)
                den = _series.binomial(-np.conj(sing.a), -1.0, K)
                for _ in range(int(sing.m) // 2):
                    out = _series.mul(_series.mul(out, num, K), den, K)
            return out
        with _mp.precision(dps):
            real = self.is_real
            out = self.outer.maclaurin(K, dps)
            if not real:
                out = np.array([gmpy2.mpc(x) for x in out], dtype=object)
            for sing in self.singularities:
                am = gmpy2.mpfr(sing.a.real) if real else gmpy2.mpc(sing.a.real, sing.a.imag)
                num = np.array([-am, am * 0 + 1], dtype=object)
                den = _series.binomial(-am.conjugate() if not real else -am, gmpy2.mpfr(-1), K)
                for _ in range(int(sing.m) // 2):
                    out = _series.mul(_series.mul(out, num, K), den, K)
            return out

    @property
    def is_real(self) -> bool:
        """Weight symmetric under conjugation: every coefficient real."""
        return self.outer.is_real and all(x.a.imag == 0 for x in self.singularities)

    def singular_sites(self):
        """Locations where the weight is not smooth: (a_k, m_k) with m_k not even positive."""
        return [(x.a, x.m) for x in self.singularities if not x.is_even_positive]

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "outer": self.outer.to_json(),
            "singularities": [[x.a.real, x.a.imag, x.m] for x in self.singularities],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeightSpec":
        return parse_weight(data)


def parse_weight(data) -> WeightSpec:
    """Build a WeightSpec from the JSON schema used by configs.

    ``{"outer": {"kind": "poly"|"power"|"exp", "factors"|"coeffs": ..., "scale": 1.0},
    "singularities": [[re, im, m], ...]}``.  A missing ``outer`` means v = 1.
    """
    if not isinstance(data, dict):
        raise ValueError("weight config must be a JSON object")
    outer = data.get("outer") or {"kind": "poly", "factors": []}
    kind = outer.get("kind")
    scale = float(outer.get("scale", 1.0))
    if kind in ("poly", "power"):
        factors = [(complex(f[0], f[1]), f[2]) for f in outer.get("factors", [])]
        cls = PolyZerosOutside if kind == "poly" else PowerProduct
        part = cls(factors, scale=scale)
    elif kind == "exp":
        part = ExpPolynomial([complex(c[0], c[1]) for c in outer.get("coeffs", [[0, 0]])], scale=scale)
    else:
        raise ValueError(f"unknown outer kind {kind!r}")
    sing = [BlaschkeSingularity(complex(x[0], x[1]), x[2]) for x in data.get("singularities", [])]
    return WeightSpec(part, tuple(sing))


def load_weight(path) -> WeightSpec:
    with open(Path(path)) as fh:
        data = json.load(fh)
    return parse_weight(data.get("weight", data))


# -- evaluation -------------------------------------------------------------


def _sharp_rho_w(spec: WeightSpec) -> float:
    """Radius of the largest singularity of v*/q, allowing cancellations."""
    orders = {}
    branch = set()
    for p, order, is_branch in spec.outer.singular_orders():
        if is_branch:
            branch.add(p)
        else:
            orders[p] = orders.get(p, 0) + order
    for x in spec.singularities:
        orders[x.a] = orders.get(x.a, 0) - 1
    bad = [abs(p) for p, k in orders.items() if k < 0] + [abs(p) for p in branch]
    return max(bad, default=0.0)


def critical_radii(spec: WeightSpec) -> CriticalRadii:
    rho_v = float(spec.outer.rho_v)
    rho_a = float(max((abs(x.a) for x in spec.singularities), default=0.0))
    return CriticalRadii(
        rho_w=max(rho_v, rho_a),
        rho_v=rho_v,
        rho_a=rho_a,
        c0=1.0 / spec.outer.v0(),
        m_total=float(sum(x.m for x in spec.singularities)),
        rho_w_sharp=_sharp_rho_w(spec),
    )


def eval_outer(spec: WeightSpec, z):
    return spec.outer.value(z)


def eval_vstar(spec: WeightSpec, z):
    return spec.outer.vstar(z)


def eval_q_qstar(spec: WeightSpec, z):
    zz = _as_points(z)
    q = np.ones(zz.shape, dtype=complex)
    qs = np.ones(zz.shape, dtype=complex)
    for x in spec.singularities:
        q = q * (zz - x.a)
        qs = qs * (1 - np.conj(x.a) * zz)
    return _scalar_or_array(q, z), _scalar_or_array(qs, z)


def blaschke_modulus(spec: WeightSpec, z):
    """prod |(z-a_k)/(1-conj(a_k) z)|^{m_k}; raises at a_k with m_k < 0."""
    zz = _as_points(z)
    out = np.ones(zz.shape, dtype=float)
    for x in spec.singularities:
        ratio = np.abs(zz - x.a) / np.abs(1 - np.conj(x.a) * zz)
        if x.m < 0 and np.any(ratio == 0):
            raise SingularPointError(f"weight is infinite at a={x.a} (m={x.m})")
        out = out * ratio**x.m
    return _scalar_or_array(out, z)


def eval_weight(spec: WeightSpec, z):
    zz = _as_points(z)
    out = np.abs(spec.outer.value(zz)) ** 2 * blaschke_modulus(spec, zz)
    return _scalar_or_array(out, z)
