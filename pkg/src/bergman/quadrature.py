"""Area quadrature on the unit disk and trapezoid rules on circles.

Disk rules are built in polar coordinates centred at the points where the
weight has an algebraic singularity |z - a|^m.  With one such point (or
none, in which case the centre is the origin) a single polar patch covers
the whole disk: the ray from the centre in direction phi leaves the disk at
a distance R(phi) that is analytic and periodic in phi, so the trapezoid rule
in phi converges geometrically, and a Gauss-Jacobi rule with exponent m + 1
integrates the radial factor rho^{m+1} exactly.  With several singular
points, the disk is split into the Voronoi cells of those points; each cell
is star-shaped with respect to its own centre, so the same polar scheme
applies cell by cell, with Gauss-Legendre in phi between the corners of the
cell boundary.  The cells tile the disk, so there is no overlap and no gap.

Weights refer to the normalized area measure d(sigma) = dA / pi.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.special import beta as beta_fn
from scipy.special import gammaln, roots_jacobi

from .weightspec import WeightSpec

DEFAULT_RADIAL = 96
DEFAULT_ANGULAR = 256


def _jacobi_value(n, a, b, x):
    """P_n^{(a,b)}(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    if n == 0:
        return p0
    p1 = 0.5 * (a - b + (a + b + 2) * x)
    for k in range(2, n + 1):
        c = 2 * k + a + b
        a1 = 2 * k * (k + a + b) * (c - 2)
        a2 = (c - 1) * (a * a - b * b)
        a3 = (c - 2) * (c - 1) * c
        a4 = 2 * (k + a - 1) * (k + b - 1) * c
        p0, p1 = p1, ((a2 + a3 * x) * p1 - a4 * p0) / a1
    return p1


@lru_cache(maxsize=64)
def gauss_jacobi01(n: int, beta: float):
    """Nodes and weights for int_0^1 t^beta g(t) dt, exact for deg g <= 2n - 1.

    scipy's nodes are polished by Newton steps on the recurrence, the weights
    recomputed from the closed form and rescaled to the exact total mass;
    for n in the hundreds this gains two or three digits over the raw rule.
    """
    a, b = 0.0, float(beta)
    x, _ = roots_jacobi(n, a, b)
    scale = 0.5 * (n + a + b + 1)
    for _ in range(3):
        dp = scale * _jacobi_value(n - 1, a + 1, b + 1, x)
        x = x - _jacobi_value(n, a, b, x) / dp
    dp = scale * _jacobi_value(n - 1, a + 1, b + 1, x)
    logc = (a + b + 1) * math.log(2) + gammaln(n + a + 1) + gammaln(n + b + 1)
    logc -= gammaln(n + a + b + 1) + gammaln(n + 1)
    w = np.exp(logc) / ((1 - x) * (1 + x) * dp * dp)
    w *= beta_fn(1.0, b + 1) / np.sum(w) * 2 ** (b + 1)
    t = (1 + x) / 2
    wt = w / 2 ** (b + 1)
    t.setflags(write=False)
    wt.setflags(write=False)
    return t, wt


@dataclass(frozen=True, eq=False)
class DiskRule:
    """Nodes and positive weights for the normalized area measure on the disk."""

    nodes: np.ndarray
    weights: np.ndarray
    radial_order: int
    angular_order: int
    centers: tuple = ()

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def resolvable_degree(self) -> int:
        """Largest N for which |p|^2 |z-a|^m with deg p = N is integrated exactly
        by the radial and angular factors of the rule (smooth weight factors
        need extra margin on top of this)."""
        return min(self.radial_order - 1, (self.angular_order - 1) // 2)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.nodes).tobytes())
        h.update(np.ascontiguousarray(self.weights).tobytes())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class CircleRule:
    """Equispaced nodes on |z| = radius, rotated by ``phase`` radians."""

    radius: float
    count: int
    phase: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("circle radius must be positive")
        if self.count < 16 or self.count % 2:
            raise ValueError("circle node count must be an even integer >= 16")

    @property
    def nodes(self) -> np.ndarray:
        theta = 2 * np.pi * np.arange(self.count) / self.count + self.phase
        return self.radius * np.exp(1j * theta)


def _exit_distance(c, u):
    """Distance from c along unit direction u to the unit circle."""
    p = np.real(np.conj(c) * u)
    return -p + np.sqrt(p * p + 1 - abs(c) ** 2)


def _bisector_distance(c, other, u):
    """Distance from c along u to the perpendicular bisector of [c, other]."""
    d = c - other
    denom = np.real(np.conj(d) * u)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(denom < 0, -abs(d) ** 2 / (2 * np.where(denom < 0, denom, -1.0)), np.inf)
    return out


def _cell_pieces(center, others, scan=4096):
    """Split [0, 2 pi) into arcs on which one boundary curve is active."""
    def dists(phi):
        u = np.exp(1j * np.atleast_1d(phi))
        rows = [_exit_distance(center, u)] + [_bisector_distance(center, o, u) for o in others]
        return np.vstack(rows)

    phi = 2 * np.pi * np.arange(scan) / scan
    active = np.argmin(dists(phi), axis=0)
    cuts = []
    for i in range(scan):
        j = (i + 1) % scan
        if active[i] != active[j]:
            lo, hi = phi[i], phi[i] + 2 * np.pi / scan
            ka, kb = active[i], active[j]

            def gap(x, ka=ka, kb=kb):
                d = dists(x)[:, 0]
                return d[ka] - d[kb]

            cuts.append(brentq(gap, lo, hi, xtol=1e-15, rtol=1e-15) % (2 * np.pi))
    if not cuts:
        return [(0.0, 2 * np.pi)], dists
    cuts = sorted(cuts)
    pieces = [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]
    pieces.append((cuts[-1], cuts[0] + 2 * np.pi))
    return pieces, dists


def _polar_patch(center, m, phis, wphi, radii, radial_order):
    t, wt = gauss_jacobi01(radial_order, m + 1.0)
    u = np.exp(1j * phis)
    nodes = center + (radii[:, None] * t[None, :]) * u[:, None]
    weights = (wphi * radii**2)[:, None] * (wt / t**m)[None, :] / np.pi
    return nodes.ravel(), weights.ravel()


def build_disk_rule(spec: WeightSpec, radial_order: int = DEFAULT_RADIAL, angular_order: int = DEFAULT_ANGULAR) -> DiskRule:
    """Quadrature rule adapted to the singular points of ``spec``."""
    for name, value in (("radial_order", radial_order), ("angular_order", angular_order)):
        if int(value) != value or value < 4:
            raise ValueError(f"{name} must be an integer >= 4, got {value}")
    radial_order, angular_order = int(radial_order), int(angular_order)
    sites = spec.singular_sites() or [(0j, 0.0)]
    all_nodes, all_weights = [], []
    if len(sites) == 1:
        c, m = sites[0]
        phis = 2 * np.pi * np.arange(angular_order) / angular_order
        radii = _exit_distance(c, np.exp(1j * phis))
        wphi = np.full(angular_order, 2 * np.pi / angular_order)
        n, w = _polar_patch(c, m, phis, wphi, radii, radial_order)
        all_nodes.append(n)
        all_weights.append(w)
    else:
        for k, (c, m) in enumerate(sites):
            others = [o for j, (o, _) in enumerate(sites) if j != k]
            pieces, dists = _cell_pieces(c, others)
            for lo, hi in pieces:
                count = max(8, int(math.ceil(angular_order * (hi - lo) / (2 * np.pi))) + 8)
                x, wx = np.polynomial.legendre.leggauss(count)
                phis = lo + (hi - lo) * (x + 1) / 2
                wphi = wx * (hi - lo) / 2
                radii = dists(phis).min(axis=0)
                n, w = _polar_patch(c, m, phis, wphi, radii, radial_order)
                all_nodes.append(n)
                all_weights.append(w)
    nodes = np.concatenate(all_nodes)
    weights = np.concatenate(all_weights)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return DiskRule(nodes, weights, radial_order, angular_order, tuple(sites))


def suggest_orders(spec: WeightSpec, degree: int):
    """Radial and angular orders adequate for a degree-``degree`` basis.

    The polynomial part needs ``degree + 1`` radial and ``2 degree + 1``
    angular points; the margins cover the smooth factors of the weight and
    the off-centre geometry of singular patches.
    """
    sites = spec.singular_sites()
    offset = max((abs(c) for c, _ in sites), default=0.0)
    radial = degree + 32 + int(16 * offset)
    angular = int((2 * degree + 64) * (1 + offset))
    angular += angular % 2
    return max(radial, DEFAULT_RADIAL // 2), max(angular, 64)


def integrate_disk(rule: DiskRule, f) -> complex:
    """sum_i weights_i f(node_i); ``f`` is a callable or the node values."""
    values = f(rule.nodes) if callable(f) else np.asarray(f)
    return complex(np.sum(rule.weights * values))


def integrate_circle(rule: CircleRule, f) -> complex:
    """(1 / 2 pi i) times the contour integral of f over the circle."""
    zeta = rule.nodes
    values = f(zeta) if callable(f) else np.asarray(f)
    return complex(np.sum(values * zeta) / rule.count)
