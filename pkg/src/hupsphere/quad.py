"""Quadrature on [-1, 1], on S^{n-1} (2 <= n <= 6) and on geodesic spheres.

Sphere and geodesic rules carry probability weights, so integrating the
constant 1 returns 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "IntervalRule",
    "SphereRule",
    "GeodesicRule",
    "gauss_legendre",
    "gauss_gegenbauer",
    "sphere_rule",
    "geodesic_rule",
    "integrate",
    "geodesic_mean",
    "householder",
    "slice_normalizer",
    "monomial_moment",
    "DEFAULT_INTERVAL_ORDER",
]

DEFAULT_INTERVAL_ORDER = 64
MIN_DIM, MAX_DIM = 2, 6


@dataclass(frozen=True)
class IntervalRule:
    """Gauss rule on [-1, 1] for the weight ``(1 - t^2)^gamma``."""

    nodes: np.ndarray
    weights: np.ndarray
    exactness: int
    gamma: float = 0.0

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class SphereRule:
    n: int
    nodes: np.ndarray
    weights: np.ndarray
    exactness: int

    def __len__(self):
        return len(self.weights)


@dataclass(frozen=True)
class GeodesicRule:
    pole: np.ndarray
    height: float
    nodes: np.ndarray
    weights: np.ndarray
    exactness: int = field(default=0)

    def __len__(self):
        return len(self.weights)


def slice_normalizer(n: int) -> float:
    """``int_{-1}^{1} (1 - t^2)^{(n-3)/2} dt``."""
    g = (n - 3) / 2.0
    return math.sqrt(math.pi) * math.exp(math.lgamma(g + 1.0) - math.lgamma(g + 1.5))


def gauss_gegenbauer(order: int, gamma: float = 0.0) -> IntervalRule:
    """Gauss rule with ``order`` nodes for the weight ``(1 - t^2)^gamma``, gamma >= -1/2.

    Golub-Welsch on the symmetric Jacobi matrix; the Chebyshev case
    gamma = -1/2 uses the closed form.
    """
    if int(order) != order or order < 1:
        raise ValueError("order must be a positive integer")
    if gamma < -0.5:
        raise ValueError("gamma must be >= -1/2")
    order = int(order)
    if gamma == -0.5:
        i = np.arange(1, order + 1)
        nodes = np.cos((2 * i - 1) * np.pi / (2 * order))[::-1].copy()
        weights = np.full(order, np.pi / order)
        return IntervalRule(nodes, weights, 2 * order - 1, gamma)
    mu0 = math.sqrt(math.pi) * math.exp(math.lgamma(gamma + 1.0) - math.lgamma(gamma + 1.5))
    if order == 1:
        return IntervalRule(np.zeros(1), np.array([mu0]), 1, gamma)
    k = np.arange(1, order, dtype=float)
    off = np.sqrt(k * (k + 2 * gamma) / (4.0 * (k + gamma) ** 2 - 1.0))
    nodes, vecs = eigh_tridiagonal(np.zeros(order), off)
    weights = mu0 * vecs[0, :] ** 2
    # symmetrise against round-off
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return IntervalRule(nodes, weights, 2 * order - 1, gamma)


def gauss_legendre(order: int) -> IntervalRule:
    """Gauss-Legendre rule with ``order`` nodes, exact to degree ``2*order - 1``."""
    return gauss_gegenbauer(order, 0.0)


def householder(omega) -> np.ndarray:
    """Orthogonal matrix sending the north pole ``e_n`` to ``omega``.

    Columns ``0..n-2`` form an orthonormal basis of the hyperplane orthogonal
    to ``omega``.
    """
    w = np.asarray(omega, dtype=float)
    n = w.size
    e = np.zeros(n)
    e[-1] = 1.0
    v = e - w
    vv = float(v @ v)
    if vv < 1e-28:
        return np.eye(n)
    return np.eye(n) - 2.0 * np.outer(v, v) / vv


def _unit(omega) -> np.ndarray:
    w = np.asarray(omega, dtype=float)
    nrm = np.linalg.norm(w)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"expected a unit vector, got norm {nrm}")
    return w / nrm


def _sphere_nodes(n: int, order: int, polar_order: int | None = None):
    if n == 1:
        return np.array([[-1.0], [1.0]]), np.array([0.5, 0.5])
    if n == 2:
        m = max(order, polar_order or 0) + 1
        phi = 2.0 * np.pi * np.arange(m) / m
        return np.stack([np.cos(phi), np.sin(phi)], axis=1), np.full(m, 1.0 / m)
    sub_nodes, sub_w = _sphere_nodes(n - 1, order)
    top = order if polar_order is None else polar_order
    rule = gauss_gegenbauer(top // 2 + 1, (n - 3) / 2.0)
    tw = rule.weights / rule.weights.sum()
    t = rule.nodes
    s = np.sqrt(1.0 - t * t)
    heights = np.broadcast_to(t[:, None, None], (len(t), len(sub_w), 1))
    nodes = np.concatenate([s[:, None, None] * sub_nodes[None], heights], axis=2).reshape(-1, n)
    weights = (tw[:, None] * sub_w[None, :]).ravel()
    return nodes, weights


def sphere_rule(n: int, order: int, polar_order: int | None = None, pole=None) -> SphereRule:
    """Product rule on S^{n-1} exact for polynomials of degree <= ``order``.

    Gauss-Gegenbauer in each polar angle, uniform in the azimuth.
    ``polar_order`` raises the exactness along the pole axis only, and
    ``pole`` reorients that axis (default: the last coordinate axis).
    """
    if int(n) != n or not MIN_DIM <= n <= MAX_DIM:
        raise ValueError(f"sphere dimension n must be in [{MIN_DIM}, {MAX_DIM}], got {n}")
    if order < 0:
        raise ValueError("order must be non-negative")
    nodes, weights = _sphere_nodes(int(n), int(order), polar_order)
    if pole is not None:
        nodes = nodes @ householder(_unit(pole)).T
    return SphereRule(int(n), nodes, weights, int(order))


def geodesic_rule(omega, t: float, order: int) -> GeodesicRule:
    """Rule on ``S_omega^t = {v : omega . v = t}`` with probability weights."""
    w = _unit(omega)
    if not -1.0 < t < 1.0:
        raise ValueError("geodesic height must satisfy -1 < t < 1")
    n = w.size
    if n < 2:
        raise ValueError("dimension must be >= 2")
    sub, sw = _sphere_nodes(n - 1, order)
    q = householder(w)[:, : n - 1]
    nodes = t * w[None, :] + math.sqrt(1.0 - t * t) * (sub @ q.T)
    return GeodesicRule(w, float(t), nodes, sw, int(order))


def integrate(rule, f: Callable | np.ndarray):
    """Weighted sum of ``f`` over the rule's nodes; ``f`` may be precomputed values."""
    values = f(rule.nodes) if callable(f) else np.asarray(f)
    if values.shape[0] != len(rule.weights):
        raise ValueError("value count does not match node count")
    return np.tensordot(rule.weights, values, axes=(0, 0))


def _degree_hint(f, default: int = 24) -> int:
    deg = getattr(f, "degree", None)
    return default if deg is None else int(deg)


def geodesic_mean(f: Callable, omega, t: float, order: int | None = None):
    """Mean of ``f`` over the geodesic sphere of height ``t`` around ``omega``."""
    if not -1.0 < t < 1.0:
        raise ValueError("geodesic height must satisfy -1 < t < 1")
    if order is None:
        order = 2 * _degree_hint(f) + 8
    return integrate(geodesic_rule(omega, t, order), f)


def monomial_moment(exponents) -> float:
    """Exact mean of ``prod x_i^{a_i}`` over S^{n-1} under the probability measure."""
    a = [int(v) for v in exponents]
    if any(v % 2 for v in a):
        return 0.0
    n = len(a)
    logv = math.lgamma(n / 2.0) - math.lgamma((sum(a) + n) / 2.0)
    logv += sum(math.lgamma((v + 1) / 2.0) for v in a) - n * math.lgamma(0.5)
    return math.exp(logv)
