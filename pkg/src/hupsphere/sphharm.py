"""Spherical harmonics: the S^2 basis ``e^{il phi} P_k^l(cos theta)``, zonal
kernels for general n, projections, Cesaro means and coefficient tables.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import quad
from .specfun import assoc_legendre, gegenbauer_normalized, legendre_norm_sq

__all__ = [
    "HarmonicCoefficients",
    "SphericalDensity",
    "to_spherical",
    "from_spherical",
    "ylm",
    "basis_matrix",
    "dim_harmonic",
    "zonal",
    "zonal_constant",
    "project",
    "cesaro_weight",
    "cesaro_sum",
    "expand",
    "synthesize",
    "is_symmetric_class",
    "symmetric_table",
]


def to_spherical(points):
    """Polar angle in [0, pi] and azimuth in [0, 2 pi) of points in R^3."""
    p = np.asarray(points, dtype=float)
    r = np.linalg.norm(p, axis=-1)
    safe = np.where(r > 0, r, 1.0)
    theta = np.arccos(np.clip(p[..., 2] / safe, -1.0, 1.0))
    phi = np.mod(np.arctan2(p[..., 1], p[..., 0]), 2.0 * np.pi)
    return theta, phi


def from_spherical(theta, phi, r=1.0):
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    st = np.sin(theta)
    return r * np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def ylm(k: int, l: int, theta, phi):
    """Basis function ``e^{il phi} P_k^l(cos theta)`` (unnormalised, Condon-Shortley)."""
    if abs(l) > k:
        raise ValueError(f"need |l| <= k, got k={k}, l={l}")
    return np.exp(1j * l * np.asarray(phi, float)) * assoc_legendre(k, l, np.cos(theta))


def _index(k: int, l: int) -> int:
    return k * k + k + l


def basis_matrix(K: int, theta, phi) -> np.ndarray:
    """Values of every basis function with degree <= K; columns ordered by (k, l)."""
    theta = np.ravel(theta)
    phi = np.ravel(phi)
    ct = np.cos(theta)
    out = np.empty((theta.size, (K + 1) ** 2), dtype=complex)
    for l in range(-K, K + 1):
        e = np.exp(1j * l * phi)
        for k in range(abs(l), K + 1):
            out[:, _index(k, l)] = e * assoc_legendre(k, l, ct)
    return out


def _norms(K: int) -> np.ndarray:
    out = np.empty((K + 1) ** 2)
    for k in range(K + 1):
        for l in range(-k, k + 1):
            out[_index(k, l)] = legendre_norm_sq(k, l)
    return out


def dim_harmonic(n: int, l: int) -> int:
    """Dimension of the degree-l spherical harmonics in n variables."""
    if n < 2 or l < 0:
        raise ValueError("need n >= 2 and l >= 0")
    full = math.comb(n + l - 1, l)
    return full - (math.comb(n + l - 3, l - 2) if l >= 2 else 0)


@lru_cache(maxsize=None)
def zonal_constant(l: int, n: int) -> float:
    """Scale making ``c * G_l(xi . eta) / G_l(1)`` reproduce degree-l harmonics.

    Fixed once per (n, l) from the probe harmonic ``G_l(eta_n)/G_l(1)`` at the
    north pole, where the reproducing identity reads ``c * int G^2 dsigma = 1``.
    """
    rule = quad.sphere_rule(n, 2 * l + 2)
    g = gegenbauer_normalized(l, n, rule.nodes[:, -1])
    return 1.0 / float(rule.weights @ (g * g))


def zonal(l: int, n: int, s):
    """Zonal kernel ``Z^{(l)}(s)``, ``s = xi . eta``, for the probability measure on S^{n-1}."""
    if l < 0 or n < 2:
        raise ValueError("need l >= 0 and n >= 2")
    return zonal_constant(l, n) * gegenbauer_normalized(l, n, s)


@dataclass(frozen=True)
class HarmonicCoefficients:
    """Coefficients ``C_k^l`` of ``sum C_k^l e^{il phi} P_k^l(cos theta)`` on S^2.

    ``values`` is flat, ordered by degree then order (index ``k^2 + k + l``).
    """

    K: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).ravel()
        if self.K < 0 or v.size != (self.K + 1) ** 2:
            raise ValueError("coefficient vector length must be (K+1)^2")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, K: int) -> "HarmonicCoefficients":
        return cls(K, np.zeros((K + 1) ** 2, dtype=complex))

    @classmethod
    def from_dict(cls, K: int, entries: dict) -> "HarmonicCoefficients":
        v = np.zeros((K + 1) ** 2, dtype=complex)
        for (k, l), c in entries.items():
            if not abs(l) <= k <= K:
                raise ValueError(f"index (k={k}, l={l}) outside table of degree {K}")
            v[_index(k, l)] = c
        return cls(K, v)

    def __getitem__(self, kl):
        k, l = kl
        if not abs(l) <= k <= self.K:
            raise IndexError(f"(k={k}, l={l}) outside table of degree {self.K}")
        return self.values[_index(k, l)]

    def items(self):
        for k in range(self.K + 1):
            for l in range(-k, k + 1):
                yield (k, l), self.values[_index(k, l)]

    @property
    def n(self) -> int:
        return 3

    def __call__(self, points):
        theta, phi = to_spherical(points)
        shape = theta.shape
        return (basis_matrix(self.K, theta, phi) @ self.values).reshape(shape)

    def to_json(self) -> str:
        coeffs = [
            {"k": k, "l": l, "re": float(c.real), "im": float(c.imag)} for (k, l), c in self.items()
        ]
        return json.dumps({"n": 3, "K": self.K, "coeffs": coeffs}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "HarmonicCoefficients":
        obj = json.loads(text)
        if obj.get("n") != 3:
            raise ValueError("coefficient tables are defined only for n = 3")
        entries = {(int(e["k"]), int(e["l"])): complex(e["re"], e["im"]) for e in obj["coeffs"]}
        return cls.from_dict(int(obj["K"]), entries)


class SphericalDensity:
    """Density ``f`` on S^{n-1} standing for the measure ``f dsigma``.

    Backed by a coefficient table (n = 3), samples on a :class:`SphereRule`,
    a zonal profile around a pole, or an explicit function of the points.
    ``degree`` is the band limit when known; quadrature orders derive from it.
    """

    def __init__(self, n: int, kind: str, *, coeffs=None, rule=None, values=None,
                 profile=None, pole=None, func=None, degree=None):
        self.n = int(n)
        self.kind = kind
        self.coeffs = coeffs
        self.rule = rule
        self.values = None if values is None else np.asarray(values)
        self.profile = profile
        self.pole = None if pole is None else np.asarray(pole, dtype=float)
        self.func = func
        self.degree = degree
        self._interp = None

    @classmethod
    def from_coefficients(cls, c: HarmonicCoefficients) -> "SphericalDensity":
        return cls(3, "coefficients", coeffs=c, degree=c.K)

    @classmethod
    def from_grid(cls, rule: quad.SphereRule, values, degree: int | None = None) -> "SphericalDensity":
        values = np.asarray(values)
        if values.shape[0] != len(rule.weights):
            raise ValueError("sample count does not match the rule's node count")
        return cls(rule.n, "grid", rule=rule, values=values, degree=degree)

    @classmethod
    def zonal(cls, n: int, profile: Callable, pole, degree: int | None = None) -> "SphericalDensity":
        return cls(n, "zonal", profile=profile, pole=quad._unit(pole), degree=degree)

    @classmethod
    def from_function(cls, n: int, func: Callable, degree: int | None = None) -> "SphericalDensity":
        return cls(n, "function", func=func, degree=degree)

    @classmethod
    def constant(cls, n: int, value: complex = 1.0) -> "SphericalDensity":
        return cls.from_function(n, lambda p: np.full(np.shape(p)[:-1], value, dtype=complex), degree=0)

    def __call__(self, points):
        p = np.asarray(points, dtype=float)
        if p.shape[-1] != self.n:
            raise ValueError(f"points have dimension {p.shape[-1]}, density has {self.n}")
        if self.kind == "coefficients":
            return self.coeffs(p)
        if self.kind == "zonal":
            return np.asarray(self.profile(p @ self.pole))
        if self.kind == "function":
            return np.asarray(self.func(p))
        if self.rule is not None and p.shape == self.rule.nodes.shape and np.array_equal(p, self.rule.nodes):
            return self.values
        if self.n != 3:
            raise ValueError("grid densities with n != 3 are only defined at their own nodes")
        if self._interp is None:
            self._interp = expand(self, self.degree)
        return self._interp(p)

    def values_on(self, rule) -> np.ndarray:
        return self(rule.nodes)


def _default_order(f, extra: int = 0) -> int:
    deg = getattr(f, "degree", None)
    return 2 * (24 if deg is None else int(deg)) + 8 + extra


def project(f, l: int, xi, order: int | None = None):
    """Degree-l harmonic projection ``int Z^{(l)}(xi . eta) f(eta) dsigma(eta)``.

    ``xi`` may be a single unit vector or an array of them.
    """
    if l < 0:
        raise ValueError("degree must be non-negative")
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[-1]
    if order is None:
        order = _default_order(f, l)
    rule = quad.sphere_rule(n, order)
    fv = np.asarray(f(rule.nodes))
    kernel = zonal(l, n, np.clip(np.atleast_2d(xi) @ rule.nodes.T, -1.0, 1.0))
    out = kernel @ (rule.weights * fv)
    return out[0] if xi.ndim == 1 else out


def cesaro_weight(l: int, m: int, delta: float) -> float:
    """``binom(m - l + delta, delta) / binom(m + delta, delta)`` via log-Gamma."""
    if l < 0 or l > m:
        raise ValueError("need 0 <= l <= m")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    return math.exp(
        math.lgamma(m - l + delta + 1) - math.lgamma(m - l + 1)
        - math.lgamma(m + delta + 1) + math.lgamma(m + 1)
    )


def cesaro_sum(f, m: int, delta: float, point, order: int | None = None):
    """Cesaro mean ``sum_{l<=m} A_l^m(delta) Pi_l f(point)``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    point = np.asarray(point, dtype=float)
    n = point.shape[-1]
    if order is None:
        order = _default_order(f, m)
    rule = quad.sphere_rule(n, order)
    fv = np.asarray(f(rule.nodes))
    s = np.clip(np.atleast_2d(point) @ rule.nodes.T, -1.0, 1.0)
    kernel = sum(cesaro_weight(l, m, delta) * zonal(l, n, s) for l in range(m + 1))
    out = kernel @ (rule.weights * fv)
    return out[0] if point.ndim == 1 else out


def expand(f: SphericalDensity, K: int | None = None) -> HarmonicCoefficients:
    """Coefficient table of a grid-backed density on S^2 up to degree K."""
    if f.n != 3:
        raise ValueError("coefficient expansions exist only for n = 3")
    if f.kind != "grid":
        raise ValueError("expand takes a grid-backed density")
    rule = f.rule
    if K is None:
        K = rule.exactness // 2
    if 2 * K > rule.exactness:
        raise ValueError(f"rule exactness {rule.exactness} is below 2K = {2 * K}")
    theta, phi = to_spherical(rule.nodes)
    B = basis_matrix(K, theta, phi)
    c = (B.conj().T @ (rule.weights * f.values)) / _norms(K)
    return HarmonicCoefficients(K, c)


def synthesize(c: HarmonicCoefficients, rule: quad.SphereRule) -> SphericalDensity:
    """Sample a coefficient table on a rule's nodes."""
    return SphericalDensity.from_grid(rule, c(rule.nodes), degree=c.K)


def is_symmetric_class(c: HarmonicCoefficients, tol: float = 1e-12) -> bool:
    """True when ``C_k^l`` agrees across all degrees k >= |l| of the table, per order l."""
    for l in range(-c.K, c.K + 1):
        col = np.array([c[k, l] for k in range(abs(l), c.K + 1)])
        if col.size > 1 and np.max(np.abs(col[:, None] - col[None, :])) > tol:
            return False
    return True


def symmetric_table(K: int, per_order) -> HarmonicCoefficients:
    """Truncated symmetric table: ``C_k^l = per_order[l]`` for every |l| <= k <= K."""
    entries = {}
    for l, value in dict(per_order).items():
        for k in range(abs(l), K + 1):
            entries[(k, l)] = value
    return HarmonicCoefficients.from_dict(K, entries)
