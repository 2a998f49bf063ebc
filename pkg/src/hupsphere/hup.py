"""Fourier transforms of sphere-supported measures and uniqueness-pair checks.

Conventions: ``mu_hat(xi) = int e^{-i xi.eta} f(eta) dsigma(eta)`` with the
probability measure ``sigma``. Every "HUP" verdict here means "up to the
stated maximal degree"; nothing claims the infinite-degree statement.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.linalg import null_space
from scipy.special import gammaln

from . import quad
from .funkhecke import planewave_constant, planewave_radial
from .reports import Report
from .specfun import assoc_legendre, bessel_j, bessel_j_zero, gegenbauer_deriv, legendre_norm_sq
from .sphharm import (
    HarmonicCoefficients,
    SphericalDensity,
    basis_matrix,
    dim_harmonic,
    from_spherical,
    is_symmetric_class,
    project,
    to_spherical,
)

__all__ = [
    "ConeSpec",
    "LambdaSet",
    "HarmonicWitness",
    "ArmitageResult",
    "RANK_THRESHOLD",
    "DEGENERACY_GAP",
    "harmonic_basis",
    "mu_hat",
    "mu_hat_series",
    "transform_rule",
    "radial_profile_transform",
    "harmonic_cone_witnesses",
    "armitage_test",
    "build_counterexample",
    "lemma_geodesic_consistency",
    "paraboloid_height",
    "paraboloid_test",
    "geodesic_circle_test",
    "spherical_mean_R",
    "helmholtz_residual",
    "planar_parabola_experiment",
]

RANK_THRESHOLD = 1e-10
DEGENERACY_GAP = 1e-6


def _unit_rows(a) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    return a / np.linalg.norm(a, axis=1, keepdims=True)


def _random_sphere(rng, count: int, n: int) -> np.ndarray:
    return _unit_rows(rng.normal(size=(count, n)))


@dataclass(frozen=True)
class ConeSpec:
    """Cone ``{s * d : s real, d in directions}``; one direction per antipodal pair."""

    n: int
    directions: np.ndarray
    family_tag: str = "custom"
    alpha: float | None = None

    def __post_init__(self):
        d = np.atleast_2d(np.asarray(self.directions, dtype=float))
        if d.shape[1] != self.n:
            raise ValueError("direction dimension does not match n")
        if np.max(np.abs(np.linalg.norm(d, axis=1) - 1.0)) > 1e-12:
            raise ValueError("cone directions must be unit vectors")
        object.__setattr__(self, "directions", d)

    @classmethod
    def k_alpha(cls, alpha: float, n: int, l_max: int = 12, count: int | None = None,
                seed: int = 0) -> "ConeSpec":
        """Sample ``K_alpha = {x : x_1^2 = alpha^2 |x|^2}``."""
        if not 0.0 < alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if count is None:
            count = 4 * dim_harmonic(n, l_max)
        rng = np.random.default_rng(seed)
        rest = _random_sphere(rng, count, n - 1) * math.sqrt(1.0 - alpha * alpha)
        sign = rng.choice([-1.0, 1.0], size=count)
        dirs = np.concatenate([(sign * alpha)[:, None], rest], axis=1)
        return cls(n, dirs, "k_alpha", float(alpha))

    @classmethod
    def hyperplane(cls, n: int, normal=None, l_max: int = 12, count: int | None = None,
                   seed: int = 0) -> "ConeSpec":
        """Sample the hyperplane orthogonal to ``normal`` (default ``e_1``)."""
        if normal is None:
            normal = np.eye(n)[0]
        normal = quad._unit(normal)
        if count is None:
            count = 4 * dim_harmonic(n, l_max)
        rng = np.random.default_rng(seed)
        q = quad.householder(normal)[:, : n - 1]
        dirs = _random_sphere(rng, count, n - 1) @ q.T
        return cls(n, dirs, "hyperplane")

    @classmethod
    def random(cls, n: int, count: int, seed: int = 0) -> "ConeSpec":
        return cls(n, _random_sphere(np.random.default_rng(seed), count, n), "custom")

    def points(self, radii) -> np.ndarray:
        """Cone points ``+-r * d`` for every direction and radius."""
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        pts = (radii[:, None, None] * self.directions[None]).reshape(-1, self.n)
        return np.concatenate([pts, -pts])


@dataclass(frozen=True)
class LambdaSet:
    """Test set where ``mu_hat`` is required to vanish."""

    variant: str
    n: int
    params: dict = field(default_factory=dict)

    @classmethod
    def paraboloid(cls) -> "LambdaSet":
        return cls("paraboloid", 3)

    @classmethod
    def geodesic_circle(cls, alpha: float, R: float) -> "LambdaSet":
        if not 0.0 < alpha < math.pi or not R > 0:
            raise ValueError("need 0 < alpha < pi and R > 0")
        return cls("geodesic-circle", 3, {"alpha": float(alpha), "R": float(R)})

    @classmethod
    def cone(cls, spec: ConeSpec, max_radius: float = 20.0) -> "LambdaSet":
        return cls("cone", spec.n, {"cone": spec, "max_radius": float(max_radius)})

    @classmethod
    def sphere(cls, r: float, n: int = 3) -> "LambdaSet":
        if not r > 0:
            raise ValueError("sphere radius must be positive")
        return cls("sphere", n, {"r": float(r)})

    @classmethod
    def planar_parabola(cls) -> "LambdaSet":
        return cls("planar-parabola", 2)

    @classmethod
    def from_points(cls, points) -> "LambdaSet":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.size == 0:
            raise ValueError("point list is empty")
        return cls("points", pts.shape[1], {"points": pts})

    @property
    def height(self) -> float:
        """``r = R cos(alpha)`` for a geodesic circle."""
        if self.variant != "geodesic-circle":
            raise AttributeError("height is defined for geodesic circles only")
        return self.params["R"] * math.cos(self.params["alpha"])

    def sample(self, count: int, seed: int = 0, max_radius: float = 10.0) -> np.ndarray:
        rng = np.random.default_rng(seed)
        v = self.variant
        if v == "paraboloid":
            xy = rng.uniform(-1.0, 1.0, size=(count, 2)) * math.sqrt(max_radius)
            return np.column_stack([xy, (xy ** 2).sum(axis=1)])
        if v == "geodesic-circle":
            phi = 2.0 * np.pi * np.arange(count) / count
            return from_spherical(np.full(count, self.params["alpha"]), phi, self.params["R"])
        if v == "cone":
            spec = self.params["cone"]
            idx = rng.integers(0, len(spec.directions), size=count)
            radii = rng.uniform(0.0, self.params["max_radius"], size=count)
            sign = rng.choice([-1.0, 1.0], size=count)
            return (sign * radii)[:, None] * spec.directions[idx]
        if v == "sphere":
            return self.params["r"] * _random_sphere(rng, count, self.n)
        if v == "planar-parabola":
            t = np.linspace(-math.sqrt(max_radius), math.sqrt(max_radius), count)
            return np.column_stack([t, t * t])
        if v == "points":
            return self.params["points"]
        raise ValueError(f"unknown variant {v!r}")


# ---------------------------------------------------------------- harmonic polynomials

@lru_cache(maxsize=None)
def _exponents(n: int, l: int) -> tuple:
    out = []
    for combo in itertools.combinations_with_replacement(range(n), l):
        a = [0] * n
        for i in combo:
            a[i] += 1
        out.append(tuple(a))
    return tuple(sorted(out, reverse=True))


def _laplacian_matrix(n: int, l: int) -> np.ndarray:
    src = _exponents(n, l)
    if l < 2:
        return np.zeros((0, len(src)))
    dst = {a: i for i, a in enumerate(_exponents(n, l - 2))}
    L = np.zeros((len(dst), len(src)))
    for j, a in enumerate(src):
        for i in range(n):
            if a[i] >= 2:
                b = list(a)
                b[i] -= 2
                L[dst[tuple(b)], j] += a[i] * (a[i] - 1)
    return L


def _monomials(points, exps) -> np.ndarray:
    p = np.atleast_2d(np.asarray(points, dtype=float))
    e = np.asarray(exps)
    # table of powers p_i^k, then one gather per coordinate
    powers = p[:, :, None] ** np.arange(int(e.max(initial=0)) + 1)[None, None, :]
    out = np.ones((p.shape[0], e.shape[0]))
    for i in range(p.shape[1]):
        out *= powers[:, i, e[:, i]]
    return out


def _moment_gram(exps) -> np.ndarray:
    """Sphere moments of all products of monomial pairs (vectorised monomial_moment)."""
    e = np.asarray(exps, dtype=float)
    a = e[:, None, :] + e[None, :, :]
    n = e.shape[1]
    logv = (gammaln(n / 2.0) - gammaln((a.sum(axis=2) + n) / 2.0)
            + gammaln((a + 1) / 2.0).sum(axis=2) - n * gammaln(0.5))
    odd = np.any(a % 2 == 1, axis=2)
    return np.where(odd, 0.0, np.exp(logv))


@lru_cache(maxsize=None)
def harmonic_basis(n: int, l: int):
    """Monomial exponents and a coefficient basis of degree-l harmonic polynomials.

    The basis columns are orthonormal in ``L^2(S^{n-1}, sigma)``.
    """
    exps = _exponents(n, l)
    L = _laplacian_matrix(n, l)
    B = np.eye(len(exps)) if L.shape[0] == 0 else null_space(L)
    if B.shape[1] != dim_harmonic(n, l):
        raise RuntimeError("harmonic basis dimension mismatch")
    G = B.T @ _moment_gram(exps) @ B
    vals, vecs = np.linalg.eigh(G)
    B = B @ (vecs / np.sqrt(vals)) @ vecs.T
    return exps, B


@dataclass(frozen=True)
class HarmonicWitness:
    """Homogeneous harmonic polynomial vanishing on a sampled cone."""

    degree: int
    n: int
    exponents: tuple
    coefficients: np.ndarray
    residual: float

    def __call__(self, points):
        p = np.asarray(points, dtype=float)
        flat = p.reshape(-1, self.n)
        return (_monomials(flat, self.exponents) @ self.coefficients).reshape(p.shape[:-1])

    def laplacian(self) -> np.ndarray:
        """Coefficients of the Laplacian in the degree-(l-2) monomial basis."""
        return _laplacian_matrix(self.n, self.degree) @ self.coefficients

    def terms(self) -> list:
        return [
            {"exponents": list(a), "coefficient": float(c)}
            for a, c in zip(self.exponents, self.coefficients) if abs(c) > 1e-14
        ]


def harmonic_cone_witnesses(cone: ConeSpec, l_max: int,
                            threshold: float = RANK_THRESHOLD) -> list:
    """Harmonic polynomials of degree 1..l_max vanishing on every cone direction.

    For each degree the harmonic basis is evaluated at the directions; right
    singular vectors with ``s < threshold * s_max`` are returned as witnesses.
    An empty list means the cone is non-harmonic up to ``l_max``.
    """
    n = cone.n
    dirs = cone.directions
    found = []
    for l in range(1, l_max + 1):
        exps, B = harmonic_basis(n, l)
        M = _monomials(dirs, exps)
        A = M @ B
        if A.shape[0] < A.shape[1]:
            raise ValueError(
                f"cone under-sampled at degree {l}: {A.shape[0]} directions < {A.shape[1]} harmonics")
        _, s, vt = np.linalg.svd(A, full_matrices=False)
        for k in np.nonzero(s < threshold * s[0])[0]:
            coef = B @ vt[k]
            coef = coef / np.linalg.norm(coef)
            if coef[np.argmax(np.abs(coef))] < 0:
                coef = -coef
            resid = float(np.max(np.abs(M @ coef)))
            found.append(HarmonicWitness(l, n, exps, coef, resid))
    return found


@dataclass(frozen=True)
class ArmitageResult:
    non_harmonic: bool
    violation: tuple | None
    smallest: float

    @property
    def verdict(self) -> str:
        return "non-harmonic" if self.non_harmonic else "harmonic"


def armitage_test(alpha: float, n: int, l_max: int, tol: float = 1e-10) -> ArmitageResult:
    """Gegenbauer-derivative criterion for ``K_alpha``.

    Non-harmonic up to ``l_max`` iff ``D^m G_l^{(n-2)/2}(alpha)`` is nonzero for
    all ``2 <= l <= l_max`` and ``0 <= m <= l-2``; values are measured relative
    to ``|D^m G_l(1)|``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if n < 3:
        raise ValueError("the Gegenbauer criterion needs n >= 3")
    lam = (n - 2) / 2.0
    smallest = math.inf
    for l in range(2, l_max + 1):
        for m in range(l - 1):
            rel = abs(gegenbauer_deriv(m, l, lam, alpha)) / abs(gegenbauer_deriv(m, l, lam, 1.0))
            smallest = min(smallest, rel)
            if rel <= tol:
                return ArmitageResult(False, (l, m), rel)
    return ArmitageResult(True, None, smallest)


def build_counterexample(witness: HarmonicWitness, rule: quad.SphereRule | None = None) -> SphericalDensity:
    """Density ``f = P|_{S^{n-1}}`` for a witness ``P``; ``mu_hat`` then vanishes on the cone."""
    if witness.residual > 1e-10:
        raise ValueError(f"witness residual {witness.residual:.2e} too large")
    if rule is not None and rule.n != witness.n:
        raise ValueError("rule dimension does not match the witness")
    return SphericalDensity.from_function(witness.n, witness, degree=witness.degree)


# ---------------------------------------------------------------- transforms

def transform_rule(n: int, degree: int, r_max: float) -> quad.SphereRule:
    """Sphere rule resolving ``e^{-i xi.eta} f`` for ``|xi| <= r_max`` and band ``degree``."""
    return quad.sphere_rule(n, int(degree) + int(math.ceil(r_max)) + 32)


def _density_values(f, rule) -> np.ndarray:
    if isinstance(f, SphericalDensity):
        if f.n != rule.n:
            raise ValueError(f"density dimension {f.n} does not match rule dimension {rule.n}")
        return np.asarray(f.values_on(rule))
    return np.asarray(f(rule.nodes))


def mu_hat(f, xi, rule: quad.SphereRule | None = None, budget: int = 4_000_000):
    """Quadrature value of ``int e^{-i xi.eta} f(eta) dsigma(eta)``; ``xi`` is (n,) or (m, n)."""
    xi = np.asarray(xi, dtype=float)
    pts = np.atleast_2d(xi)
    if rule is None:
        deg = getattr(f, "degree", None)
        rule = transform_rule(pts.shape[1], 24 if deg is None else deg, np.max(np.linalg.norm(pts, axis=1)))
    if pts.shape[1] != rule.n:
        raise ValueError(f"point dimension {pts.shape[1]} does not match rule dimension {rule.n}")
    weighted = rule.weights * _density_values(f, rule)
    out = np.empty(len(pts), dtype=complex)
    step = max(1, budget // len(rule.weights))
    for i in range(0, len(pts), step):
        out[i:i + step] = np.exp(-1j * (pts[i:i + step] @ rule.nodes.T)) @ weighted
    return out[0] if xi.ndim == 1 else out


def mu_hat_series(c: HarmonicCoefficients, x):
    """``mu_hat`` of ``sum C_k^l Y_k^l dsigma`` via the termwise plane-wave identity."""
    x = np.asarray(x, dtype=float)
    pts = np.atleast_2d(x)
    if pts.shape[1] != 3:
        raise ValueError("series transform is defined on R^3")
    const = planewave_constant(3).c_n
    r = np.linalg.norm(pts, axis=1)
    theta, phi = to_spherical(pts)
    B = basis_matrix(c.K, theta, phi)
    out = np.zeros(len(pts), dtype=complex)
    for k in range(c.K + 1):
        cols = slice(k * k, (k + 1) * (k + 1))
        out += const * planewave_radial(k, 3, r) * (B[:, cols] @ c.values[cols])
    return out[0] if x.ndim == 1 else out


def radial_profile_transform(f, omega, r, t_order: int = quad.DEFAULT_INTERVAL_ORDER,
                             geo_order: int | None = None):
    """``int_{-1}^{1} e^{irt} f~(omega, t) w_n(t) dt`` with the normalised slice weight.

    Equals ``mu_hat(f, -r * omega)``.
    """
    omega = quad._unit(omega)
    n = omega.size
    line = quad.gauss_gegenbauer(t_order, (n - 3) / 2.0)
    if geo_order is None:
        deg = getattr(f, "degree", None)
        geo_order = 2 * (24 if deg is None else deg) + 8
    means = np.array([quad.geodesic_mean(f, omega, t, geo_order) for t in line.nodes])
    w = line.weights / quad.slice_normalizer(n)
    r = np.asarray(r, dtype=float)
    out = np.exp(1j * np.outer(np.atleast_1d(r), line.nodes)) @ (w * means)
    return out if r.ndim else complex(out[0])


# ---------------------------------------------------------------- verification pipelines

def lemma_geodesic_consistency(f, omega, l_max: int, t_grid=None, order: int | None = None,
                               small: float = 1e-8, large: float = 1e-4) -> Report:
    """Compare ``max_t |f~(omega, t)|`` with ``max_l |Pi_l f(omega)|``.

    Verdict is ``both-small``, ``both-large``, ``mixed`` or ``indeterminate``
    (a quantity falls between the two thresholds).
    """
    omega = quad._unit(omega)
    if t_grid is None:
        t_grid = np.linspace(-0.95, 0.95, 41)
    if order is None:
        order = 2 * l_max + 8
    geo = np.array([quad.geodesic_mean(f, omega, float(t), order) for t in t_grid])
    proj = np.array([project(f, l, omega, order=order + l) for l in range(l_max + 1)])
    gmax = float(np.max(np.abs(geo)))
    pmax = float(np.max(np.abs(proj)))

    def cls(v):
        return "small" if v < small else "large" if v > large else "between"

    a, b = cls(gmax), cls(pmax)
    if a == b and a != "between":
        verdict = f"both-{a}"
    elif "between" in (a, b):
        verdict = "indeterminate"
    else:
        verdict = "mixed"
    return Report(
        "lemma_geodesic_consistency",
        {"omega": omega, "l_max": l_max, "t_points": len(t_grid)},
        verdict,
        diagnostics=[{"geodesic_max": gmax, "projection_max": pmax}],
        residuals=[{"l": l, "abs": float(abs(v))} for l, v in enumerate(proj)],
        tolerances={"small": small, "large": large},
    )


def paraboloid_height(r) -> np.ndarray:
    """``cos(theta)`` of the paraboloid point at radius r: root of ``cos = r sin^2``."""
    r = np.asarray(r, dtype=float)
    return (-1.0 + np.sqrt(1.0 + 4.0 * r * r)) / (2.0 * r)


def _bessel_zero_gap(degree: int, r: float) -> float:
    nu = degree + 0.5
    gap, k = math.inf, 1
    while True:
        z = bessel_j_zero(nu, k)
        gap = min(gap, abs(z - r))
        if z > r:
            return gap
        k += 1


@lru_cache(maxsize=None)
def _legendre_roots(k: int, d: int) -> np.ndarray:
    roots = np.polynomial.legendre.Legendre.basis(k).deriv(d).roots()
    roots = np.real(roots[np.abs(np.imag(roots)) < 1e-12])
    return roots


def _legendre_gap(k: int, d: int, x: float) -> float:
    roots = _legendre_roots(k, abs(d))
    return math.inf if roots.size == 0 else float(np.min(np.abs(roots - x)))


def paraboloid_test(c: HarmonicCoefficients, r_samples, tol: float = 1e-8, sym_tol: float = 1e-12,
                    phi_count: int | None = None, rule: quad.SphereRule | None = None) -> Report:
    """Uniqueness check of the paraboloid ``x_3 = x_1^2 + x_2^2`` for a symmetric table.

    At each radius r the paraboloid meets the sphere of radius r on the circle
    with ``cos(theta_r) = paraboloid_height(r)``. ``mu_hat`` is sampled there by
    sphere quadrature, its azimuthal Fourier coefficients ``F_d(r)`` are taken,
    and the common order-d coefficient is recovered as ``F_d(r) / S_d(r)`` with
    ``S_d(r) = sum_k c_3 (-i)^k J_{k+1/2}(r) r^{-1/2} P_k^d(cos theta_r)``.
    Residuals are the recovered ``C^d P_l^d(cos theta_r)`` for all |d| <= l <= K.
    """
    if not is_symmetric_class(c, sym_tol):
        raise ValueError("coefficient table is not in the (truncated) symmetric class")
    r_samples = np.atleast_1d(np.asarray(r_samples, dtype=float))
    if np.any(r_samples <= 0):
        raise ValueError("r_samples must be positive")
    K = c.K
    for r in r_samples:
        x = float(paraboloid_height(r))
        for k in range(K + 1):
            if _bessel_zero_gap(k, r) < DEGENERACY_GAP:
                raise ValueError(f"r = {r} is within {DEGENERACY_GAP} of a zero of J_{k + 0.5}")
            for d in range(k + 1):
                if _legendre_gap(k, d, x) < DEGENERACY_GAP:
                    raise ValueError(f"cos(theta_r) = {x} is within {DEGENERACY_GAP} of a zero of P_{k}^{d}")
    if phi_count is None:
        phi_count = 4 * K + 4
    f = SphericalDensity.from_coefficients(c)
    if rule is None:
        rule = transform_rule(3, K, float(r_samples.max()))
    const = planewave_constant(3).c_n
    phi = 2.0 * np.pi * np.arange(phi_count) / phi_count
    residuals, diagnostics = [], []
    for r in r_samples:
        x = float(paraboloid_height(r))
        pts = from_spherical(np.full(phi_count, math.acos(x)), phi, r)
        values = mu_hat(f, pts, rule)
        F = np.fft.fft(values) / phi_count
        for d in range(-K, K + 1):
            S = sum(const * planewave_radial(k, 3, r) * assoc_legendre(k, d, x) for k in range(abs(d), K + 1))
            Fd = F[d % phi_count]
            recovered = Fd / S
            diagnostics.append({"r": float(r), "d": d, "F_abs": float(abs(Fd)), "S_abs": float(abs(S))})
            for l in range(abs(d), K + 1):
                p = assoc_legendre(l, d, x)
                val = recovered * p
                direct = c[l, d] * p
                residuals.append({
                    "r": float(r), "l": l, "d": d,
                    "re": float(val.real), "im": float(val.imag), "abs": float(abs(val)),
                    "direct_re": float(direct.real), "direct_im": float(direct.imag),
                })
    worst = max((e["abs"] for e in residuals), default=0.0)
    verdict = "zero" if worst < tol else "nonzero"
    return Report(
        "paraboloid_test",
        {"K": K, "r_samples": r_samples, "phi_count": phi_count},
        verdict,
        diagnostics=diagnostics,
        residuals=residuals,
        tolerances={"tol": tol, "sym_tol": sym_tol, "degeneracy_gap": DEGENERACY_GAP},
    )


def geodesic_circle_test(alpha: float, R: float, l_max: int, tol: float = 1e-8) -> Report:
    """Uniqueness check of the circle at polar angle ``alpha`` on the sphere of radius R.

    Passes up to ``l_max`` iff ``|J_{l+1/2}(R)| > tol`` and the normalised
    ``|P_l^d(cos alpha)| > tol`` for all ``|d| <= l <= l_max``. On failure the
    report's ``artifacts["counterexample"]`` holds a density whose transform
    vanishes on the circle.
    """
    if not 0.0 < alpha < math.pi or not R > 0:
        raise ValueError("need 0 < alpha < pi and R > 0")
    x = math.cos(alpha)
    diagnostics = []
    failure = None
    for l in range(l_max + 1):
        jv = float(bessel_j(l + 0.5, R))
        diagnostics.append({"condition": "bessel", "l": l, "value": jv})
        if abs(jv) <= tol:
            failure = {"condition": "bessel", "l": l, "d": 0, "value": jv}
            break
        for d in range(-l, l + 1):
            pv = float(assoc_legendre(l, d, x)) / math.sqrt(legendre_norm_sq(l, d))
            diagnostics.append({"condition": "legendre", "l": l, "d": d, "value": pv})
            if abs(pv) <= tol:
                failure = {"condition": "legendre", "l": l, "d": d, "value": pv}
                break
        if failure:
            break
    report = Report(
        "geodesic_circle_test",
        {"alpha": alpha, "R": R, "l_max": l_max, "height": R * x},
        "not-hup" if failure else "hup-up-to-l_max",
        diagnostics=diagnostics,
        residuals=[failure] if failure else [],
        tolerances={"tol": tol},
    )
    if failure:
        table = HarmonicCoefficients.from_dict(failure["l"], {(failure["l"], failure["d"]): 1.0})
        report.artifacts["counterexample"] = SphericalDensity.from_coefficients(table)
        report.diagnostics.append({"counterexample": {"k": failure["l"], "l": failure["d"]}})
    return report


def spherical_mean_R(g: Callable, x, r: float, rule: quad.SphereRule | None = None):
    """Mean of ``g`` over the sphere of radius r centred at x (probability measure)."""
    if not r > 0:
        raise ValueError("radius must be positive")
    x = np.asarray(x, dtype=float)
    if rule is None:
        rule = quad.sphere_rule(x.size, 32)
    if rule.n != x.size:
        raise ValueError("rule dimension does not match x")
    return quad.integrate(rule, lambda nodes: g(x[None, :] + r * nodes))


def helmholtz_residual(c: HarmonicCoefficients, x, h: float = 1e-3) -> float:
    """``|Laplacian mu_hat + mu_hat|`` at x by second-order central differences."""
    x = np.asarray(x, dtype=float)
    pts = [x]
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        pts += [x + e, x - e]
    v = mu_hat_series(c, np.array(pts))
    lap = (np.sum(v[1:]) - 6.0 * v[0]) / (h * h)
    return float(abs(lap + v[0]))


def _taylor_kernel_coeffs(theta, terms: int) -> np.ndarray:
    # coefficients of t^p in exp(i (t cos + t^2 sin)), p < terms, as arrays over theta
    c, s = np.cos(theta), np.sin(theta)
    out = np.zeros((terms, theta.size), dtype=complex)
    for p in range(terms):
        for b in range(p // 2 + 1):
            a = p - 2 * b
            q = a + b
            out[p] += (1j ** q / math.factorial(q)) * math.comb(q, b) * c ** a * s ** b
    return out


def planar_parabola_experiment(f_samples, t_samples, terms: int = 4) -> Report:
    """Evaluate ``int e^{i(t cos + t^2 sin)} f dtheta`` on a uniform theta grid.

    ``f_samples`` are values at ``theta_j = -pi + 2 pi j / N``. Reports the
    values, their maximum, the first ``terms`` Taylor coefficients in t, and a
    consistency check of those coefficients against the values at small t.
    Makes no claim about whether the set is a uniqueness set.
    """
    f = np.asarray(f_samples, dtype=complex).ravel()
    N = f.size
    if N == 0:
        raise ValueError("f_samples is empty")
    theta = -np.pi + 2.0 * np.pi * np.arange(N) / N
    w = 2.0 * np.pi / N
    t = np.atleast_1d(np.asarray(t_samples, dtype=float))

    def transform(tv):
        return np.exp(1j * (np.outer(tv, np.cos(theta)) + np.outer(tv * tv, np.sin(theta)))) @ (w * f)

    values = transform(t)
    coeffs = _taylor_kernel_coeffs(theta, terms) @ (w * f)
    h = 1e-3
    probe = transform(np.array([h]))[0]
    taylor = sum(coeffs[p] * h ** p for p in range(terms))
    consistency = float(abs(probe - taylor))
    return Report(
        "planar_parabola_experiment",
        {"grid_points": N, "t_count": len(t), "terms": terms},
        "reported",
        diagnostics=[
            {"max_abs": float(np.max(np.abs(values))) if values.size else 0.0},
            {"taylor": [{"power": p, "re": float(v.real), "im": float(v.imag)} for p, v in enumerate(coeffs)]},
            {"taylor_consistency": {"t": h, "abs_error": consistency}},
        ],
        residuals=[{"t": float(tv), "re": float(v.real), "im": float(v.imag), "abs": float(abs(v))}
                   for tv, v in zip(t, values)],
        tolerances={},
        artifacts={"values": values, "taylor": coeffs},
    )
