"""Funk-Hecke coefficients, geodesic means of harmonics, and the plane-wave
(Bessel) transform of a harmonic density.

Every absolute constant is calibrated once against sphere quadrature and
cached; nothing is transcribed from tables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import quad
from .specfun import BesselOrder, bessel_j, gegenbauer, gegenbauer_normalized

__all__ = [
    "PlanewaveConstant",
    "NotCalibratedError",
    "profile_polynomial",
    "funk_hecke_constant",
    "funk_hecke_coefficient",
    "geodesic_mean_harmonic_factor",
    "geodesic_factor_constant",
    "fit_planewave_constant",
    "planewave_constant",
    "planewave_transform",
    "planewave_radial",
    "register_planewave_constant",
]

FIT_THRESHOLD = 1e-7


class NotCalibratedError(RuntimeError):
    """Raised when a plane-wave constant is used before it has been fitted."""


def _check_dim(n: int):
    if int(n) != n or not quad.MIN_DIM <= n <= quad.MAX_DIM:
        raise ValueError(f"dimension must be in [{quad.MIN_DIM}, {quad.MAX_DIM}], got {n}")


def profile_polynomial(l: int, n: int, t):
    """``G_l^{(n-2)/2}(t)``, or ``T_l(t)`` when n = 2."""
    if n == 2:
        return gegenbauer_normalized(l, 2, t)
    return gegenbauer(l, (n - 2) / 2.0, t)


@lru_cache(maxsize=None)
def funk_hecke_constant(l: int, n: int) -> float:
    """Calibrated ``alpha_l`` in ``C_l = alpha_l int F(t) G_l(t) (1-t^2)^{(n-3)/2} dt``.

    Probe: ``F = G_l`` against ``Y(eta) = G_l(eta_n)`` at the north pole.
    """
    _check_dim(n)
    sphere = quad.sphere_rule(n, 2 * l + 2)
    g = profile_polynomial(l, n, sphere.nodes[:, -1])
    lhs = float(sphere.weights @ (g * g)) / float(profile_polynomial(l, n, 1.0))
    line = quad.gauss_gegenbauer(l + 2, (n - 3) / 2.0)
    integral = float(line.weights @ profile_polynomial(l, n, line.nodes) ** 2)
    return lhs / integral


def funk_hecke_coefficient(F: Callable, l: int, n: int, order: int = quad.DEFAULT_INTERVAL_ORDER):
    """Scalar ``C_l`` with ``int F(xi.eta) Y_l(eta) dsigma(eta) = C_l Y_l(xi)``."""
    if l < 0:
        raise ValueError("degree must be non-negative")
    _check_dim(n)
    line = quad.gauss_gegenbauer(order, (n - 3) / 2.0)
    vals = np.asarray(F(line.nodes))
    return funk_hecke_constant(l, n) * (line.weights @ (vals * profile_polynomial(l, n, line.nodes)))


def _probe_axes(n: int):
    # fixed, non-degenerate probe geometry; only the overall scalar is learnt
    pole = np.zeros(n)
    pole[-1] = 1.0
    for angle in (0.2, 0.35, 0.5, 0.7):
        omega = np.zeros(n)
        omega[0], omega[-1] = math.sin(angle), math.cos(angle)
        yield pole, omega


@lru_cache(maxsize=None)
def geodesic_factor_constant(l: int, n: int) -> float:
    """Calibrated ``kappa_l`` with ``mean of Y_l over S_omega^t = kappa_l G_l(t) Y_l(omega)``."""
    _check_dim(n)
    if l < 0:
        raise ValueError("degree must be non-negative")
    best = None
    for pole, omega in _probe_axes(n):
        y_omega = float(profile_polynomial(l, n, pole @ omega))
        for t0 in (-0.6, -0.15, 0.25, 0.55, 0.8):
            scale = abs(y_omega * profile_polynomial(l, n, t0))
            if best is None or scale > best[0]:
                best = (scale, pole, omega, t0, y_omega)
    _, pole, omega, t0, y_omega = best
    probe = lambda p: profile_polynomial(l, n, p @ pole)
    mean = float(quad.geodesic_mean(probe, omega, t0, order=2 * l + 2))
    return mean / (float(profile_polynomial(l, n, t0)) * y_omega)


def geodesic_mean_harmonic_factor(l: int, n: int, t):
    """Factor ``kappa_l G_l(t)`` turning ``Y_l(omega)`` into its geodesic mean at height t."""
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) >= 1.0):
        raise ValueError("geodesic height must satisfy -1 < t < 1")
    return geodesic_factor_constant(l, n) * profile_polynomial(l, n, t)


@dataclass(frozen=True)
class PlanewaveConstant:
    """Fitted scalar ``c_n`` in ``int e^{-i r xi.eta} Y_j dsigma = c_n (-i)^j J_{j+(n-2)/2}(r) / r^{(n-2)/2} Y_j(xi)``."""

    n: int
    c_n: float
    residual: float
    probes: int = 0
    order: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not self.c_n > 0:
            raise ValueError("plane-wave constant must be positive")


_REGISTRY: dict[int, PlanewaveConstant] = {}


def register_planewave_constant(const: PlanewaveConstant) -> None:
    _REGISTRY[const.n] = const


def planewave_radial(j: int, n: int, r):
    """Bessel ratio ``(-i)^j J_{j+(n-2)/2}(r) / r^{(n-2)/2}`` without ``c_n``; r = 0 allowed."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    lam = (n - 2) / 2.0
    order = BesselOrder.for_dimension(j, n)
    out = np.zeros(r.shape)
    pos = r > 0
    if np.any(pos):
        rp = r[pos]
        out[pos] = bessel_j(order, rp) / rp ** lam
    if np.any(~pos) and j == 0:
        out[~pos] = 1.0 / (2.0 ** lam * math.gamma(lam + 1.0))
    out = (-1j) ** j * out
    return out if r.ndim else complex(out)


def planewave_transform(j: int, n: int, r, constant: PlanewaveConstant | None = None):
    """``c_n (-i)^j J_{j+(n-2)/2}(r) / r^{(n-2)/2}``; times ``Y_j(xi)`` it is the
    transform of ``Y_j dsigma`` at ``r xi``.
    """
    if j < 0:
        raise ValueError("degree must be non-negative")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise ValueError("radius must be positive")
    if constant is None:
        constant = _REGISTRY.get(n)
        if constant is None:
            raise NotCalibratedError(f"plane-wave constant for n={n} has not been fitted")
    return constant.c_n * planewave_radial(j, n, r)


def _plane_wave_sums(radii, heights, weighted, budget: int = 2_000_000):
    out = np.empty(len(radii), dtype=complex)
    step = max(1, budget // max(1, len(heights)))
    for i in range(0, len(radii), step):
        r = radii[i:i + step]
        out[i:i + step] = np.exp(-1j * np.outer(r, heights)) @ weighted
    return out


def _probe_data(n, j_max, radii, order, polar_order, seed):
    rng = np.random.default_rng(seed)
    rows, targets = [], []
    for j in range(j_max + 1):
        axis = rng.normal(size=n)
        axis /= np.linalg.norm(axis)
        xi = rng.normal(size=n)
        xi /= np.linalg.norm(xi)
        rule = quad.sphere_rule(n, order, polar_order=polar_order, pole=xi)
        y_nodes = profile_polynomial(j, n, rule.nodes @ axis)
        y_xi = float(profile_polynomial(j, n, xi @ axis))
        targets.append(_plane_wave_sums(radii, rule.nodes @ xi, rule.weights * y_nodes))
        rows.append(planewave_radial(j, n, radii) * y_xi)
    return np.concatenate(rows), np.concatenate(targets)


def fit_planewave_constant(n: int, j_max: int = 6, radii=None, order: int | None = None,
                           polar_order: int | None = None, seed: int = 0,
                           threshold: float = FIT_THRESHOLD, register: bool = True) -> PlanewaveConstant:
    """Least-squares fit of ``c_n`` against sphere quadrature of ``e^{-i r xi.eta} Y_j``.

    Raises ``RuntimeError`` when the worst probe residual exceeds ``threshold``.
    """
    _check_dim(n)
    radii = np.linspace(0.5, 12.0, 24) if radii is None else np.asarray(radii, dtype=float)
    if np.any(radii <= 0):
        raise ValueError("probe radii must be positive")
    if order is None:
        order = j_max + 2
    if polar_order is None:
        polar_order = j_max + int(math.ceil(radii.max())) + 48
    basis, target = _probe_data(n, j_max, radii, order, polar_order, seed)
    c = float(np.real(np.vdot(basis, target) / np.vdot(basis, basis)))
    residual = float(np.max(np.abs(target - c * basis)))
    if residual > threshold:
        raise RuntimeError(f"plane-wave fit residual {residual:.3e} exceeds {threshold:.1e} for n={n}")
    const = PlanewaveConstant(n, c, residual, basis.size, (order, polar_order))
    if register:
        register_planewave_constant(const)
    return const


def planewave_constant(n: int) -> PlanewaveConstant:
    """Registered constant for dimension n, fitting it on first use."""
    const = _REGISTRY.get(n)
    if const is None:
        const = fit_planewave_constant(n)
    return const
