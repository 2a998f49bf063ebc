"""Seeded invariant suites behind ``hupsphere verify``.

Each suite returns a :class:`Report` whose verdict is ``pass`` or ``fail``
and whose diagnostics carry the worst residual against the stated tolerance.
"""
from __future__ import annotations

import math

import numpy as np

from . import quad
from .funkhecke import (
    fit_planewave_constant,
    funk_hecke_coefficient,
    geodesic_mean_harmonic_factor,
    planewave_transform,
    profile_polynomial,
)
from .hup import (
    helmholtz_residual,
    lemma_geodesic_consistency,
    mu_hat,
    mu_hat_series,
    radial_profile_transform,
    spherical_mean_R,
)
from .reports import Report
from .specfun import legendre_norm_sq
from .sphharm import HarmonicCoefficients, SphericalDensity, basis_matrix, to_spherical

__all__ = ["SUITES", "run_suite", "random_unit", "random_harmonic", "random_profile"]


def random_unit(rng, n: int) -> np.ndarray:
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_harmonic(rng, l: int, n: int, terms: int = 3):
    """Random degree-l spherical harmonic as a sum of zonal profiles about random axes."""
    axes = np.array([random_unit(rng, n) for _ in range(terms)])
    amps = rng.normal(size=terms)

    def Y(p):
        p = np.asarray(p, dtype=float)
        return sum(a * profile_polynomial(l, n, p @ e) for a, e in zip(amps, axes))

    return Y


def random_profile(rng):
    """Smooth entire profile ``F(t) = e^{a t} cos(b t + c) + d t^2``."""
    a, b, c, d = rng.uniform(-1.5, 1.5), rng.uniform(0.0, 3.0), rng.uniform(0, math.pi), rng.normal()
    return lambda t: np.exp(a * t) * np.cos(b * t + c) + d * t * t


def _report(name, inputs, worst, tol, extra=None):
    diag = [{"max_residual": worst}]
    if extra:
        diag.append(extra)
    return Report(name, inputs, "pass" if worst < tol else "fail", diagnostics=diag,
                  tolerances={"tol": tol})


def funk_hecke_suite(n=3, l_max=12, probes=20, seed=0, tol=1e-8, order=None):
    rng = np.random.default_rng(seed)
    polar = (order or 48) + l_max
    worst = 0.0
    for _ in range(probes):
        xi = random_unit(rng, n)
        F = random_profile(rng)
        rule = quad.sphere_rule(n, l_max + 2, polar_order=polar, pole=xi)
        Fv = F(rule.nodes @ xi)
        for l in range(l_max + 1):
            Y = random_harmonic(rng, l, n)
            lhs = rule.weights @ (Fv * Y(rule.nodes))
            rhs = funk_hecke_coefficient(F, l, n) * Y(xi)
            worst = max(worst, abs(lhs - rhs))
    return _report("verify:funk-hecke", {"n": n, "l_max": l_max, "probes": probes, "seed": seed}, worst, tol)


def _random_s2_harmonic(rng, l):
    c = np.zeros((l + 1) ** 2, dtype=complex)
    scale = np.array([legendre_norm_sq(l, m) for m in range(-l, l + 1)])
    c[l * l:] = (rng.normal(size=2 * l + 1) + 1j * rng.normal(size=2 * l + 1)) / np.sqrt(scale)
    return HarmonicCoefficients(l, c)


def geodesic_suite(n=3, l_max=12, probes=5, seed=0, tol=1e-8, t_points=41, order=None):
    rng = np.random.default_rng(seed)
    ts = np.linspace(-0.975, 0.975, t_points)
    worst = 0.0
    for _ in range(probes):
        omega = random_unit(rng, n)
        for l in range(l_max + 1):
            if n == 3:
                Y = SphericalDensity.from_coefficients(_random_s2_harmonic(rng, l))
            else:
                Y = random_harmonic(rng, l, n)
            y_omega = Y(omega)
            for t in ts:
                mean = quad.geodesic_mean(Y, omega, float(t), order or 2 * l + 4)
                worst = max(worst, abs(mean - geodesic_mean_harmonic_factor(l, n, t) * y_omega))
    return _report("verify:geodesic", {"n": n, "l_max": l_max, "probes": probes, "seed": seed,
                                       "t_points": t_points}, worst, tol)


def planewave_suite(n=3, j_max=8, r_max=20.0, seed=0, tol=1e-7, drift_tol=1e-9, order=None):
    radii = np.linspace(r_max / 80.0, r_max, 80)
    base = order or j_max + 2
    polar = j_max + int(math.ceil(r_max)) + 48
    fit = fit_planewave_constant(n, j_max=j_max, radii=radii, order=base, polar_order=polar,
                                 seed=seed, threshold=math.inf)
    refit = fit_planewave_constant(n, j_max=j_max, radii=radii, order=2 * base, polar_order=2 * polar,
                                   seed=seed, threshold=math.inf, register=False)
    drift = abs(fit.c_n - refit.c_n)
    ok = fit.residual < tol and drift < drift_tol
    return Report(
        "verify:planewave",
        {"n": n, "j_max": j_max, "r_max": r_max, "seed": seed},
        "pass" if ok else "fail",
        diagnostics=[{"c_n": fit.c_n, "max_residual": fit.residual, "refit_drift": drift,
                      "probes": fit.probes}],
        tolerances={"tol": tol, "drift_tol": drift_tol},
    )


def _kill_projections(c: HarmonicCoefficients, omega) -> HarmonicCoefficients:
    theta, phi = to_spherical(omega[None, :])
    v = basis_matrix(c.K, theta, phi)[0]
    out = c.values.copy()
    for k in range(c.K + 1):
        s = slice(k * k, (k + 1) * (k + 1))
        out[s] -= (v[s] @ out[s]) * v[s].conj() / np.vdot(v[s], v[s]).real
    return HarmonicCoefficients(c.K, out)


def random_band_limited(rng, band: int) -> HarmonicCoefficients:
    vals = np.zeros((band + 1) ** 2, dtype=complex)
    for k in range(band + 1):
        for l in range(-k, k + 1):
            # scaled so every basis function contributes O(1) in L^2
            vals[k * k + k + l] = (rng.normal() + 1j * rng.normal()) / math.sqrt(legendre_norm_sq(k, l))
    return HarmonicCoefficients(band, vals)


def lemma_suite(count=50, band=10, seed=0, small=1e-8, large=1e-4):
    rng = np.random.default_rng(seed)
    outcomes = {"both-small": 0, "both-large": 0, "mixed": 0, "indeterminate": 0}
    for i in range(count):
        omega = random_unit(rng, 3)
        c = random_band_limited(rng, int(rng.integers(1, band + 1)))
        if i % 2:
            c = _kill_projections(c, omega)
        rep = lemma_geodesic_consistency(SphericalDensity.from_coefficients(c), omega, c.K,
                                         small=small, large=large)
        outcomes[rep.verdict] += 1
    ok = outcomes["mixed"] == 0 and outcomes["indeterminate"] == 0
    return Report("verify:lemma", {"count": count, "band": band, "seed": seed},
                  "pass" if ok else "fail", diagnostics=[outcomes],
                  tolerances={"small": small, "large": large})


def spherical_mean_suite(probes=20, seed=0, tol=1e-7, band=3):
    rng = np.random.default_rng(seed)
    c = random_band_limited(rng, band)
    g = lambda p: mu_hat_series(c, p)
    worst = 0.0
    for _ in range(probes):
        x = rng.normal(size=3) * 2.0
        r = float(rng.uniform(0.2, 10.0))
        rule = quad.sphere_rule(3, int(math.ceil(r + np.linalg.norm(x))) + 40)
        lhs = spherical_mean_R(g, x, r, rule)
        rhs = planewave_transform(0, 3, r) * g(x)
        worst = max(worst, abs(lhs - rhs))
    return _report("verify:spherical-mean", {"probes": probes, "seed": seed, "band": band}, worst, tol)


def helmholtz_suite(probes=20, seed=0, tol=1e-5, h=1e-3):
    rng = np.random.default_rng(seed)
    tables = {
        "constant": HarmonicCoefficients.from_dict(0, {(0, 0): 1.0}),
        "y21": HarmonicCoefficients.from_dict(2, {(2, 1): 1.0}),
    }
    worst = 0.0
    ratios = []
    for _ in range(probes):
        d = random_unit(rng, 3) * rng.uniform(0.5, 10.0)
        for c in tables.values():
            worst = max(worst, helmholtz_residual(c, d, h))
            coarse = helmholtz_residual(c, d, 0.08)
            ratios.append(coarse / helmholtz_residual(c, d, 0.04))
    order_ok = bool(np.median(ratios) > 3.5 and np.median(ratios) < 4.5)
    rep = _report("verify:helmholtz", {"probes": probes, "seed": seed, "h": h}, worst, tol,
                  {"halving_ratio_median": float(np.median(ratios))})
    if not order_ok:
        rep.verdict = "fail"
    return rep


def decomposition_suite(probes=20, seed=0, tol=1e-8, band=6):
    rng = np.random.default_rng(seed)
    c = random_band_limited(rng, band)
    f = SphericalDensity.from_coefficients(c)
    worst = 0.0
    for _ in range(probes):
        omega = random_unit(rng, 3)
        r = float(rng.uniform(0.1, 15.0))
        worst = max(worst, abs(mu_hat(f, -r * omega) - radial_profile_transform(f, omega, r)))
    return _report("verify:decomposition", {"probes": probes, "seed": seed, "band": band}, worst, tol)


SUITES = {
    "funk-hecke": funk_hecke_suite,
    "geodesic": geodesic_suite,
    "planewave": planewave_suite,
    "lemma": lemma_suite,
    "spherical-mean": spherical_mean_suite,
    "helmholtz": helmholtz_suite,
    "decomposition": decomposition_suite,
}


def run_suite(name: str, **kwargs) -> Report:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](**kwargs)
