import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special
from scipy.linalg import null_space

from hupsphere import quad
from hupsphere.hup import _exponents, _laplacian_matrix
from hupsphere.specfun import legendre_norm_sq
from hupsphere.sphharm import (
    HarmonicCoefficients,
    SphericalDensity,
    cesaro_sum,
    cesaro_weight,
    dim_harmonic,
    expand,
    from_spherical,
    is_symmetric_class,
    project,
    symmetric_table,
    synthesize,
    to_spherical,
    ylm,
    zonal,
)
from hupsphere.suites import random_band_limited, random_harmonic


def _unit(rng, n):
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)


def _laplacian_oracle(n, l):
    """Harmonic dimension as the null space of an independently built Laplacian."""
    from itertools import combinations_with_replacement
    mons = sorted({tuple(c.count(i) for i in range(n)) for c in combinations_with_replacement(range(n), l)})
    lower = sorted({tuple(c.count(i) for i in range(n)) for c in combinations_with_replacement(range(n), l - 2)}) if l >= 2 else []
    if not lower:
        return len(mons)
    idx = {m: i for i, m in enumerate(lower)}
    L = np.zeros((len(lower), len(mons)))
    for j, a in enumerate(mons):
        for i in range(n):
            if a[i] >= 2:
                b = list(a)
                b[i] -= 2
                L[idx[tuple(b)], j] += a[i] * (a[i] - 1)
    return null_space(L).shape[1]


class TestBasis:
    def test_documented_values(self):
        th, ph = 0.7, 1.3
        assert ylm(0, 0, th, ph) == pytest.approx(1.0)
        assert ylm(1, 0, th, ph) == pytest.approx(math.cos(th))
        assert ylm(1, 1, th, 0.0) == pytest.approx(-math.sin(th))
        with pytest.raises(ValueError):
            ylm(1, 2, th, ph)

    def test_against_scipy_orthonormal(self):
        th, ph = 1.1, 2.2
        for k in range(6):
            for l in range(-k, k + 1):
                ref = special.sph_harm_y(k, l, th, ph) if hasattr(special, "sph_harm_y") else special.sph_harm(l, k, ph, th)
                # scipy's is orthonormal under the unnormalised surface measure of area 4 pi
                ours = ylm(k, l, th, ph) / math.sqrt(4 * math.pi * legendre_norm_sq(k, l) if l >= 0 else
                                                     4 * math.pi * abs(legendre_norm_sq(k, l)))
                assert abs(abs(ours) - abs(ref)) < 1e-12

    def test_orthogonality_and_norms(self):
        K = 6
        rule = quad.sphere_rule(3, 2 * K)
        th, ph = to_spherical(rule.nodes)
        from hupsphere.sphharm import basis_matrix, _norms
        B = basis_matrix(K, th, ph)
        B = B / np.sqrt(_norms(K))
        G = (B.conj().T * rule.weights) @ B
        assert np.max(np.abs(G - np.eye(B.shape[1]))) < 1e-12

    def test_spherical_round_trip(self, rng):
        p = rng.normal(size=(20, 3))
        p /= np.linalg.norm(p, axis=1, keepdims=True)
        th, ph = to_spherical(p)
        assert np.allclose(from_spherical(th, ph), p, atol=1e-14)


class TestDimension:
    def test_documented(self):
        assert dim_harmonic(3, 0) == 1
        assert dim_harmonic(3, 2) == 5
        assert dim_harmonic(2, 1) == 2

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_against_nullspace(self, n):
        for l in range(0, 7):
            assert dim_harmonic(n, l) == _laplacian_oracle(n, l)

    def test_s2_formula(self):
        for l in range(20):
            assert dim_harmonic(3, l) == 2 * l + 1


class TestZonal:
    def test_constant_and_s2_closed_form(self):
        s = np.linspace(-1, 1, 11)
        for n in range(2, 7):
            assert np.allclose(zonal(0, n, s), 1.0)
        for l in range(10):
            assert np.allclose(zonal(l, 3, s), (2 * l + 1) * special.eval_legendre(l, s), atol=1e-11)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_value_at_one_is_dimension(self, n):
        # Z(1) = d_l under the probability measure
        for l in range(8):
            assert zonal(l, n, 1.0) == pytest.approx(dim_harmonic(n, l), rel=1e-11)

    def test_reproduces_eta1(self):
        xi = np.array([0.6, 0.0, 0.8])
        rule = quad.sphere_rule(3, 4)
        val = rule.weights @ (zonal(1, 3, rule.nodes @ xi) * rule.nodes[:, 0])
        assert val == pytest.approx(0.6, abs=1e-14)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_reproducing_property(self, n, rng):
        for l in range(0, 17, 4):
            xi = _unit(rng, n)
            Y = random_harmonic(rng, l, n)
            rule = quad.sphere_rule(n, 2 * l + 2)
            val = rule.weights @ (zonal(l, n, rule.nodes @ xi) * Y(rule.nodes))
            assert abs(val - Y(xi)) < 1e-8 * max(1.0, abs(Y(xi)))


class TestProjection:
    def test_documented(self):
        f = SphericalDensity.constant(3, 2.5)
        xi = np.array([0.0, 0.6, 0.8])
        assert project(f, 0, xi) == pytest.approx(2.5)
        assert abs(project(f, 3, xi)) < 1e-13
        sq = SphericalDensity.from_function(3, lambda p: p[:, 0] ** 2, degree=2)
        xi = np.array([0.48, 0.6, 0.64])
        assert project(sq, 0, xi) == pytest.approx(1 / 3)
        assert project(sq, 2, xi) == pytest.approx(xi[0] ** 2 - 1 / 3)

    def test_reproduces_basis_function(self, rng):
        for k, l in [(2, 1), (4, -3), (5, 0)]:
            c = HarmonicCoefficients.from_dict(k, {(k, l): 1.0})
            f = SphericalDensity.from_coefficients(c)
            xi = _unit(rng, 3)
            assert abs(project(f, k, xi) - f(xi)) < 1e-12

    def test_idempotent_and_orthogonal(self, rng):
        c = random_band_limited(rng, 5)
        f = SphericalDensity.from_coefficients(c)
        rule = quad.sphere_rule(3, 12)
        P = {l: project(f, l, rule.nodes) for l in range(6)}
        for l in range(6):
            g = SphericalDensity.from_function(3, lambda p, l=l: project(f, l, p), degree=5)
            xi = _unit(rng, 3)
            assert abs(project(g, l, xi) - project(f, l, xi)) < 1e-9 * max(1, abs(project(f, l, xi)))
            for m in range(l + 1, 6):
                assert abs(rule.weights @ (P[l] * P[m].conj())) < 1e-9

    def test_parseval(self, rng):
        c = random_band_limited(rng, 6)
        rule = quad.sphere_rule(3, 14)
        lhs = rule.weights @ np.abs(c(rule.nodes)) ** 2
        from hupsphere.sphharm import _norms
        rhs = np.sum(np.abs(c.values) ** 2 * _norms(6))
        assert lhs == pytest.approx(rhs, rel=1e-8)


class TestCesaro:
    def test_documented(self):
        assert cesaro_weight(0, 7, 1.3) == pytest.approx(1.0)
        for m in range(6):
            assert cesaro_weight(m, m, 1.0) == pytest.approx(1 / (m + 1))
        assert abs(cesaro_weight(3, 10_000, 1.5) - 1) < 1e-3
        with pytest.raises(ValueError):
            cesaro_weight(4, 3, 1.0)

    @given(st.integers(0, 30), st.integers(0, 30), st.floats(0.0, 5.0))
    def test_against_binomials(self, l, extra, delta):
        m = l + extra
        expect = special.binom(m - l + delta, delta) / special.binom(m + delta, delta)
        assert cesaro_weight(l, m, delta) == pytest.approx(expect, rel=1e-10)

    def test_single_harmonic_and_constant(self, rng):
        c = HarmonicCoefficients.from_dict(3, {(3, 2): 1.0})
        f = SphericalDensity.from_coefficients(c)
        xi = _unit(rng, 3)
        assert cesaro_sum(f, 6, 1.5, xi) == pytest.approx(cesaro_weight(3, 6, 1.5) * f(xi))
        assert cesaro_sum(SphericalDensity.constant(4), 5, 2.0, _unit(rng, 4)) == pytest.approx(1.0)

    def test_l1_error_decreases(self):
        f = SphericalDensity.from_function(3, lambda p: np.exp(p[:, 0] + 0.5 * p[:, 2]), degree=20)
        rule = quad.sphere_rule(3, 20)
        errs = []
        for m in (4, 8, 16):
            approx = cesaro_sum(f, m, 1.0, rule.nodes, order=60)
            errs.append(rule.weights @ np.abs(approx - f(rule.nodes)))
        assert errs[0] > errs[1] > errs[2]


class TestCoefficients:
    def test_expand_documented(self):
        rule = quad.sphere_rule(3, 8)
        f = synthesize(HarmonicCoefficients.from_dict(4, {(2, 1): 1.0}), rule)
        c = expand(f, 4)
        assert c[2, 1] == pytest.approx(1.0)
        mask = np.ones(c.values.size, bool)
        mask[2 * 2 + 2 + 1] = False
        assert np.max(np.abs(c.values[mask])) < 1e-10
        one = expand(SphericalDensity.from_grid(rule, np.ones(len(rule))), 4)
        assert one[0, 0] == pytest.approx(1.0) and np.max(np.abs(one.values[1:])) < 1e-12

    def test_round_trip(self, rng):
        for K in (3, 8, 12):
            c = random_band_limited(rng, K)
            back = expand(synthesize(c, quad.sphere_rule(3, 2 * K)), K)
            assert np.max(np.abs(back.values - c.values)) < 1e-9 * max(1, np.max(np.abs(c.values)))

    def test_expand_rejects(self):
        with pytest.raises(ValueError):
            expand(SphericalDensity.from_grid(quad.sphere_rule(4, 4), np.ones(len(quad.sphere_rule(4, 4)))))
        with pytest.raises(ValueError):
            expand(SphericalDensity.from_grid(quad.sphere_rule(3, 4), np.ones(len(quad.sphere_rule(3, 4)))), 3)

    def test_grid_density_off_nodes(self, rng):
        c = random_band_limited(rng, 4)
        f = synthesize(c, quad.sphere_rule(3, 8))
        p = _unit(rng, 3)
        assert abs(f(p) - c(p)) < 1e-10 * max(1, abs(c(p)))

    def test_json_round_trip(self, rng):
        c = random_band_limited(rng, 3)
        d = __import__("json").loads(c.to_json())
        assert d["n"] == 3 and d["K"] == 3 and len(d["coeffs"]) == 16
        assert np.array_equal(HarmonicCoefficients.from_json(c.to_json()).values, c.values)

    def test_table_is_read_only(self):
        c = HarmonicCoefficients.zeros(2)
        with pytest.raises(ValueError):
            c.values[0] = 1.0
        with pytest.raises((KeyError, IndexError, ValueError)):
            c[1, 2]


class TestSymmetricClass:
    def test_documented(self):
        assert is_symmetric_class(HarmonicCoefficients.zeros(3), 1e-12)
        c = HarmonicCoefficients.from_dict(2, {(0, 0): 1, (1, 0): 1, (2, 0): 1})
        assert is_symmetric_class(c, 1e-12)
        assert not is_symmetric_class(HarmonicCoefficients.from_dict(1, {(1, 0): 1}), 1e-12)

    @given(st.integers(0, 8), st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=17, max_size=17))
    def test_symmetric_table_is_symmetric(self, K, vals):
        per = {l: vals[l + 8] for l in range(-K, K + 1)}
        assert is_symmetric_class(symmetric_table(K, per), 0.0)
