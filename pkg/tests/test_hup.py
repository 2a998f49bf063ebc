import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hupsphere import quad
from hupsphere.hup import (
    ConeSpec,
    LambdaSet,
    armitage_test,
    build_counterexample,
    geodesic_circle_test,
    harmonic_basis,
    harmonic_cone_witnesses,
    helmholtz_residual,
    lemma_geodesic_consistency,
    mu_hat,
    mu_hat_series,
    paraboloid_height,
    paraboloid_test,
    planar_parabola_experiment,
    radial_profile_transform,
    spherical_mean_R,
)
from hupsphere.sphharm import HarmonicCoefficients, SphericalDensity, dim_harmonic, symmetric_table
from hupsphere.specfun import bessel_j_zero, legendre_norm_sq
from hupsphere.suites import random_band_limited


def _unit(rng, n):
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)


def _scaled_symmetric(rng, K):
    """Random truncated-symmetric table, each order scaled to O(1) on the sphere."""
    per = {d: (rng.normal() + 1j * rng.normal()) / math.sqrt(abs(legendre_norm_sq(K, d)))
           for d in range(-K, K + 1)}
    return symmetric_table(K, per)


ONE = HarmonicCoefficients.from_dict(0, {(0, 0): 1.0})


class TestTransform:
    def test_documented(self, rng):
        r = 3.7
        assert mu_hat(SphericalDensity.constant(3), np.array([0, 0, r])) == pytest.approx(math.sin(r) / r, abs=1e-14)
        eta1 = SphericalDensity.from_function(3, lambda p: p[:, 0], degree=1)
        assert abs(mu_hat(eta1, np.array([0.0, 2.0, -5.0]))) < 1e-15
        f = SphericalDensity.from_coefficients(random_band_limited(rng, 4))
        rule = quad.sphere_rule(3, 10)
        assert mu_hat(f, np.zeros(3), rule) == pytest.approx(quad.integrate(rule, f))

    def test_series_documented(self):
        r = np.linspace(0.5, 15, 7)
        pts = np.column_stack([r, 0 * r, 0 * r])
        assert np.allclose(mu_hat_series(ONE, pts), np.sin(r) / r, atol=1e-13)
        c = HarmonicCoefficients.from_dict(1, {(1, 0): 1.0})
        assert np.max(np.abs(mu_hat_series(c, pts))) < 1e-14
        assert mu_hat_series(ONE, np.zeros(3)) == pytest.approx(1.0)

    def test_series_matches_quadrature(self, rng):
        c = random_band_limited(rng, 6)
        f = SphericalDensity.from_coefficients(c)
        x = rng.normal(size=(50, 3)) * 4
        scale = np.max(np.abs(mu_hat_series(c, x)))
        assert np.max(np.abs(mu_hat(f, x) - mu_hat_series(c, x))) < 1e-8 * max(1, scale)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mu_hat(SphericalDensity.constant(3), np.ones(4), quad.sphere_rule(3, 6))
        with pytest.raises(ValueError):
            mu_hat_series(ONE, np.ones(4))

    def test_radial_profile(self, rng):
        one = SphericalDensity.constant(3)
        w = _unit(rng, 3)
        assert radial_profile_transform(one, w, 2.5) == pytest.approx(math.sin(2.5) / 2.5, abs=1e-13)
        f = SphericalDensity.from_coefficients(random_band_limited(rng, 5))
        assert radial_profile_transform(f, w, 0.0) == pytest.approx(quad.integrate(quad.sphere_rule(3, 12), f), abs=1e-12)
        for _ in range(20):
            w = _unit(rng, 3)
            r = rng.uniform(0.1, 15)
            assert abs(mu_hat(f, -r * w) - radial_profile_transform(f, w, r)) < 1e-8

    @pytest.mark.parametrize("n", [4, 5])
    def test_radial_profile_higher_dim(self, n, rng):
        a = _unit(rng, n)
        f = SphericalDensity.from_function(n, lambda p: np.exp(p @ a), degree=20)
        w = _unit(rng, n)
        assert abs(mu_hat(f, -3.0 * w) - radial_profile_transform(f, w, 3.0)) < 1e-8


class TestCones:
    def test_hyperplane_witness_is_x1(self):
        w = harmonic_cone_witnesses(ConeSpec.hyperplane(3, l_max=4), 4)
        first = w[0]
        assert first.degree == 1
        assert first.terms() == [{"exponents": [1, 0, 0], "coefficient": pytest.approx(1.0)}]

    def test_k_alpha_witness(self):
        w = harmonic_cone_witnesses(ConeSpec.k_alpha(1 / math.sqrt(3), 3, l_max=2), 2)
        assert [x.degree for x in w] == [2]
        p = w[0]
        x = np.random.default_rng(1).normal(size=(10, 3))
        target = x[:, 0] ** 2 - (x ** 2).sum(axis=1) / 3
        ratio = p(x) / target
        assert np.allclose(ratio, ratio[0], rtol=1e-10)
        assert p.residual < 1e-12

    def test_random_directions_non_harmonic(self):
        cone = ConeSpec.random(3, 200, seed=4)
        assert harmonic_cone_witnesses(cone, 8) == []

    def test_undersampled_rejected(self):
        with pytest.raises(ValueError):
            harmonic_cone_witnesses(ConeSpec.random(3, 5), 4)

    def test_cone_spec_validation(self):
        with pytest.raises(ValueError):
            ConeSpec(3, np.array([[1.0, 1.0, 0.0]]))
        with pytest.raises(ValueError):
            ConeSpec.k_alpha(1.2, 3)
        c = ConeSpec.k_alpha(0.4, 4, l_max=3, seed=2)
        assert np.allclose(np.abs(c.directions[:, 0]), 0.4)
        assert len(c.directions) == 4 * dim_harmonic(4, 3)
        pts = c.points([1.0, 2.0])
        assert len(pts) == 4 * len(c.directions)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_witness_soundness(self, n):
        for l in range(1, 6):
            exps, B = harmonic_basis(n, l)
            assert B.shape[1] == dim_harmonic(n, l)
        for w in harmonic_cone_witnesses(ConeSpec.k_alpha(1 / math.sqrt(n), n, l_max=6), 6):
            assert np.max(np.abs(w.laplacian())) < 1e-12
            assert w.residual < 1e-10
            assert np.linalg.norm(w.coefficients) == pytest.approx(1.0)

    def test_harmonic_basis_orthonormal(self):
        exps, B = harmonic_basis(3, 4)
        from hupsphere.hup import _monomials
        rule = quad.sphere_rule(3, 8)
        V = _monomials(rule.nodes, exps) @ B
        assert np.allclose((V.T * rule.weights) @ V, np.eye(B.shape[1]), atol=1e-12)


class TestArmitage:
    def test_documented(self):
        res = armitage_test(1 / math.sqrt(3), 3, 4)
        assert not res.non_harmonic and res.violation == (2, 0)
        assert armitage_test(0.9, 3, 12).verdict == "non-harmonic"

    def test_rejects(self):
        for a in (0.0, 1.0, -0.3):
            with pytest.raises(ValueError):
                armitage_test(a, 3, 4)
        with pytest.raises(ValueError):
            armitage_test(0.5, 2, 4)

    @pytest.mark.parametrize("n", [3, 4])
    def test_consistency_with_rank_test(self, n):
        for a in [0.12, 0.33, 0.47, 0.71, 0.86, 1 / math.sqrt(n)]:
            arm = armitage_test(a, n, 8)
            w = harmonic_cone_witnesses(ConeSpec.k_alpha(a, n, l_max=8), 8)
            assert arm.non_harmonic == (not w)


class TestCounterexamples:
    @pytest.mark.parametrize("cone", [ConeSpec.hyperplane(3, l_max=3), ConeSpec.k_alpha(1 / math.sqrt(3), 3, l_max=3)])
    def test_vanishes_on_cone_only(self, cone, rng):
        w = harmonic_cone_witnesses(cone, 3)[0]
        f = build_counterexample(w)
        lam = LambdaSet.cone(cone, 10.0)
        assert np.max(np.abs(mu_hat(f, lam.sample(100, seed=1)))) < 1e-8
        off = rng.normal(size=(100, 3)) * 4
        assert np.max(np.abs(mu_hat(f, off))) > 1e-3

    def test_rejects_bad_witness(self):
        w = harmonic_cone_witnesses(ConeSpec.hyperplane(3, l_max=2), 2)[0]
        import dataclasses
        bad = dataclasses.replace(w, residual=1e-3)
        with pytest.raises(ValueError):
            build_counterexample(bad)


class TestGeodesicProjection:
    def test_documented(self):
        f = SphericalDensity.from_coefficients(HarmonicCoefficients.from_dict(2, {(2, 0): 1.0}))
        th = math.acos(1 / math.sqrt(3))
        w = np.array([math.sin(th), 0.0, math.cos(th)])
        rep = lemma_geodesic_consistency(f, w, 2)
        assert rep.verdict == "both-small"
        rep = lemma_geodesic_consistency(f, np.array([0, 0, 1.0]), 2)
        assert rep.verdict == "both-large"
        assert min(rep.diagnostics[0].values()) > 0.1
        zero = SphericalDensity.from_coefficients(HarmonicCoefficients.zeros(2))
        rep = lemma_geodesic_consistency(zero, np.array([0, 1.0, 0]), 2)
        assert rep.diagnostics[0] == {"geodesic_max": 0.0, "projection_max": 0.0}


class TestParaboloid:
    def test_height(self):
        r = np.linspace(0.2, 9, 20)
        c = paraboloid_height(r)
        # r cos = (r sin)^2 on the sphere of radius r
        assert np.allclose(r * c, (r * r) * (1 - c * c))

    def test_zero_table(self):
        rep = paraboloid_test(HarmonicCoefficients.zeros(3), [1.3, 2.9])
        assert rep.verdict == "zero"
        assert max(e["abs"] for e in rep.residuals) == 0.0

    def test_documented_table(self):
        c = symmetric_table(3, {0: 1.0})
        rep = paraboloid_test(c, [1.3, 2.9, 4.1])
        assert rep.verdict == "nonzero"
        for e in rep.residuals:
            assert abs(complex(e["re"], e["im"]) - complex(e["direct_re"], e["direct_im"])) < 1e-8

    def test_doubling_is_stable(self, rng):
        c = _scaled_symmetric(rng, 4)
        r = [1.1, 2.3, 3.7]
        a = paraboloid_test(c, r)
        b = paraboloid_test(c, r + [x + 0.45 for x in r])
        assert a.verdict == b.verdict == "nonzero"

    def test_rejects(self):
        with pytest.raises(ValueError):
            paraboloid_test(HarmonicCoefficients.from_dict(1, {(1, 0): 1.0}), [1.0])
        with pytest.raises(ValueError):
            paraboloid_test(symmetric_table(2, {0: 1.0}), [bessel_j_zero(1.5, 1)])
        with pytest.raises(ValueError):
            paraboloid_test(symmetric_table(2, {0: 1.0}), [-1.0])


class TestGeodesicCircle:
    def test_documented(self):
        rep = geodesic_circle_test(1.0, math.pi, 4)
        assert rep.verdict == "not-hup"
        f = rep.artifacts["counterexample"]
        pts = LambdaSet.geodesic_circle(1.0, math.pi).sample(64)
        assert np.max(np.abs(mu_hat(f, pts))) < 1e-8
        rep = geodesic_circle_test(math.pi / 2, 5.0, 4)
        assert rep.verdict == "not-hup"
        assert rep.residuals[0]["l"] == 1 and rep.residuals[0]["d"] == 0
        pts = LambdaSet.geodesic_circle(math.pi / 2, 5.0).sample(64)
        assert np.max(np.abs(mu_hat(rep.artifacts["counterexample"], pts))) < 1e-8
        assert geodesic_circle_test(1.0, 5.0, 8).verdict == "hup-up-to-l_max"

    @given(st.floats(0.2, 2.9), st.floats(1.0, 12.0))
    def test_counterexample_vanishes_when_not_hup(self, alpha, R):
        rep = geodesic_circle_test(alpha, R, 6, tol=1e-3)
        if rep.verdict == "not-hup":
            f = rep.artifacts["counterexample"]
            vals = mu_hat(f, LambdaSet.geodesic_circle(alpha, R).sample(16))
            assert np.max(np.abs(vals)) < 1e-2

    def test_lambda_height(self):
        lam = LambdaSet.geodesic_circle(0.8, 4.0)
        assert lam.height == pytest.approx(4 * math.cos(0.8))
        pts = lam.sample(10)
        assert np.allclose(pts[:, 2], lam.height)
        assert np.allclose(np.linalg.norm(pts, axis=1), 4.0)

    def test_rejects(self):
        with pytest.raises(ValueError):
            geodesic_circle_test(0.0, 1.0, 3)


class TestSphericalMean:
    def test_documented(self, rng):
        x = rng.normal(size=3)
        assert spherical_mean_R(lambda p: np.ones(len(p)), x, 2.0) == pytest.approx(1.0)
        g = lambda p: np.exp(p[:, 0]) * np.sin(p[:, 1])
        assert spherical_mean_R(g, x, 1e-3) == pytest.approx(g(x[None])[0], abs=1e-6)
        g = lambda p: mu_hat_series(ONE, p)
        for _ in range(5):
            x = rng.normal(size=3) * 3
            r = rng.uniform(0.3, 8)
            rule = quad.sphere_rule(3, 60)
            assert abs(spherical_mean_R(g, x, r, rule) - math.sin(r) / r * g(x[None])[0]) < 1e-7

    def test_rejects(self):
        with pytest.raises(ValueError):
            spherical_mean_R(lambda p: p[:, 0], np.zeros(3), 0.0)


class TestHelmholtz:
    def test_documented(self, rng):
        y21 = HarmonicCoefficients.from_dict(2, {(2, 1): 1.0})
        for _ in range(10):
            x = _unit(rng, 3) * rng.uniform(0.5, 10)
            assert helmholtz_residual(ONE, x, 1e-3) < 1e-5
            assert helmholtz_residual(y21, x, 1e-3) < 1e-5
            ratio = helmholtz_residual(ONE, x, 0.08) / helmholtz_residual(ONE, x, 0.04)
            assert 3.5 < ratio < 4.5


class TestPlanarParabola:
    def test_documented(self):
        N = 256
        theta = -np.pi + 2 * np.pi * np.arange(N) / N
        zero = planar_parabola_experiment(np.zeros(N), [0.0, 1.0, 2.0])
        assert zero.diagnostics[0]["max_abs"] == 0.0
        one = planar_parabola_experiment(np.ones(N), [0.0])
        assert one.artifacts["values"][0] == pytest.approx(2 * np.pi)
        rep = planar_parabola_experiment(np.cos(theta), np.linspace(0, 2, 5))
        a1 = rep.artifacts["taylor"][1]
        assert a1 == pytest.approx(1j * np.pi, abs=1e-12)
        assert rep.diagnostics[2]["taylor_consistency"]["abs_error"] < 1e-8
        assert rep.verdict == "reported"

    def test_against_adaptive_quadrature(self):
        from scipy.integrate import quad as squad
        N = 512
        theta = -np.pi + 2 * np.pi * np.arange(N) / N
        rep = planar_parabola_experiment(np.cos(theta), [0.7, 1.9])
        for t, v in zip([0.7, 1.9], rep.artifacts["values"]):
            re = squad(lambda th: math.cos(t * math.cos(th) + t * t * math.sin(th)) * math.cos(th), -math.pi, math.pi)[0]
            im = squad(lambda th: math.sin(t * math.cos(th) + t * t * math.sin(th)) * math.cos(th), -math.pi, math.pi)[0]
            assert abs(v - complex(re, im)) < 1e-10

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            planar_parabola_experiment([], [1.0])


class TestLambdaSets:
    def test_shapes(self):
        p = LambdaSet.paraboloid().sample(30, seed=1)
        assert np.allclose(p[:, 2], p[:, 0] ** 2 + p[:, 1] ** 2)
        q = LambdaSet.planar_parabola().sample(11)
        assert np.allclose(q[:, 1], q[:, 0] ** 2)
        s = LambdaSet.sphere(2.0, 4).sample(20)
        assert np.allclose(np.linalg.norm(s, axis=1), 2.0)
        with pytest.raises(ValueError):
            LambdaSet.from_points([])
        with pytest.raises(AttributeError):
            LambdaSet.paraboloid().height
