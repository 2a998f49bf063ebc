import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from hupsphere import HarmonicConeDetector, SphericalHarmonicTransform
from hupsphere.hup import ConeSpec
from hupsphere.suites import random_band_limited


def test_transform_round_trip(rng):
    K = 6
    est = SphericalHarmonicTransform(max_degree=K).fit()
    tables = [random_band_limited(rng, K) for _ in range(3)]
    X = np.array([c(est.rule_.nodes) for c in tables])
    C = est.transform(X)
    for row, c in zip(C, tables):
        assert np.max(np.abs(row - c.values)) < 1e-9 * np.max(np.abs(c.values))
    assert np.max(np.abs(est.inverse_transform(C) - X)) < 1e-9 * np.max(np.abs(X))
    back = est.to_tables(C)
    assert back[0].K == K


def test_transform_validation():
    est = SphericalHarmonicTransform(max_degree=3)
    with pytest.raises(Exception):
        est.transform(np.zeros((1, 4)))
    est.fit()
    with pytest.raises(ValueError):
        est.transform(np.zeros((1, 3)))
    with pytest.raises(ValueError):
        est.transform(np.full((1, est.n_features_in_), np.nan))
    with pytest.raises(ValueError):
        SphericalHarmonicTransform(max_degree=5, order=4).fit()


def test_params_and_clone():
    est = SphericalHarmonicTransform(max_degree=4, order=12)
    assert est.get_params() == {"max_degree": 4, "order": 12}
    assert clone(est).get_params() == est.get_params()
    pipe = make_pipeline(SphericalHarmonicTransform(max_degree=2))
    pipe.fit(np.ones((1, SphericalHarmonicTransform(max_degree=2).fit().n_features_in_)))


def test_cone_detector():
    det = HarmonicConeDetector(l_max=4).fit(ConeSpec.k_alpha(1 / math.sqrt(3), 3, l_max=4).directions)
    assert det.is_harmonic_ and det.first_degree() == 2
    det = HarmonicConeDetector(l_max=4).fit(ConeSpec.k_alpha(0.8, 3, l_max=4).directions * 3.0)
    assert not det.is_harmonic_ and det.first_degree() is None
    assert det.n_features_in_ == 3
