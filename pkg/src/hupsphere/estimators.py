"""scikit-learn style wrappers for the two fit/transform-shaped operations:
the S^2 harmonic analysis/synthesis pair, and harmonic-cone detection.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import quad
from .hup import ConeSpec, harmonic_cone_witnesses, RANK_THRESHOLD
from .sphharm import HarmonicCoefficients, _norms, basis_matrix, to_spherical

__all__ = ["SphericalHarmonicTransform", "HarmonicConeDetector"]


def _check_samples(X, n_features: int, name: str) -> np.ndarray:
    # check_array refuses complex input, which both directions here need
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {X.shape}")
    if X.shape[1] != n_features:
        raise ValueError(f"{name} has {X.shape[1]} features, expected {n_features}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains NaN or infinity")
    return X.astype(complex)


class SphericalHarmonicTransform(TransformerMixin, BaseEstimator):
    """Samples on a product grid of S^2 <-> coefficient vectors ``C_k^l``.

    Parameters
    ----------
    max_degree : int
        Band limit K of the coefficient tables.
    order : int, optional
        Exactness degree of the sampling grid; defaults to ``2*K + 8`` and
        must be at least ``2*K``.

    Attributes
    ----------
    rule_ : SphereRule
        The grid; rows of ``X`` are values at ``rule_.nodes``.
    n_features_in_ : int
        Number of grid nodes.
    """

    def __init__(self, max_degree: int = 8, order: int | None = None):
        self.max_degree = max_degree
        self.order = order

    def fit(self, X=None, y=None):
        K = int(self.max_degree)
        if K < 0:
            raise ValueError("max_degree must be non-negative")
        order = 2 * K + 8 if self.order is None else int(self.order)
        if order < 2 * K:
            raise ValueError("order must be at least 2 * max_degree")
        self.rule_ = quad.sphere_rule(3, order)
        theta, phi = to_spherical(self.rule_.nodes)
        self.basis_ = basis_matrix(K, theta, phi)
        self.norms_ = _norms(K)
        self.n_features_in_ = len(self.rule_.weights)
        if X is not None:
            _check_samples(X, self.n_features_in_, "X")
        return self

    def transform(self, X):
        check_is_fitted(self, "basis_")
        X = _check_samples(X, self.n_features_in_, "X")
        return (X * self.rule_.weights) @ self.basis_.conj() / self.norms_

    def inverse_transform(self, C):
        check_is_fitted(self, "basis_")
        C = _check_samples(C, self.basis_.shape[1], "C")
        return C @ self.basis_.T

    def to_tables(self, C) -> list:
        """Wrap rows of a coefficient matrix as :class:`HarmonicCoefficients`."""
        C = _check_samples(C, self.basis_.shape[1], "C")
        return [HarmonicCoefficients(int(self.max_degree), row) for row in C]


class HarmonicConeDetector(BaseEstimator):
    """Fit on cone directions; finds harmonic polynomials vanishing on them.

    Attributes
    ----------
    witnesses_ : list of HarmonicWitness
    is_harmonic_ : bool
        True when some nonzero harmonic of degree <= ``l_max`` vanishes on the cone.
    """

    def __init__(self, l_max: int = 8, threshold: float = RANK_THRESHOLD):
        self.l_max = l_max
        self.threshold = threshold

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_samples=1)
        X = X / np.linalg.norm(X, axis=1, keepdims=True)
        self.n_features_in_ = X.shape[1]
        cone = ConeSpec(X.shape[1], X)
        self.witnesses_ = harmonic_cone_witnesses(cone, int(self.l_max), self.threshold)
        self.is_harmonic_ = bool(self.witnesses_)
        return self

    def first_degree(self):
        check_is_fitted(self, "witnesses_")
        return self.witnesses_[0].degree if self.witnesses_ else None
