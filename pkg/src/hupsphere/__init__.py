"""Numerical harmonic analysis on spheres for Heisenberg uniqueness pairs.

Special functions, sphere quadrature, spherical-harmonic projections, the
Funk-Hecke and plane-wave identities, harmonic-cone detection and
counterexample measures.
"""
from .estimators import HarmonicConeDetector, SphericalHarmonicTransform
from .funkhecke import (
    PlanewaveConstant,
    fit_planewave_constant,
    funk_hecke_coefficient,
    geodesic_mean_harmonic_factor,
    planewave_transform,
)
from .hup import (
    ConeSpec,
    HarmonicWitness,
    LambdaSet,
    armitage_test,
    build_counterexample,
    geodesic_circle_test,
    harmonic_cone_witnesses,
    helmholtz_residual,
    lemma_geodesic_consistency,
    mu_hat,
    mu_hat_series,
    paraboloid_test,
    planar_parabola_experiment,
    radial_profile_transform,
    spherical_mean_R,
)
from .quad import gauss_legendre, geodesic_mean, integrate, sphere_rule
from .reports import Report
from .specfun import BesselOrder, assoc_legendre, bessel_j, bessel_j_zero, gegenbauer, gegenbauer_deriv
from .sphharm import (
    HarmonicCoefficients,
    SphericalDensity,
    cesaro_sum,
    cesaro_weight,
    dim_harmonic,
    expand,
    is_symmetric_class,
    project,
    ylm,
    zonal,
)

__version__ = "0.1.0"
