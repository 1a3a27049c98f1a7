import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpc_entropy.errors import DomainError
from qpc_entropy.models import BernoulliSet, Gaussian, ImperfectTransmission, log_chi
from qpc_entropy.spectral import (
    NORMALIZATIONS,
    counting_field,
    entropy_from_measure,
    gaussian_measure,
    imperfect_measure,
    mu_from_chi,
    mu_imperfect,
    rescaling_factor,
    support_edges,
)

# 30-digit tanh-sinh quadrature of the shape integrals (mpmath, substitution
# x^2 = 1 - D + s^2 removing the edge singularity), frozen before the build
F_REFERENCE = {
    0.05: 0.09166107050,
    0.1: 0.1630016018534,
    0.5: 0.58964455935249262,
    0.75: 0.8047522003414571,
}

DGRID = np.round(np.arange(0.05, 1.0001, 0.05), 10)


def test_support_edges():
    assert support_edges(0.64) == pytest.approx((0.2, 0.8), abs=1e-15)
    assert support_edges(1.0) == (0.5, 0.5)
    with pytest.raises(DomainError):
        support_edges(0.0)


@pytest.mark.parametrize("D", sorted(F_REFERENCE))
def test_rescaling_factor_reference(D):
    assert rescaling_factor(D) == pytest.approx(F_REFERENCE[D], abs=1e-10)


def test_rescaling_factor_shape():
    assert rescaling_factor(1.0) == 1.0
    F = np.array([rescaling_factor(float(D)) for D in DGRID])
    assert np.all(np.diff(F) > 0)
    assert np.all(F[DGRID <= 0.5] > DGRID[DGRID <= 0.5])


@pytest.mark.parametrize("D", [0.05, 0.5, 0.9])
def test_rescaling_factor_independent_of_G(D):
    assert rescaling_factor(D, G=1.0) == rescaling_factor(D, G=17.3)


def test_rescaling_factor_matches_entropy_ratio():
    G = 4.0
    ratio = entropy_from_measure(imperfect_measure(G, 0.3)) / entropy_from_measure(imperfect_measure(G, 1.0))
    assert ratio == pytest.approx(rescaling_factor(0.3), rel=1e-10)


@pytest.mark.parametrize("c2", [0.1, 1.0, 10.0])
def test_gaussian_measure_entropy(c2):
    assert abs(entropy_from_measure(gaussian_measure(c2)) / c2 - math.pi**2 / 3) <= 1e-7


def test_perfect_transmission_normalization():
    # calibrated density: S = pi^2/3 * C2 with C2 = G / (2 pi^2)
    G = 3.0
    assert entropy_from_measure(imperfect_measure(G, 1.0)) == pytest.approx(G / 6, rel=1e-9)
    printed = entropy_from_measure(imperfect_measure(G, 1.0, normalization="printed"))
    assert printed == pytest.approx(2 * G / 6, rel=1e-9)
    assert NORMALIZATIONS["printed"] == 2 * NORMALIZATIONS["calibrated"]


@settings(max_examples=80, deadline=None)
@given(st.floats(0.01, 1.0), st.floats(1e-4, 1 - 1e-4))
def test_density_symmetric(D, z):
    a = mu_imperfect(1.0, D, z)
    b = mu_imperfect(1.0, D, 1.0 - z)
    assert a == pytest.approx(b, rel=1e-9) or (math.isinf(a) and math.isinf(b))


@pytest.mark.parametrize("D", [0.3, 0.64, 0.9])
def test_zero_set_matches_support_edges(D):
    step = 1e-4
    zm, zp = support_edges(D)
    z = np.arange(step, 1.0, step)
    mu = mu_imperfect(1.0, D, z)
    zero = z[mu == 0.0]
    assert abs(zero.min() - zm) <= step
    assert abs(zero.max() - zp) <= step
    assert np.all(mu[(z < zm - step) | (z > zp + step)] > 0)


@pytest.mark.parametrize("z", [0.02, 0.1, 0.15, 0.85, 0.97])
def test_density_from_generating_function(z):
    G, D = 2.0, 0.64
    chi = lambda lam: log_chi(ImperfectTransmission(G, D), lam)
    assert mu_from_chi(chi, z) == pytest.approx(mu_imperfect(G, D, z), rel=1e-7)


def test_density_from_gaussian_generating_function():
    G = 5.0
    for z in (0.05, 0.3, 0.5, 0.8):
        got = mu_from_chi(lambda lam: log_chi(Gaussian(G), lam), z)
        assert got == pytest.approx(G / (2 * math.pi**2) / (z * (1 - z)), rel=1e-7)


def test_density_vanishes_in_gap():
    chi = lambda lam: log_chi(ImperfectTransmission(1.0, 0.64), lam)
    assert mu_from_chi(chi, 0.5) < 1e-8
    assert mu_from_chi(chi, 0.3) < 1e-8


def test_density_of_isolated_level_away_from_it():
    chi = lambda lam: log_chi(BernoulliSet([0.3]), lam)
    assert mu_from_chi(chi, 0.7) < 1e-8


def test_counting_field_real_on_axis_midpoint():
    assert counting_field(0.5) == pytest.approx(math.pi)


def test_domain_errors():
    with pytest.raises(DomainError):
        mu_imperfect(1.0, 0.5, 0.0)
    with pytest.raises(DomainError):
        mu_imperfect(1.0, 1.5, 0.3)
    with pytest.raises(DomainError):
        rescaling_factor(0.0)
    with pytest.raises(DomainError):
        gaussian_measure(-1.0)
