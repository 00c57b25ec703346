import math

import numpy as np
import pytest

from discrete_epi import OracleResolutionError, ParameterError, make_custom, make_delta, make_geometric, make_poisson
from discrete_epi.husimi import (
    DEFAULT_SAMPLES, TAIL_TOL, check_scaled_convolution, husimi_forward, husimi_values, required_u_max, tail_mass,
)


def test_vacuum_profile():
    r = husimi_forward(make_delta(0))
    assert np.allclose(r.values, np.exp(-r.grid), atol=1e-15)


@pytest.mark.parametrize("lam", [0.3, 1.0, 4.0])
def test_geometric_profile(lam):
    r = husimi_forward(make_geometric(lam))
    expected = np.exp(-r.grid / (1 + lam)) / (1 + lam)
    assert np.max(np.abs(r.values - expected)) < 1e-11


@pytest.mark.parametrize("x", [make_delta(0), make_delta(5), make_poisson(3.0), make_custom([0.2, 0, 0.3, 0.5])])
def test_normalization(x):
    assert abs(husimi_forward(x).mass() - 1) <= 1e-6


def test_tail_mass_matches_quadrature():
    x = make_custom([0.5, 0.25, 0.25])
    u = np.linspace(6.0, 80.0, 200001)
    assert tail_mass(x, 6.0) == pytest.approx(np.trapezoid(husimi_values(x, u), u), rel=1e-6)
    assert tail_mass(x, required_u_max(x)) <= TAIL_TOL


def test_forward_guards():
    with pytest.raises(OracleResolutionError):
        husimi_forward(make_delta(3), u_max=5.0)
    with pytest.raises(OracleResolutionError):
        husimi_forward(make_delta(0), step=1.0)


def test_scaled_convolution_vacuum():
    for eta in (0.2, 0.5, 0.8):
        assert check_scaled_convolution(make_delta(0), make_delta(0), eta) <= 1e-6


def test_scaled_convolution_geometric_vacuum():
    assert check_scaled_convolution(make_geometric(1.0), make_delta(0), 0.5) <= 1e-4


def test_scaled_convolution_single_photons():
    d = check_scaled_convolution(make_delta(1), make_delta(1), 0.5)
    assert d <= 1e-3


def test_scaled_convolution_rejects_bad_grid():
    with pytest.raises(OracleResolutionError):
        check_scaled_convolution(make_delta(1), make_delta(1), 0.5, step=10.0)
    with pytest.raises(OracleResolutionError):
        check_scaled_convolution(make_delta(4), make_delta(1), 0.5, u_max=4.0)
    with pytest.raises(ParameterError):
        check_scaled_convolution(make_delta(1), make_delta(1), 1.0)


def test_refinement_reduces_discrepancy():
    x, y, eta = make_geometric(1.0), make_delta(0), 0.5
    u_max = required_u_max(x)
    half = math.sqrt(u_max)
    coarse = check_scaled_convolution(x, y, eta, u_max=u_max, step=2 * half / 16)
    fine = check_scaled_convolution(x, y, eta, u_max=u_max, step=2 * half / 32)
    assert fine * 2 <= coarse
    assert DEFAULT_SAMPLES >= 512


def test_profiles_separate_the_two_additions():
    # the thin-then-add pmf has a visibly different profile, so passing the
    # identity above singles out the beamsplitter result
    u = np.linspace(0, 10, 11)
    yj = husimi_values(make_custom([0.25, 0.5, 0.25]), u)
    bs = husimi_values(make_custom([0.5, 0, 0.5]), u)
    assert np.max(np.abs(yj - bs)) > 1e-2
