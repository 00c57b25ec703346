import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from discrete_epi import (
    EntropyKind, InversionError, ParameterError, entropy, eg, ep, make_bernoulli, make_delta,
    make_geometric, make_poisson, mean, ve, vg, vp,
)
from discrete_epi.entropy_power import (
    GEOMETRIC, POISSON, functional, geometric_entropy_derivative, invert_geometric_entropy,
    invert_poisson_entropy,
)

from conftest import pmfs
from oracles import geometric_entropy_series


def test_eg_values():
    assert eg(0) == 0.0
    assert eg(1) == pytest.approx(2 * math.log(2), abs=1e-15)


@pytest.mark.parametrize("lam", [0.5, 2.0, 10.0])
def test_eg_matches_series_and_pmf(lam):
    assert abs(eg(lam) - geometric_entropy_series(lam)) < 1e-8
    assert abs(eg(lam) - entropy(make_geometric(lam))) < 1e-8


def test_eg_large_lambda_no_cancellation():
    lam = 1e12
    assert eg(lam) == pytest.approx(math.log(lam) + 1, rel=1e-12)


@pytest.mark.parametrize("lam", [0.0, 0.01, 1.0, 7.5, 60.0])
def test_ep_consistent_with_pmf(lam):
    assert abs(ep(lam) - entropy(make_poisson(lam))) < 1e-10


@pytest.mark.parametrize("lam", [0.5, 1.0, 5.0])
def test_poisson_below_geometric(lam):
    assert ep(lam) <= eg(lam)


def test_monotone_on_log_grid():
    lams = np.logspace(-6, 4, 300)
    g = [eg(v) for v in lams]
    p = [ep(v) for v in lams[:200]]
    assert all(b > a for a, b in zip(g, g[1:]))
    assert all(b > a for a, b in zip(p, p[1:]))


def test_derivative_is_log_ratio():
    lam, h = 2.3, 1e-6
    fd = (eg(lam + h) - eg(lam - h)) / (2 * h)
    assert geometric_entropy_derivative(lam) == pytest.approx(fd, rel=1e-8)
    assert geometric_entropy_derivative(lam) == pytest.approx(math.log(1 + lam) - math.log(lam))


def test_entropy_powers_examples():
    assert vg(make_delta(4)) == 0.0
    assert vp(make_delta(0)) == 0.0
    assert abs(vg(make_geometric(2)) - 2) < 1e-8
    assert abs(vp(make_poisson(3)) - 3) < 1e-8
    assert ve(make_bernoulli(0.5)) == pytest.approx(2.0, abs=1e-15)


@pytest.mark.parametrize("s", [1e-9, 0.1, 1.0, 5.0, 50.0])
def test_inversion_roundtrip(s):
    assert abs(eg(invert_geometric_entropy(s)) - s) <= 1e-10
    assert abs(ep(invert_poisson_entropy(s)) - s) <= 1e-10 * max(1.0, s)


def test_inversion_rejects_bad_input():
    with pytest.raises(ParameterError):
        invert_geometric_entropy(-1.0)
    with pytest.raises(ParameterError):
        invert_poisson_entropy(float("inf"))


def test_inversion_huge_entropy_fails_cleanly():
    with pytest.raises(InversionError):
        invert_geometric_entropy(900.0)


def test_functional_lookup():
    assert functional("g") is GEOMETRIC
    assert functional(EntropyKind.POISSON) is POISSON
    assert functional("exponential").kind is EntropyKind.EXPONENTIAL
    with pytest.raises(ParameterError):
        functional("z")


def test_power_derivatives_consistent():
    for fn, lam in ((GEOMETRIC, 1.7), (POISSON, 4.0)):
        h = 1e-5
        fd = 2 * h / (fn.eval(lam + h) - fn.eval(lam - h))
        assert fn.power_derivative(lam) == pytest.approx(fd, rel=1e-5)
    assert functional("e").power_derivative(3.0) == 3.0


@given(pmfs(max_support=20))
def test_vg_below_mean(x):
    assert vg(x) <= mean(x) + 1e-8


@given(pmfs(max_support=20))
def test_powers_non_negative(x):
    assert vg(x) >= 0 and vp(x) >= 0 and ve(x) >= 1.0


@given(st.floats(0.0, eg(1e3)))
def test_roundtrip_property(s):
    assert abs(eg(invert_geometric_entropy(s)) - s) <= 1e-10
