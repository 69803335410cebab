import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heatgrad.errors import DomainError
from heatgrad.specfun import (IncompleteGammaArgs, gamma, omega_weight, omega_weight_du,
                              sphere_area, upper_gamma, upper_incomplete_gamma)


def mp_upper(alpha, x):
    return float(mpmath.gammainc(alpha, a=x))


@pytest.mark.parametrize("alpha, expected", [
    (1.0, 1.0),
    (0.5, math.sqrt(math.pi)),
    (2.5, 0.75 * math.sqrt(math.pi)),
])
def test_gamma_values(alpha, expected):
    assert gamma(alpha) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_gamma_rejects_bad_arguments(bad):
    with pytest.raises(DomainError):
        gamma(bad)


@pytest.mark.parametrize("alpha, x, expected", [
    (1.0, 0.0, 1.0),
    (1.0, 2.5, math.exp(-2.5)),
    (3.0, 1.0, 5.0 / math.e),
])
def test_upper_gamma_examples(alpha, x, expected):
    assert upper_incomplete_gamma(IncompleteGammaArgs(alpha, x)) == pytest.approx(expected, rel=1e-12)


def test_upper_gamma_integer_series():
    # Gamma(m, x) = (m-1)! e^{-x} sum_{k<m} x^k / k!
    for m in (1, 2, 4, 7, 12):
        for x in (0.2, 3.0, 15.0, 80.0):
            series = math.factorial(m - 1) * math.exp(-x) * sum(x ** k / math.factorial(k) for k in range(m))
            assert upper_gamma(m, x) == pytest.approx(series, rel=1e-12)


@pytest.mark.parametrize("args", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.1), (1.0, math.inf), (math.nan, 1.0)])
def test_incomplete_gamma_args_validation(args):
    with pytest.raises(DomainError):
        IncompleteGammaArgs(*args)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 60.0), st.floats(0.0, 200.0))
def test_upper_gamma_against_mpmath(alpha, x):
    ref = mp_upper(alpha, x)
    if ref < 1e-290:
        return  # below double range
    assert upper_gamma(alpha, x) == pytest.approx(ref, rel=1e-12)


@settings(max_examples=150, deadline=None)
@given(st.floats(0.05, 50.0), st.floats(0.0, 150.0))
def test_recurrence(alpha, x):
    lhs = upper_gamma(alpha + 1, x)
    rhs = alpha * upper_gamma(alpha, x) + x ** alpha * math.exp(-x)
    assert lhs == pytest.approx(rhs, rel=1e-11)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 40.0), st.floats(0.0, 60.0))
def test_upper_plus_lower_is_complete(alpha, x):
    # s = v^(1/alpha) removes the endpoint singularity of the lower integral
    with mpmath.workdps(30):
        lower = float(mpmath.quad(lambda v: mpmath.exp(-v ** (1 / mpmath.mpf(alpha))), [0, x ** alpha])
                      / alpha) if x > 0 else 0.0
    assert upper_gamma(alpha, x) + lower == pytest.approx(math.gamma(alpha), rel=1e-10)


def test_monotone_in_x():
    xs = np.linspace(0.0, 200.0, 4001)
    for alpha in (0.3, 1.0, 4.5, 30.0, 60.0):
        vals = upper_gamma(alpha, xs)
        assert np.all(np.diff(vals) <= np.spacing(vals[:-1]))


def test_vectorised_matches_scalar():
    xs = np.array([0.0, 0.5, 3.0, 40.0])
    vec = upper_gamma(2.5, xs)
    assert np.allclose(vec, [upper_gamma(2.5, float(x)) for x in xs], rtol=0, atol=0)


def test_omega_weight_examples():
    assert omega_weight(0.0, 2.0, 0.3) == pytest.approx(2.0, rel=1e-14)
    assert omega_weight(1.0, 0.0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-12)
    expected = 6 * math.exp(-8) * (1 + 8 + 32 + 512 / 6)
    assert omega_weight(2.0, 3.0, 0.5) == pytest.approx(expected, rel=1e-12)
    assert omega_weight(2.0, 3.0, 0.5) == pytest.approx(mp_upper(4, 8), rel=1e-12)


def test_omega_weight_limits_at_zero():
    assert omega_weight(1.5, 2.0, 0.0) == 0.0
    assert omega_weight(0.0, 2.0, 0.0) == pytest.approx(2.0)


def test_omega_weight_rejects_out_of_range():
    with pytest.raises(DomainError):
        omega_weight(1.0, 1.0, 1.5)
    with pytest.raises(DomainError):
        omega_weight(-1.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        omega_weight(1.0, -0.5, 0.5)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 20.0), st.floats(0.0, 10.0), st.floats(1e-3, 1.0))
def test_omega_weight_even(kappa, lam, u):
    assert omega_weight(kappa, lam, u) == omega_weight(kappa, lam, -u)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 20.0), st.floats(0.0, 10.0), st.floats(0.05, 0.95), st.floats(0.01, 0.5))
def test_omega_weight_increasing(kappa, lam, u1, du):
    u2 = min(1.0, u1 + du)
    a, b = omega_weight(kappa, lam, u1), omega_weight(kappa, lam, u2)
    if a > 1e-280:
        assert b > a


def test_omega_weight_derivative_matches_finite_difference():
    for kappa, lam, u in ((0.5, 2.0, 0.6), (3.0, 0.0, 0.9), (1.0, 4.5, 0.4)):
        h = 1e-6
        fd = (omega_weight(kappa, lam, u + h) - omega_weight(kappa, lam, u - h)) / (2 * h)
        assert omega_weight_du(kappa, lam, u) == pytest.approx(fd, rel=1e-6)


@pytest.mark.parametrize("n, expected", [(1, 2.0), (2, 2 * math.pi), (3, 4 * math.pi), (4, 2 * math.pi ** 2)])
def test_sphere_area(n, expected):
    assert sphere_area(n) == pytest.approx(expected, rel=1e-14)


def test_sphere_area_rejects_zero():
    with pytest.raises(DomainError):
        sphere_area(0)
