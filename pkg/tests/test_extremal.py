import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heatgrad.errors import DomainError, PreconditionError
from heatgrad.extremal import (DiscreteHolderInstance, F_at_axis, F_at_axis_kappa0,
                               SphereFunctionalParams, compute_U, compute_uv_gap, compute_V,
                               eval_F, holder_majorization_check, maximize_F,
                               random_holder_instance, sphere_weight)
from heatgrad.sphere_quad import mc_integrate_biaxial


def test_params_validation():
    with pytest.raises(DomainError):
        SphereFunctionalParams(1, 0.0, 0.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        SphereFunctionalParams(3, -1.0, 0.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        SphereFunctionalParams(3, 1.0, 0.0, 0.0, 2.0)
    with pytest.raises(DomainError):
        SphereFunctionalParams(3, 0.0, 0.0, -1.5, 0.0)  # not integrable at kappa = 0


def test_lemma_flag():
    assert SphereFunctionalParams(3, 1.0, 1.0, 1.0, 0.5).lemma_applies
    assert not SphereFunctionalParams(3, 1.0, 1.0, 1.0, -0.5).lemma_applies


def test_eval_F_constant_weight():
    prm = SphereFunctionalParams(3, 0.0, 0.0, 0.0, 0.0)
    for theta in (0.0, 0.7, math.pi / 2):
        assert eval_F(prm, theta) == pytest.approx(4 * math.pi / 3, rel=1e-12)


def test_eval_F_axis_matches_zonal_and_monte_carlo():
    prm = SphereFunctionalParams(3, 1.0, 1.0, 1.0, 0.5)
    val = eval_F(prm, 0.0)
    assert val == pytest.approx(F_at_axis(prm), rel=1e-10)
    mc, se = mc_integrate_biaxial(lambda s, w: sphere_weight(prm, s), 3, 0.0, 10 ** 6,
                                  np.random.default_rng(11), w_power=prm.w_power)
    assert abs(mc - val) < 3 * se


@pytest.mark.parametrize("n", [2, 3, 5])
def test_kappa0_closed_form(n):
    prm = SphereFunctionalParams(n, 0.0, 1.5, 0.7, 0.0)
    assert eval_F(prm, 0.0) == pytest.approx(F_at_axis_kappa0(prm), rel=1e-9)


def test_eval_F_even_in_theta():
    prm = SphereFunctionalParams(4, 0.5, 1.0, 0.5, 1.0)
    for th in (0.2, 1.0):
        assert eval_F(prm, th) == pytest.approx(eval_F(prm, -th), rel=1e-12)


def test_eval_F_polar_schemes_agree():
    prm = SphereFunctionalParams(3, 0.4, 2.0, 1.0, 0.5)
    for th in (0.1, 0.8, 1.4):
        assert eval_F(prm, th, polar="z") == pytest.approx(eval_F(prm, th), rel=1e-9)


def test_maximize_axis_example():
    res = maximize_F(SphereFunctionalParams(3, 1.0, 2.0, 1.0, 0.0))
    assert res.theta_star <= 1e-4
    assert res.value == pytest.approx(F_at_axis(SphereFunctionalParams(3, 1.0, 2.0, 1.0, 0.0)), rel=1e-9)


def test_maximize_flat_objective_is_degenerate():
    res = maximize_F(SphereFunctionalParams(3, 0.0, 0.0, 0.0, 0.0))
    assert res.degenerate
    assert res.theta_star == 0.0
    assert res.value == pytest.approx(4 * math.pi / 3, rel=1e-12)


def test_maximize_against_dense_grid():
    prm = SphereFunctionalParams(4, 2.5, 1.5, 0.7, 1.3)
    res = maximize_F(prm)
    grid = np.linspace(0.0, math.pi / 2, 2000)[::50]
    dense = max(eval_F(prm, th) for th in grid)
    assert res.theta_star <= 1e-4
    assert res.value >= dense * (1 - 1e-10)
    assert res.value == pytest.approx(F_at_axis(prm), rel=1e-9)


def test_maximize_never_below_axis_value():
    prm = SphereFunctionalParams(3, 0.3, 0.5, 0.0, 1.9)
    res = maximize_F(prm, grid_size=64)
    assert res.value >= eval_F(prm, 0.0) * (1 - 1e-12)
    assert res.value <= res.grid_max * (1 + 1e-9)


def test_maximizer_off_axis_outside_lemma_range():
    # nu < 0 lies outside the lemma; the maximiser is then not forced to the axis
    prm = SphereFunctionalParams(3, 0.0, 0.0, 3.0, -1.0)
    res = maximize_F(prm, grid_size=64)
    assert res.value >= max(eval_F(prm, 0.0), eval_F(prm, math.pi / 2)) * (1 - 1e-12)


def test_uv_examples():
    flat = SphereFunctionalParams(3, 0.0, 0.0, 0.0, 0.0)
    assert compute_U(flat) == pytest.approx(4 * math.pi / 3, rel=1e-12)
    assert compute_V(flat) == pytest.approx(4 * math.pi / 3, rel=1e-12)
    assert compute_U(SphereFunctionalParams(3, 1.0, 0.0, 0.0, 0.0)) > compute_V(SphereFunctionalParams(3, 1.0, 0.0, 0.0, 0.0))


@pytest.mark.parametrize("n, kappa, lam, mu", [(2, 0.5, 2.0, 1.0), (3, 1.0, 0.0, 0.0), (6, 10.0, 3.5, 2.5), (3, 0.0, 1.0, 1.0)])
def test_uv_integration_by_parts(n, kappa, lam, mu):
    prm = SphereFunctionalParams(n, kappa, lam, mu, 0.0)
    U, V, gap = compute_U(prm), compute_V(prm), compute_uv_gap(prm)
    assert U == pytest.approx((mu + 1) * V + gap, rel=1e-10)
    if kappa > 0:
        assert gap > 0 and U > V


def test_holder_single_atom_and_beta_zero():
    inst = DiscreteHolderInstance([1.0], [2.0], [[1.0, 0.5, 1.0]], 0, 1.0, 1.0, 2.0)
    assert holder_majorization_check(inst) == (True, None)
    rng = np.random.default_rng(5)
    for _ in range(20):
        assert holder_majorization_check(random_holder_instance(rng, beta_zero=True))[0]


def test_holder_premise_violation_raises():
    inst = DiscreteHolderInstance([1.0, 1.0], [1.0, 1.0], [[1.0, 2.0], [1.0, 2.0]], 0, 1.0, 1.0, 2.0)
    with pytest.raises(PreconditionError) as info:
        holder_majorization_check(inst)
    assert info.value.witness == 1


def test_holder_instance_validation():
    with pytest.raises(DomainError):
        DiscreteHolderInstance([1.0], [1.0], [[1.0]], 0, 1.0, 1.0, 2.5)
    with pytest.raises(DomainError):
        DiscreteHolderInstance([1.0, 2.0], [1.0], [[1.0]], 0, 1.0, 1.0, 2.0)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_holder_random_instances(seed):
    inst = random_holder_instance(np.random.default_rng(seed))
    assert holder_majorization_check(inst)[0]
