import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wsgreedy.algorithms import (
    BoundInputs,
    DrgConfig,
    drg,
    drg_cost_ratio_bound,
    dual_gain_extremes,
    mrg_approximation_bound,
    mrg_zero_guarantee_delta,
    wssa_relaxation_alpha,
)

from _instances import toy

HALF_ONE_MINUS_INV_E = 0.5 * (1.0 - math.exp(-1.0))


def test_mrg_bound_submodular_full_confidence():
    b = mrg_approximation_bound(BoundInputs(mu=1.0, w_f=1.0, delta=1.0, U=5, c_max=2.0, budget=4.0))
    assert b == pytest.approx(0.31606027941427883, abs=1e-12)
    assert b == pytest.approx(HALF_ONE_MINUS_INV_E, abs=1e-15)


def test_mrg_bound_vanishes_at_zero_guarantee_delta():
    mu, B, cmax, U = 0.8, 5.0, 2.0, 4
    delta = mrg_zero_guarantee_delta(mu, B, cmax, U)
    b = mrg_approximation_bound(BoundInputs(mu=mu, w_f=1.3, delta=delta, U=U, c_max=cmax, budget=B))
    assert b == pytest.approx(0.0, abs=1e-12)


def test_mrg_bound_hand_value():
    # penalty (1/2) * sqrt(2 * ln 10); exponent -(0.9 - penalty) / 1.5
    penalty = 0.5 * math.sqrt(0.5 * 4 * math.log(10.0))
    expected = (1 - math.exp(-(0.9 - penalty) / 1.5)) / (2 * 1.5**2)
    b = mrg_approximation_bound(BoundInputs(mu=0.9, w_f=1.5, delta=0.1, U=4, c_max=1.0, budget=2.0))
    assert b == pytest.approx(expected, rel=1e-12)


def test_mrg_bound_may_be_negative():
    b = mrg_approximation_bound(BoundInputs(mu=0.1, w_f=1.0, delta=1e-6, U=50, c_max=2.0, budget=2.0))
    assert b < 0


@given(st.floats(0.05, 1.0), st.floats(1.0, 4.0), st.floats(0.01, 1.0), st.integers(1, 100))
def test_mrg_bound_monotone_in_delta(mu, w, delta, U):
    lo = mrg_approximation_bound(BoundInputs(mu=mu, w_f=w, delta=delta, U=U, c_max=2.0, budget=10.0))
    hi = mrg_approximation_bound(BoundInputs(mu=mu, w_f=w, delta=1.0, U=U, c_max=2.0, budget=10.0))
    assert lo <= hi + 1e-15


def test_mrg_bound_errors():
    with pytest.raises(ValueError):
        mrg_approximation_bound(BoundInputs(U=1, c_max=1.0, budget=0.0))
    with pytest.raises(ValueError):
        mrg_approximation_bound(BoundInputs(U=1, c_max=1.0, budget=1.0, delta=0.0))


def test_drg_bound_submodular_reduces_to_log_ratio():
    for M, m in [(4.0, 1.0), (2.0, 2.0), (10.0, 0.1)]:
        b = drg_cost_ratio_bound(BoundInputs(mu=1.0, w_f=1.0, delta=1.0, L=3, M=M, m=m, sq_cost=9.0))
        assert b == pytest.approx(1.0 + math.log(M / m), abs=1e-12)


def test_drg_bound_hand_value():
    inp = BoundInputs(mu=0.5, w_f=2.0, delta=0.2, L=3, M=6.0, m=2.0, opt_cost=3.0, sq_cost=5.0)
    expected = (2.0 / 0.5) * (1 + 2 * math.log(2.0) + math.log(3.0)) + math.sqrt(
        0.5 * math.log(5.0) * 5.0
    ) / (0.5 * 3.0)
    assert drg_cost_ratio_bound(inp) == pytest.approx(expected, rel=1e-12)


def test_drg_bound_undefined_for_zero_m():
    with pytest.raises(ValueError, match="undefined"):
        drg_cost_ratio_bound(BoundInputs(M=1.0, m=0.0))


def test_wssa_alpha_probability():
    inp = BoundInputs(mu=1.0, w_f=1.0, delta=0.1, L=2, M=3.0, m=1.0, opt_cost=2.0, sq_cost=2.0)
    alpha, prob = wssa_relaxation_alpha(inp, P=4)
    assert alpha == drg_cost_ratio_bound(inp)
    assert prob == pytest.approx(0.9**4)


def test_dual_gain_extremes_toy():
    f, c = toy()
    t = drg(f, c, DrgConfig(threshold=3.0, r=3))
    M, m, L = dual_gain_extremes(f, t)
    # before the last addition S = {e1}; gains e2: 1, e3: 1
    assert (M, m, L) == (3.0, 1.0, 2)
