import math

import numpy as np
import pytest

from wsgreedy.dynest import (
    LorenzParams,
    SigmaParams,
    UkfBelief,
    advance_truth,
    clean_covariance,
    integrate,
    kalman_identity_update,
    lorenz_derivative,
    lorenz_jacobian,
    rk4_step,
    sigma_points,
    step_truth,
    ukf_predict,
    ukf_predict_many,
    ukf_update,
)

P = LorenzParams()


def random_spd(rng, scale=5.0):
    A = rng.normal(size=(3, 3))
    return A @ A.T + scale * rng.uniform(0.1, 1.0) * np.eye(3)


def test_fixed_points():
    assert np.allclose(lorenz_derivative(np.zeros(3), P), 0.0)
    assert np.allclose(lorenz_derivative(P.fixed_point(), P), 0.0, atol=1e-12)


def test_derivative_batches():
    x = np.random.default_rng(0).normal(size=(4, 2, 3))
    d = lorenz_derivative(x, P)
    assert d.shape == x.shape
    assert np.allclose(d[1, 1], lorenz_derivative(x[1, 1], P))


def test_jacobian_finite_difference():
    x = np.array([1.5, -2.0, 20.0])
    h = 1e-6
    fd = np.column_stack(
        [(lorenz_derivative(x + h * e, P) - lorenz_derivative(x - h * e, P)) / (2 * h) for e in np.eye(3)]
    )
    assert np.allclose(lorenz_jacobian(x, P), fd, atol=1e-8)


def test_rk4_fourth_order():
    x0 = np.array([1.0, 1.0, 20.0])
    fast = LorenzParams(kappa=1.0)
    T = 0.5

    def run(h):
        x = x0.copy()
        for _ in range(int(round(T / h))):
            x = rk4_step(x, fast, h)
        return x

    ref = run(T / 4096)
    errs = [np.linalg.norm(run(T / n) - ref) for n in (64, 128)]
    order = math.log2(errs[0] / errs[1])
    assert order >= 3.9


def test_integrate_substeps_and_zero_duration():
    x0 = np.array([1.0, 2.0, 25.0])
    assert np.array_equal(integrate(x0, P, 0.0), x0)
    one = integrate(x0, P, 3.0)
    manual = x0
    for _ in range(3):
        manual = rk4_step(manual, P, 1.0)
    assert np.allclose(one, manual)
    with pytest.raises(ValueError):
        integrate(x0, P, -1.0)


def test_truth_noise_statistics():
    # zero drift leaves only the sqrt(dt) L xi increment
    still = LorenzParams(kappa=0.0, process_cov=np.diag([0.1, 0.2, 0.3]))
    rng = np.random.default_rng(1)
    x0 = np.zeros((20000, 3))
    x1 = step_truth(x0, still, 4.0, rng)
    cov = np.cov(x1.T)
    assert np.allclose(cov, 4.0 * still.process_cov, atol=0.05)


def test_advance_truth_reproducible_and_bounded():
    a = advance_truth(np.array([1.0, 1.0, 25.0]), P, 6000.0, np.random.default_rng(3))
    b = advance_truth(np.array([1.0, 1.0, 25.0]), P, 6000.0, np.random.default_rng(3))
    assert np.array_equal(a, b)
    assert np.all(np.abs(a) < 80)


def test_lorenz_params_validation():
    with pytest.raises(ValueError):
        LorenzParams(dt=0.0)
    with pytest.raises(ValueError):
        LorenzParams(process_cov=-np.eye(3))


def test_sigma_weights_sum_to_one():
    for sp in (SigmaParams(), SigmaParams(alpha=1.0), SigmaParams(alpha=0.5, kappa=1.0)):
        _, wm, wc = sp.weights(3)
        assert wm.sum() == pytest.approx(1.0)
        assert wc.sum() == pytest.approx(1.0 + 1.0 - sp.alpha**2 + sp.beta)


@pytest.mark.parametrize("sigma", [SigmaParams(), SigmaParams(alpha=1.0)])
def test_sigma_points_recover_moments(sigma):
    rng = np.random.default_rng(2)
    m, C = rng.normal(size=3), random_spd(rng)
    pts, wm, wc = sigma_points(m, C, sigma)
    mean = wm @ pts
    dev = pts - m
    assert np.allclose(mean, m, atol=1e-6)
    # the centre point sits on the mean, so the extra centre weight adds nothing
    assert np.allclose((wc[:, None] * dev).T @ dev, C, rtol=1e-6, atol=1e-6)


def test_predict_collapsed_covariance_follows_mean():
    m = np.array([1.0, 1.0, 25.0])
    b = UkfBelief(m, 1e-10 * np.eye(3))
    out = ukf_predict(b, LorenzParams(process_cov=np.zeros((3, 3))), 60.0)
    assert np.allclose(out.mean, integrate(m, P, 60.0), atol=1e-6)


def _flow_jacobian(x, params, dt, h=1e-6):
    return np.column_stack(
        [(integrate(x + h * e, params, dt) - integrate(x - h * e, params, dt)) / (2 * h) for e in np.eye(3)]
    )


@pytest.mark.parametrize("sigma", [SigmaParams(), SigmaParams(alpha=1.0)])
def test_predict_matches_linearized_propagation(sigma):
    m = np.array([2.0, 3.0, 20.0])
    C = 0.01 * np.eye(3)
    out = ukf_predict(UkfBelief(m, C, sigma), P, 60.0)
    F = _flow_jacobian(m, P, 60.0)
    ekf = F @ C @ F.T + P.process_cov * 60.0
    assert np.allclose(out.cov, ekf, rtol=0.01, atol=0.01 * np.abs(ekf).max())
    assert np.allclose(out.mean, integrate(m, P, 60.0), atol=0.05)


def test_predict_many_matches_single():
    rng = np.random.default_rng(4)
    beliefs = [UkfBelief(rng.normal(size=3) + [0, 0, 25], random_spd(rng), SigmaParams(alpha=1.0)) for _ in range(3)]
    many = ukf_predict_many(beliefs, P, 60.0)
    for b, out in zip(beliefs, many):
        single = ukf_predict(b, P, 60.0)
        assert np.allclose(out.mean, single.mean) and np.allclose(out.cov, single.cov)


def test_unobserved_belief_stays_bounded_with_unit_spread():
    b = UkfBelief(np.array([1.0, 1.0, 25.0]), 5.0 * np.eye(3), SigmaParams(alpha=1.0))
    for _ in range(100):
        b = ukf_predict(b, P, 60.0)
    assert np.all(np.isfinite(b.cov))
    assert np.trace(b.cov) < 5000.0


@pytest.mark.parametrize("sigma", [SigmaParams(), SigmaParams(alpha=1.0)])
def test_update_matches_kalman(sigma):
    rng = np.random.default_rng(5)
    R = 2.0 * np.eye(3)
    for _ in range(20):
        m, C = rng.normal(size=3) * 5, random_spd(rng)
        zs = [m + rng.normal(size=3) for _ in range(int(rng.integers(1, 5)))]
        out = ukf_update(UkfBelief(m, C, sigma), zs, R)
        km, kc = kalman_identity_update(m, C, zs, R)
        assert np.max(np.abs(out.mean - km)) < 1e-8
        assert np.max(np.abs(out.cov - kc)) < 1e-8


def test_update_without_measurements_is_identity():
    b = UkfBelief(np.ones(3), np.eye(3))
    out = ukf_update(b, [], np.eye(3))
    assert np.array_equal(out.mean, b.mean) and out is not b


def test_clean_covariance():
    C = np.array([[1.0, 1e-14, 0], [0, 1.0, 0], [0, 0, 0.0]])
    out = clean_covariance(C)
    assert np.allclose(out, out.T)
    assert np.linalg.eigvalsh(out).min() >= 1e-12 * 0.999
    with pytest.raises(np.linalg.LinAlgError):
        clean_covariance(-np.eye(3))
