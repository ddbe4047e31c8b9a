"""Lorenz-63 truth simulation and unscented Kalman filtering of point states."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

JITTER_FLOOR = 1e-12


@dataclass
class LorenzParams:
    kappa: float = 0.005
    sigma: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0
    process_cov: np.ndarray = field(default_factory=lambda: 0.1 * np.eye(3))
    dt: float = 1.0  # integration substep, s

    def __post_init__(self):
        self.process_cov = np.asarray(self.process_cov, dtype=float)
        if self.dt <= 0:
            raise ValueError("integration step must be positive")
        if not np.allclose(self.process_cov, self.process_cov.T):
            raise ValueError("process covariance must be symmetric")
        if np.linalg.eigvalsh(self.process_cov).min() < -1e-12:
            raise ValueError("process covariance must be positive semidefinite")

    def fixed_point(self) -> np.ndarray:
        s = math.sqrt(self.beta * (self.rho - 1.0))
        return np.array([s, s, self.rho - 1.0])


def lorenz_derivative(state, params: LorenzParams) -> np.ndarray:
    """Drift at one state (3,) or a batch (..., 3)."""
    x = np.asarray(state, dtype=float)
    dx = params.sigma * (x[..., 1] - x[..., 0])
    dy = x[..., 0] * (params.rho - x[..., 2]) - x[..., 1]
    dz = x[..., 0] * x[..., 1] - params.beta * x[..., 2]
    return params.kappa * np.stack([dx, dy, dz], axis=-1)


def lorenz_jacobian(state, params: LorenzParams) -> np.ndarray:
    x, y, z = np.asarray(state, dtype=float)
    return params.kappa * np.array(
        [
            [-params.sigma, params.sigma, 0.0],
            [params.rho - z, -1.0, -x],
            [y, x, -params.beta],
        ]
    )


def rk4_step(state, params: LorenzParams, h: float) -> np.ndarray:
    k1 = lorenz_derivative(state, params)
    k2 = lorenz_derivative(state + 0.5 * h * k1, params)
    k3 = lorenz_derivative(state + 0.5 * h * k2, params)
    k4 = lorenz_derivative(state + h * k3, params)
    return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _substeps(duration: float, params: LorenzParams) -> tuple:
    if duration < 0:
        raise ValueError("duration must be nonnegative")
    if duration == 0:
        return 0, 0.0
    n = max(1, math.ceil(duration / params.dt - 1e-9))
    return n, duration / n


def integrate(state, params: LorenzParams, duration: float) -> np.ndarray:
    """Noiseless RK4 flow over ``duration`` using ``params.dt`` substeps."""
    x = np.array(state, dtype=float)
    n, h = _substeps(duration, params)
    for _ in range(n):
        x = rk4_step(x, params, h)
    return x


def _noise_factor(cov: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(cov)
    if w.min() < -1e-12:
        raise ValueError("process covariance must be positive semidefinite")
    return v * np.sqrt(np.clip(w, 0.0, None))


def step_truth(state, params: LorenzParams, dt: float, rng: np.random.Generator) -> np.ndarray:
    """One RK4 drift step plus additive Gaussian increment ``sqrt(dt) L xi``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    x = rk4_step(np.asarray(state, dtype=float), params, dt)
    L = _noise_factor(params.process_cov)
    xi = rng.standard_normal(x.shape)
    return x + math.sqrt(dt) * xi @ L.T


def advance_truth(state, params: LorenzParams, duration: float, rng: np.random.Generator) -> np.ndarray:
    n, h = _substeps(duration, params)
    x = np.array(state, dtype=float)
    for _ in range(n):
        x = step_truth(x, params, h, rng)
    return x


# -- unscented filter --------------------------------------------------------


@dataclass(frozen=True)
class SigmaParams:
    alpha: float = 1e-3
    beta: float = 2.0
    kappa: float = 0.0

    def weights(self, n: int):
        lam = self.alpha**2 * (n + self.kappa) - n
        wm = np.full(2 * n + 1, 0.5 / (n + lam))
        wc = wm.copy()
        wm[0] = lam / (n + lam)
        wc[0] = wm[0] + (1.0 - self.alpha**2 + self.beta)
        return lam, wm, wc


@dataclass
class UkfBelief:
    mean: np.ndarray
    cov: np.ndarray
    sigma: SigmaParams = field(default_factory=SigmaParams)

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=float)
        self.cov = np.asarray(self.cov, dtype=float)

    def copy(self) -> "UkfBelief":
        return replace(self, mean=self.mean.copy(), cov=self.cov.copy())


def clean_covariance(cov: np.ndarray) -> np.ndarray:
    """Symmetrize and lift the smallest eigenvalue to the jitter floor if needed."""
    P = 0.5 * (cov + cov.T)
    lo = np.linalg.eigvalsh(P).min()
    if lo < -1e-8 * max(1.0, np.trace(P)):
        raise np.linalg.LinAlgError(f"covariance not PSD (min eigenvalue {lo:.3e})")
    if lo < JITTER_FLOOR:
        P = P + (JITTER_FLOOR - lo) * np.eye(P.shape[0])
    return P


def sigma_points(mean: np.ndarray, cov: np.ndarray, sigma: SigmaParams):
    n = mean.size
    lam, wm, wc = sigma.weights(n)
    S = np.linalg.cholesky((n + lam) * cov)
    pts = np.empty((2 * n + 1, n))
    pts[0] = mean
    pts[1 : n + 1] = mean + S.T
    pts[n + 1 :] = mean - S.T
    return pts, wm, wc


def _weighted_mean(pts: np.ndarray, wm: np.ndarray) -> np.ndarray:
    # centre on the first point; the large opposite-sign weights would
    # otherwise cancel catastrophically
    return pts[0] + wm[1:] @ (pts[1:] - pts[0])


def ukf_predict(belief: UkfBelief, params: LorenzParams, dt: float) -> UkfBelief:
    if dt == 0:
        return belief.copy()
    pts, wm, wc = sigma_points(belief.mean, belief.cov, belief.sigma)
    prop = integrate(pts, params, dt)
    mean = _weighted_mean(prop, wm)
    dev = prop - mean
    cov = (wc[:, None] * dev).T @ dev + params.process_cov * dt
    return UkfBelief(mean, clean_covariance(cov), belief.sigma)


def ukf_predict_many(beliefs, params: LorenzParams, dt: float) -> list:
    """:func:`ukf_predict` over independent beliefs with one batched integration."""
    if dt == 0 or not beliefs:
        return [b.copy() for b in beliefs]
    packs = [sigma_points(b.mean, b.cov, b.sigma) for b in beliefs]
    prop = integrate(np.stack([p[0] for p in packs]), params, dt)
    out = []
    for b, (_, wm, wc), pts in zip(beliefs, packs, prop):
        mean = _weighted_mean(pts, wm)
        dev = pts - mean
        cov = (wc[:, None] * dev).T @ dev + params.process_cov * dt
        out.append(UkfBelief(mean, clean_covariance(cov), b.sigma))
    return out


def ukf_update(belief: UkfBelief, measurements, meas_cov) -> UkfBelief:
    """Fuse identity-map observations of the state, all at once."""
    zs = [np.asarray(z, dtype=float) for z in measurements]
    if not zs:
        return belief.copy()
    R = np.asarray(meas_cov, dtype=float)
    m = len(zs)
    pts, wm, wc = sigma_points(belief.mean, belief.cov, belief.sigma)
    Z = np.tile(pts, (1, m))  # each measurement observes the state directly
    z_hat = _weighted_mean(Z, wm)
    x_hat = _weighted_mean(pts, wm)
    dz, dx = Z - z_hat, pts - x_hat
    Pzz = (wc[:, None] * dz).T @ dz + np.kron(np.eye(m), R)
    Pxz = (wc[:, None] * dx).T @ dz
    try:
        K = np.linalg.solve(Pzz, Pxz.T).T
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError("innovation covariance is singular") from exc
    innovation = np.concatenate(zs) - z_hat
    mean = x_hat + K @ innovation
    cov = belief.cov - K @ Pzz @ K.T
    return UkfBelief(mean, clean_covariance(cov), belief.sigma)


def kalman_identity_update(mean, cov, measurements, meas_cov):
    """Closed-form linear Kalman update for identity observations (reference)."""
    info = np.linalg.inv(cov)
    R_inv = np.linalg.inv(meas_cov)
    post_cov = np.linalg.inv(info + len(measurements) * R_inv)
    post_mean = post_cov @ (info @ mean + R_inv @ np.sum(measurements, axis=0))
    return post_mean, post_cov
