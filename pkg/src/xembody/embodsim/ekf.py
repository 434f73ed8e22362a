"""Kalman tracking of the thrown ball from noisy position observations.

The projectile dynamics are linear with a constant gravity input, so the
"extended" filter reduces to a linear-Gaussian one over the state
[position, velocity].
"""

from __future__ import annotations

import numpy as np

from .world import BallState, SimConfig

_ZHAT = np.array([0.0, 0.0, 1.0])


def _model(config: SimConfig):
    dt, g = config.dt, config.gravity
    f = np.eye(6)
    f[:3, 3:] = dt * np.eye(3)
    u = np.concatenate([-0.5 * g * dt ** 2 * _ZHAT, -g * dt * _ZHAT])
    h = np.zeros((3, 6))
    h[:, :3] = np.eye(3)
    r = max(config.obs_noise_std ** 2, 1e-12) * np.eye(3)
    q = 1e-12 * np.eye(6)
    return f, u, h, r, q


def ekf_predict(state: BallState, config: SimConfig) -> BallState:
    """One-step-ahead prediction under the projectile process model."""
    dt, g = config.dt, config.gravity
    p = state.position + state.velocity * dt - 0.5 * g * dt ** 2 * _ZHAT
    v = state.velocity - g * dt * _ZHAT
    return BallState(position=p, velocity=v)


def ekf_track_full(observations, config: SimConfig):
    """Filtered states plus error covariances, one per observation.

    Index 0 carries the two-point initialization (position = first
    observation, velocity from the first difference corrected for
    gravity); later indices are post-update estimates.
    """
    obs = np.asarray(observations, dtype=np.float64)
    if obs.ndim != 2 or obs.shape[1] != 3:
        raise ValueError("observations must be an (n, 3) array")
    if obs.shape[0] < 2:
        raise ValueError("need at least 2 observations")
    f, u, h, r, q = _model(config)
    dt = config.dt
    rvar = max(config.obs_noise_std ** 2, 1e-12)

    x = np.concatenate([
        obs[0],
        (obs[1] - obs[0]) / dt + 0.5 * config.gravity * dt * _ZHAT,
    ])
    p = np.diag([rvar] * 3 + [2.0 * rvar / dt ** 2] * 3)

    states = [x.copy()]
    covs = [p.copy()]
    for k in range(1, obs.shape[0]):
        x = f @ x + u
        p = f @ p @ f.T + q
        s = h @ p @ h.T + r
        gain = p @ h.T @ np.linalg.inv(s)
        x = x + gain @ (obs[k] - h @ x)
        p = (np.eye(6) - gain @ h) @ p
        states.append(x.copy())
        covs.append(p.copy())
    return ([BallState(position=s[:3], velocity=s[3:]) for s in states],
            np.array(covs))


def ekf_track(observations, config: SimConfig) -> list[BallState]:
    """Filtered [position, velocity] estimates, one per observation."""
    states, _ = ekf_track_full(observations, config)
    return states
