"""Simulator configuration, ball state, and closed-form projectile flight."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_EXPERT_LINKS = (0.35, 0.30, 0.25, 0.15, 0.10)
DEFAULT_LEARNER_LINKS = (0.30, 0.25, 0.20, 0.15, 0.12, 0.10, 0.08)


def _default_links():
    return {"expert": DEFAULT_EXPERT_LINKS, "learner": DEFAULT_LEARNER_LINKS}


@dataclass(frozen=True)
class BallState:
    """Ball position and velocity in world frame, meters and m/s."""

    position: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.position, dtype=np.float64).reshape(3)
        v = np.asarray(self.velocity, dtype=np.float64).reshape(3)
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(v))):
            raise ValueError("ball state must be finite")
        object.__setattr__(self, "position", p)
        object.__setattr__(self, "velocity", v)


@dataclass(frozen=True)
class SimConfig:
    """Toss-and-catch world parameters.

    gravity acts on -z. `gravity == 0` is allowed so the tracker can be
    compared against a plain constant-velocity filter. `steps` is the
    trajectory length T emitted by the scripted controllers.
    """

    gravity: float = 9.81
    dt: float = 0.02
    obs_noise_std: float = 0.05
    catch_radius: float = 0.08
    steps: int = 128
    link_lengths: dict = field(default_factory=_default_links)

    def __post_init__(self):
        if self.gravity < 0:
            raise ValueError("gravity must be >= 0")
        if self.dt <= 0 or self.catch_radius <= 0:
            raise ValueError("dt and catch_radius must be positive")
        if self.obs_noise_std < 0:
            raise ValueError("obs_noise_std must be >= 0")
        if self.steps < 2:
            raise ValueError("steps must be >= 2")


def ball_flight(p0, v0, t, gravity: float):
    """Projectile state at time(s) t from initial position/velocity.

    Closed form, so energy 0.5|v|^2 + g*z is conserved exactly up to
    rounding; t may be a scalar or an array.
    """
    p0 = np.asarray(p0, dtype=np.float64)
    v0 = np.asarray(v0, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    tt = t[..., None] if t.ndim else t
    g = np.array([0.0, 0.0, -gravity])
    pos = p0 + v0 * tt + 0.5 * g * tt ** 2
    vel = v0 + g * tt
    return pos, vel


def simulate_ball(initial: BallState, duration: float,
                  config: SimConfig) -> list[BallState]:
    """Sample the closed-form flight at config.dt from t=0 to duration."""
    if duration <= 0:
        raise ValueError("duration must be positive")
    n = int(np.floor(duration / config.dt)) + 1
    times = np.arange(n) * config.dt
    pos, vel = ball_flight(initial.position, initial.velocity, times,
                           config.gravity)
    return [BallState(position=pos[i], velocity=vel[i]) for i in range(n)]
