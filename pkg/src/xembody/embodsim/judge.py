"""Catch-success judgment for toss-and-catch trajectories."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kinematics import chain_points
from .world import SimConfig

# catch window: ball descending with z inside this band (meters);
# excludes spurious contacts right at release
CATCH_Z_BAND = (0.1, 1.5)
# hand channel counts as "closing" when its per-step increase exceeds this
CLOSING_RATE = 0.05
# steps around the closest approach within which closing must happen
CLOSING_SLACK = 3


@dataclass(frozen=True)
class CatchOutcome:
    """Per-trial result; success requires proximity and a closing hand."""

    success: bool
    miss_distance: float
    release_time: float
    catch_time: float

    def __post_init__(self):
        if self.miss_distance < 0:
            raise ValueError("miss_distance must be >= 0")


def hand_release_step(hand: np.ndarray) -> int:
    """First step where the hand crosses 0.5 downward, or -1."""
    for t in range(1, hand.size):
        if hand[t - 1] >= 0.5 > hand[t]:
            return t
    return -1


def judge_catch(trajectory, config: SimConfig) -> CatchOutcome:
    """Success iff, during the catch window, the end effector comes within
    catch_radius of the ball and the hand is closing within +-3 steps of
    the closest approach. Deterministic; ignores trajectory meta."""
    spec = trajectory.embodiment
    ball_idx = spec.ball_indices
    if len(ball_idx) != 3:
        raise ValueError(f"spec {spec.name!r} lacks ball channels")
    joint_idx = list(spec.joint_indices)
    hand_idx = spec.hand_indices
    links = config.link_lengths[spec.name]

    steps = trajectory.steps
    ball = steps[:, list(ball_idx)]
    hand = steps[:, hand_idx[0]] if hand_idx else np.zeros(len(steps))
    ee = np.array([chain_points(row, links)[-1]
                   for row in steps[:, joint_idx]])
    dist = np.linalg.norm(ee - ball, axis=1)

    descending = np.zeros(len(steps), dtype=bool)
    descending[1:] = np.diff(ball[:, 2]) < -1e-12
    lo, hi = CATCH_Z_BAND
    window = descending & (ball[:, 2] >= lo) & (ball[:, 2] <= hi)

    release_t = hand_release_step(hand)
    release_time = release_t * trajectory.dt if release_t >= 0 else -1.0

    if not window.any():
        return CatchOutcome(success=False, miss_distance=float(dist.min()),
                            release_time=release_time, catch_time=-1.0)

    win_steps = np.flatnonzero(window)
    best = win_steps[np.argmin(dist[win_steps])]
    miss = float(dist[best])

    closing = False
    for s in range(max(1, best - CLOSING_SLACK),
                   min(len(steps), best + CLOSING_SLACK + 1)):
        if hand[s] - hand[s - 1] > CLOSING_RATE:
            closing = True
            break

    success = miss <= config.catch_radius and closing
    return CatchOutcome(success=success, miss_distance=miss,
                        release_time=release_time,
                        catch_time=float(best * trajectory.dt))
