"""Scripted toss-and-catch demonstrations for both embodiments.

The controller plans on the step grid: minimum-jerk to a randomized
release pose, an analytic ballistic arc solved to pass through the
planned intercept point exactly at the catch step, minimum-jerk to the
intercept pose, and hand ramps that cross 0.5 downward at release and
close around the catch. Task geometry is drawn per seed; the start pose
telegraphs the drawn geometry so a demonstration's future is predictable
from its opening state (as a human's wind-up telegraphs a throw).
"""

from __future__ import annotations

import numpy as np

from ..trajdata import Trajectory
from .judge import CatchOutcome
from .kinematics import chain_points, min_jerk_profile, solve_ik
from .world import SimConfig, ball_flight

_DOMAIN_CODE = {"expert": 0, "learner": 1}

_NOMINAL_START = {
    "expert": np.array([1.10, -0.50, 0.45, -0.30, 0.25]),
    "learner": np.array([1.15, -0.40, 0.35, -0.25, 0.20, -0.15, 0.10]),
}

# fixed start-pose encodings of the 4 geometry draws, one row per joint;
# constant across seeds so the mapping draw -> pose is stable
_ENCODERS = {
    name: np.random.default_rng(material).uniform(-0.06, 0.06, size=(dof, 4))
    for name, dof, material in (("expert", 5, 20240501),
                                ("learner", 7, 20240502))
}

_FINGERTIP_LEN = 0.06


def _phase_steps(t_total: int) -> tuple[int, int, int]:
    t_release = int(round(0.28 * (t_total - 1)))
    t_catch = int(round(0.72 * (t_total - 1)))
    t_arrive = t_catch - max(2, t_total // 16)
    return t_release, t_arrive, t_catch


def _hand_profile(t_total: int, t_release: int, t_catch: int) -> np.ndarray:
    hand = np.ones(t_total)
    for i in range(8):  # open: 1 -> 0 over [t_release-4, t_release+3]
        t = t_release - 4 + i
        if 0 <= t < t_total:
            hand[t] = 1.0 - i / 7.0
    for t in range(t_release + 4, min(t_catch - 3, t_total)):
        hand[t] = 0.0
    for i in range(7):  # close: 0 -> 1 over [t_catch-3, t_catch+3]
        t = t_catch - 3 + i
        if 0 <= t < t_total:
            hand[t] = i / 6.0
    hand[min(t_catch + 4, t_total):] = 1.0
    return hand


def _markers(pose: np.ndarray, links, hand_value: float) -> np.ndarray:
    pts = chain_points(pose, links)
    ee = pts[-1]
    direction = pts[-1] - pts[-2]
    direction = direction / max(np.linalg.norm(direction), 1e-12)
    tip = ee + _FINGERTIP_LEN * direction * (1.0 - 0.5 * hand_value)
    return np.concatenate([pts.reshape(-1), tip])


def scripted_expert(spec, task_seed: int,
                    config: SimConfig) -> tuple[Trajectory, CatchOutcome]:
    """One deterministic toss-then-catch demonstration for `spec`.

    Returns the T x state_dim trajectory and the controller's own
    outcome. An unreachable intercept still emits a trajectory with
    success=False (the ball simply flies on).
    """
    name = spec.name
    if name not in _DOMAIN_CODE:
        raise ValueError(f"unregistered embodiment {name!r}")
    links = np.asarray(config.link_lengths[name], dtype=np.float64)
    reach = links.sum()
    t_total = config.steps
    if t_total < 24:
        raise ValueError("scripted demonstrations need steps >= 24")
    dt = config.dt
    t_release, t_arrive, t_catch = _phase_steps(t_total)

    rng = np.random.default_rng([task_seed, _DOMAIN_CODE[name]])
    draw = rng.uniform(-1.0, 1.0, size=4)
    rel_radius = (0.62 + 0.10 * draw[0]) * reach
    rel_angle = 1.15 + 0.20 * draw[1]
    dx = 0.22 * draw[2]
    dz = 0.08 * draw[3]

    start_pose = _NOMINAL_START[name] + _ENCODERS[name] @ draw
    limits = spec.joint_limits
    lo = np.array([l for l, _ in limits])
    hi = np.array([h for _, h in limits])
    start_pose = np.clip(start_pose, lo, hi)

    release_target = np.array([rel_radius * np.cos(rel_angle),
                               rel_radius * np.sin(rel_angle)])
    release_pose, ok_release = solve_ik(release_target, start_pose, links,
                                        limits)
    release_pt = chain_points(release_pose, links)[-1]

    catch_target = release_target + np.array([dx, dz])
    in_reach = 0.25 * reach <= np.linalg.norm(catch_target) <= 0.92 * reach
    catch_pose, ok_catch = solve_ik(catch_target, release_pose, links, limits)
    catch_pt = chain_points(catch_pose, links)[-1]

    flight_time = (t_catch - t_release) * dt
    target3 = np.array([catch_target[0], 0.0, catch_target[1]])
    v0 = ((target3 - release_pt) / flight_time
          + np.array([0.0, 0.0, 0.5 * config.gravity * flight_time]))

    joints = np.empty((t_total, spec.joint_count))
    joints[:t_release + 1] = min_jerk_profile(start_pose, release_pose,
                                              t_release + 1)
    joints[t_release:t_arrive + 1] = min_jerk_profile(release_pose, catch_pose,
                                                      t_arrive - t_release + 1)
    joints[t_arrive:] = catch_pose

    hand = _hand_profile(t_total, t_release, t_catch)

    planned = ok_release and ok_catch and in_reach
    ball = np.empty((t_total, 3))
    for t in range(t_total):
        if t < t_release:
            ball[t] = chain_points(joints[t], links)[-1]
        elif t <= t_catch or not planned:
            pos, _ = ball_flight(release_pt, v0, (t - t_release) * dt,
                                 config.gravity)
            ball[t] = pos
        else:
            ball[t] = catch_pt

    columns = [joints, hand[:, None], hand[:, None], ball]
    if spec.channel_indices("marker_"):
        markers = np.array([_markers(joints[t], links, hand[t])
                            for t in range(t_total)])
        columns.append(markers)
    steps = np.concatenate(columns, axis=1)

    traj = Trajectory(embodiment=spec, dt=dt, steps=steps,
                      meta={"task_seed": int(task_seed), "scripted": 1})

    # the controller's own determination: it planned an in-reach intercept
    # and the arm is at the planned point when the ball arrives there
    own_miss = float(np.linalg.norm(
        chain_points(joints[t_catch], links)[-1] - ball[t_catch]))
    success = planned and own_miss <= config.catch_radius
    outcome = CatchOutcome(success=success, miss_distance=own_miss,
                           release_time=t_release * dt,
                           catch_time=t_catch * dt)
    return traj, outcome
