"""Synthetic dual-embodiment toss-and-catch world."""

from .ekf import ekf_predict, ekf_track, ekf_track_full
from .expert import scripted_expert
from .judge import CatchOutcome, judge_catch
from .kinematics import (chain_points, forward_kinematics, min_jerk_profile,
                         planar_jacobian, solve_ik)
from .specs import expert_spec, learner_spec, spec_by_name
from .world import (DEFAULT_EXPERT_LINKS, DEFAULT_LEARNER_LINKS, BallState,
                    SimConfig, ball_flight, simulate_ball)

__all__ = [
    "ekf_predict", "ekf_track", "ekf_track_full",
    "scripted_expert",
    "CatchOutcome", "judge_catch",
    "chain_points", "forward_kinematics", "min_jerk_profile",
    "planar_jacobian", "solve_ik",
    "expert_spec", "learner_spec", "spec_by_name",
    "DEFAULT_EXPERT_LINKS", "DEFAULT_LEARNER_LINKS", "BallState",
    "SimConfig", "ball_flight", "simulate_ball",
]
