"""The two registered embodiments.

Expert: 5-joint planar arm, 2 finger channels, ball xyz, plus 3D marker
points along the chain (base, four link ends, end-effector, fingertip)
for a 31-wide state. Learner: 7-joint arm, 2 hand synergies, ball xyz,
12 wide. The ordering is fixed here: joints, hand, ball, markers.
"""

from __future__ import annotations

from ..trajdata import EmbodimentSpec

_MARKER_POINTS = ("base", "j1", "j2", "j3", "j4", "ee", "tip")


def expert_spec() -> EmbodimentSpec:
    labels = [f"joint_{i}" for i in range(5)]
    labels += ["hand_synergy_0", "hand_synergy_1"]
    labels += ["ball_x", "ball_y", "ball_z"]
    for pt in _MARKER_POINTS:
        labels += [f"marker_{pt}_x", f"marker_{pt}_y", f"marker_{pt}_z"]
    limits = ((0.2, 2.9),) + ((-2.2, 2.2),) * 4
    return EmbodimentSpec(name="expert", state_dim=31, joint_count=5,
                          joint_limits=limits, channel_labels=tuple(labels))


def learner_spec() -> EmbodimentSpec:
    labels = [f"joint_{i}" for i in range(7)]
    labels += ["hand_synergy_0", "hand_synergy_1"]
    labels += ["ball_x", "ball_y", "ball_z"]
    limits = ((0.2, 2.9),) + ((-2.0, 2.0),) * 6
    return EmbodimentSpec(name="learner", state_dim=12, joint_count=7,
                          joint_limits=limits, channel_labels=tuple(labels))


def spec_by_name(name: str) -> EmbodimentSpec:
    if name == "expert":
        return expert_spec()
    if name == "learner":
        return learner_spec()
    raise KeyError(f"unknown embodiment {name!r}")
