"""Planar-arm kinematics and minimum-jerk joint profiles.

Arms live in the x-z plane (y identically 0). Joint angle 0 is measured
from the +x axis; later joints are relative to the previous link.
"""

from __future__ import annotations

import numpy as np


def chain_points(joint_angles, link_lengths) -> np.ndarray:
    """Positions of the base and every link end, shape (n_links + 1, 3)."""
    angles = np.asarray(joint_angles, dtype=np.float64)
    lengths = np.asarray(link_lengths, dtype=np.float64)
    if angles.shape != lengths.shape:
        raise ValueError(f"{angles.size} angles for {lengths.size} links")
    cum = np.cumsum(angles)
    pts = np.zeros((angles.size + 1, 3))
    pts[1:, 0] = np.cumsum(lengths * np.cos(cum))
    pts[1:, 2] = np.cumsum(lengths * np.sin(cum))
    return pts


def forward_kinematics(spec, joint_angles, link_lengths) -> np.ndarray:
    """End-effector position (x, 0, z) of a planar chain.

    `spec` supplies the expected joint count; lengths come from the
    simulator config since embodiment specs carry only state layout.
    """
    angles = np.asarray(joint_angles, dtype=np.float64)
    if angles.size != spec.joint_count:
        raise ValueError(f"{angles.size} angles for a {spec.joint_count}-joint arm")
    if not np.all(np.isfinite(angles)):
        raise ValueError("non-finite joint angles")
    return chain_points(angles, link_lengths)[-1]


def planar_jacobian(joint_angles, link_lengths) -> np.ndarray:
    """d(end-effector x, z)/d(theta), shape (2, n)."""
    angles = np.asarray(joint_angles, dtype=np.float64)
    lengths = np.asarray(link_lengths, dtype=np.float64)
    cum = np.cumsum(angles)
    dx = -lengths * np.sin(cum)
    dz = lengths * np.cos(cum)
    # joint i moves every link j >= i
    jac = np.zeros((2, angles.size))
    jac[0] = np.cumsum(dx[::-1])[::-1]
    jac[1] = np.cumsum(dz[::-1])[::-1]
    return jac


def solve_ik(target_xz, start_angles, link_lengths, limits,
             iters: int = 120, damping: float = 1e-2,
             tol: float = 1e-8) -> tuple[np.ndarray, bool]:
    """Damped least-squares IK toward (x, z); angles clipped to limits.

    Returns (angles, converged). Deterministic: no randomness, fixed
    iteration budget.
    """
    target = np.asarray(target_xz, dtype=np.float64)
    q = np.asarray(start_angles, dtype=np.float64).copy()
    lo = np.array([l for l, _ in limits])
    hi = np.array([h for _, h in limits])
    for _ in range(iters):
        pts = chain_points(q, link_lengths)
        err = target - pts[-1][[0, 2]]
        if err @ err < tol:
            return q, True
        jac = planar_jacobian(q, link_lengths)
        jjt = jac @ jac.T + damping ** 2 * np.eye(2)
        dq = jac.T @ np.linalg.solve(jjt, err)
        nrm = np.linalg.norm(dq)
        if nrm > 0.5:
            dq *= 0.5 / nrm
        q = np.clip(q + dq, lo, hi)
    pts = chain_points(q, link_lengths)
    err = target - pts[-1][[0, 2]]
    return q, bool(err @ err < 1e-6)


def min_jerk_profile(start, goal, n_steps: int) -> np.ndarray:
    """Minimum-jerk interpolation with zero endpoint velocity/acceleration.

    Returns (n_steps, dof) including both endpoints; n_steps >= 2.
    Monotone per joint, so limits at the endpoints bound the whole path.
    """
    if n_steps < 2:
        raise ValueError("need at least 2 steps")
    q0 = np.asarray(start, dtype=np.float64)
    q1 = np.asarray(goal, dtype=np.float64)
    u = np.linspace(0.0, 1.0, n_steps)[:, None]
    s = 10.0 * u ** 3 - 15.0 * u ** 4 + 6.0 * u ** 5
    return q0 + (q1 - q0) * s
