"""Trajectory and dataset types, normalization, splitting, and file I/O.

Dataset files are UTF-8 JSON lines with suffix `.traj.jsonl`: line 1 is a
header record describing the embodiment, every later line is one
trajectory. Values are written with 17 significant digits so a
save/load round trip is bit-exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class EmbodimentSpec:
    """One domain's state layout: joints, hand synergies, ball channels.

    Channel roles are carried by label prefixes: "joint_", "hand_",
    "ball_", anything else (e.g. "marker_") is auxiliary.

    Attributes:
        name: identifier, unique per domain.
        state_dim: width of one state vector.
        joint_count: number of articulated joints (<= state_dim).
        joint_limits: per-joint (min, max) in radians.
        channel_labels: one label per state entry.
    """

    name: str
    state_dim: int
    joint_count: int
    joint_limits: tuple[tuple[float, float], ...]
    channel_labels: tuple[str, ...]

    def __post_init__(self):
        if self.state_dim <= 0 or self.joint_count <= 0:
            raise ValueError("state_dim and joint_count must be positive")
        if len(self.channel_labels) != self.state_dim:
            raise ValueError(f"{len(self.channel_labels)} labels for "
                             f"state_dim {self.state_dim}")
        if self.joint_count > self.state_dim:
            raise ValueError("joint_count exceeds state_dim")
        if len(self.joint_limits) != self.joint_count:
            raise ValueError("one (min, max) pair required per joint")
        for lo, hi in self.joint_limits:
            if not lo < hi:
                raise ValueError(f"joint limit ({lo}, {hi}) has min >= max")

    def channel_indices(self, prefix: str) -> tuple[int, ...]:
        return tuple(i for i, lab in enumerate(self.channel_labels)
                     if lab.startswith(prefix))

    @property
    def joint_indices(self) -> tuple[int, ...]:
        return self.channel_indices("joint_")

    @property
    def hand_indices(self) -> tuple[int, ...]:
        return self.channel_indices("hand_")

    @property
    def ball_indices(self) -> tuple[int, ...]:
        return self.channel_indices("ball_")


@dataclass(frozen=True)
class Trajectory:
    """Fixed-length state sequence for one embodiment.

    `steps` is a (T, state_dim) float64 matrix, read-only after
    construction. `meta` holds free-form scalar tags (seed, variant).
    """

    embodiment: EmbodimentSpec
    dt: float
    steps: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.asarray(self.steps, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("steps must be a T x state_dim matrix")
        if arr.shape[0] < 2:
            raise ValueError("trajectory needs at least 2 steps")
        if arr.shape[1] != self.embodiment.state_dim:
            raise ValueError(f"row width {arr.shape[1]} != state_dim "
                             f"{self.embodiment.state_dim}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("trajectory contains non-finite values")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "steps", arr)

    @property
    def length(self) -> int:
        return self.steps.shape[0]


@dataclass(frozen=True)
class NormStats:
    """Per-channel z-score statistics; `clamped` marks zero-variance
    channels whose std was forced to 1."""

    mean: np.ndarray
    std: np.ndarray
    clamped: np.ndarray

    def apply(self, states: np.ndarray) -> np.ndarray:
        return (np.asarray(states, dtype=np.float64) - self.mean) / self.std

    def invert(self, states: np.ndarray) -> np.ndarray:
        return np.asarray(states, dtype=np.float64) * self.std + self.mean


@dataclass(frozen=True)
class Dataset:
    """Ordered trajectories sharing one embodiment, T, and dt."""

    spec: EmbodimentSpec
    trajectories: tuple[Trajectory, ...]
    norm_stats: NormStats | None = None

    def __post_init__(self):
        object.__setattr__(self, "trajectories", tuple(self.trajectories))
        for tr in self.trajectories:
            if tr.embodiment != self.spec:
                raise ValueError("trajectory embodiment differs from dataset spec")
        lengths = {tr.length for tr in self.trajectories}
        if len(lengths) > 1:
            raise ValueError(f"inconsistent trajectory lengths: {sorted(lengths)}")
        dts = {tr.dt for tr in self.trajectories}
        if len(dts) > 1:
            raise ValueError("inconsistent dt across trajectories")
        if self.norm_stats is not None and np.any(self.norm_stats.std <= 0):
            raise ValueError("norm_stats std must be positive")

    def __len__(self) -> int:
        return len(self.trajectories)

    def stacked_states(self) -> np.ndarray:
        """All steps of all trajectories as one (N*T, state_dim) matrix."""
        return np.concatenate([tr.steps for tr in self.trajectories], axis=0)


# -- file I/O ----------------------------------------------------------------


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def save_dataset(dataset: Dataset, path) -> None:
    """Write a dataset in the line-delimited format; validates first so a
    bad dataset never leaves a partial file."""
    if len(dataset) == 0:
        raise ValueError("refusing to save an empty dataset")
    spec = dataset.spec
    t_len = dataset.trajectories[0].length
    for i, tr in enumerate(dataset.trajectories):
        if tr.steps.shape != (t_len, spec.state_dim):
            raise ValueError(f"trajectory {i} shape {tr.steps.shape} does not "
                             f"match ({t_len}, {spec.state_dim})")
    header = {"spec": {
        "name": spec.name,
        "state_dim": spec.state_dim,
        "dt": dataset.trajectories[0].dt,
        "channel_labels": list(spec.channel_labels),
        "joint_limits": [[lo, hi] for lo, hi in spec.joint_limits],
    }}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for tr in dataset.trajectories:
            rows = ",".join(
                "[" + ",".join(_fmt(v) for v in row) + "]" for row in tr.steps)
            meta = json.dumps(tr.meta, sort_keys=True)
            fh.write('{"meta": ' + meta + ', "steps": [' + rows + "]}\n")


def _reject_constant(token):
    raise ValueError(f"non-finite token {token!r}")


def load_dataset(path) -> Dataset:
    """Read a dataset file; errors name the offending line."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    try:
        header = json.loads(lines[0], parse_constant=_reject_constant)
        sp = header["spec"]
        spec = EmbodimentSpec(
            name=sp["name"],
            state_dim=int(sp["state_dim"]),
            joint_count=len(sp["joint_limits"]),
            joint_limits=tuple((float(lo), float(hi))
                               for lo, hi in sp["joint_limits"]),
            channel_labels=tuple(sp["channel_labels"]),
        )
        dt = float(sp["dt"])
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ValueError(f"{path}: line 1: bad header record: {exc}") from exc

    trajectories = []
    t_len = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            rec = json.loads(line, parse_constant=_reject_constant)
            steps = np.array(rec["steps"], dtype=np.float64)
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ValueError(f"{path}: line {lineno}: malformed record: {exc}") \
                from exc
        if steps.ndim != 2 or steps.shape[1] != spec.state_dim:
            raise ValueError(f"{path}: line {lineno}: record shape "
                             f"{steps.shape} does not match state_dim "
                             f"{spec.state_dim}")
        if not np.all(np.isfinite(steps)):
            raise ValueError(f"{path}: line {lineno}: non-finite value")
        if t_len is None:
            t_len = steps.shape[0]
        elif steps.shape[0] != t_len:
            raise ValueError(f"{path}: line {lineno}: {steps.shape[0]} steps "
                             f"where earlier records have {t_len}")
        trajectories.append(Trajectory(embodiment=spec, dt=dt, steps=steps,
                                       meta=dict(rec.get("meta", {}))))
    if not trajectories:
        raise ValueError(f"{path}: no trajectory records")
    return Dataset(spec=spec, trajectories=tuple(trajectories))


# -- normalization and splitting ----------------------------------------------


def normalize(dataset: Dataset) -> tuple[Dataset, NormStats]:
    """Global per-channel z-scoring over all steps of all trajectories.

    Zero-variance channels get std clamped to 1 and are flagged in the
    returned stats rather than raising.
    """
    if len(dataset) == 0:
        raise ValueError("cannot normalize an empty dataset")
    states = dataset.stacked_states()
    mean = states.mean(axis=0)
    std = states.std(axis=0)
    clamped = std < 1e-12
    std = np.where(clamped, 1.0, std)
    stats = NormStats(mean=mean, std=std, clamped=clamped)
    out = [Trajectory(embodiment=tr.embodiment, dt=tr.dt,
                      steps=stats.apply(tr.steps), meta=dict(tr.meta))
           for tr in dataset.trajectories]
    return Dataset(spec=dataset.spec, trajectories=tuple(out),
                   norm_stats=stats), stats


def denormalize(dataset: Dataset, stats: NormStats) -> Dataset:
    """Exact inverse of normalize for the given stats."""
    out = [Trajectory(embodiment=tr.embodiment, dt=tr.dt,
                      steps=stats.invert(tr.steps), meta=dict(tr.meta))
           for tr in dataset.trajectories]
    return Dataset(spec=dataset.spec, trajectories=tuple(out))


def split(dataset: Dataset, holdout_fraction: float,
          seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic disjoint train/holdout partition.

    Train gets round(n * (1 - fraction)) trajectories, holdout the rest;
    original order is preserved within each part.
    """
    if not 0.0 < holdout_fraction < 1.0:
        raise ValueError("holdout_fraction must lie in (0, 1)")
    n = len(dataset)
    if n < 2:
        raise ValueError("need at least 2 trajectories to split")
    n_train = int(round(n * (1.0 - holdout_fraction)))
    perm = np.random.default_rng(seed).permutation(n)

    def pick(idx):
        return Dataset(spec=dataset.spec,
                       trajectories=tuple(dataset.trajectories[i] for i in idx))

    return pick(np.sort(perm[:n_train])), pick(np.sort(perm[n_train:]))


def canonical_order(dataset: Dataset) -> Dataset:
    """Reorder trajectories by a content digest so downstream seeded
    sampling does not depend on the caller's list order."""
    import hashlib

    def key(tr: Trajectory) -> str:
        return hashlib.sha256(tr.steps.tobytes()).hexdigest()

    ordered = tuple(sorted(dataset.trajectories, key=key))
    return Dataset(spec=dataset.spec, trajectories=ordered,
                   norm_stats=dataset.norm_stats)


def within_joint_limits(traj: Trajectory, atol: float = 1e-9) -> bool:
    """True when every joint channel stays inside its declared limits."""
    spec = traj.embodiment
    joints = traj.steps[:, list(spec.joint_indices)]
    for j, (lo, hi) in enumerate(spec.joint_limits):
        if joints[:, j].min() < lo - atol or joints[:, j].max() > hi + atol:
            return False
    return True


def round_trip_equal(a: Dataset, b: Dataset) -> bool:
    """Bit-exact equality of two datasets (used by round-trip tests)."""
    if a.spec != b.spec or len(a) != len(b):
        return False
    for ta, tb in zip(a.trajectories, b.trajectories):
        if ta.dt != tb.dt or ta.meta != tb.meta:
            return False
        if not np.array_equal(ta.steps, tb.steps):
            return False
    return True


def states_of(dataset: Dataset, rng: np.random.Generator | None = None,
              count: int | None = None) -> np.ndarray:
    """Flattened state rows, optionally subsampled without replacement."""
    states = dataset.stacked_states()
    if count is None or count >= states.shape[0]:
        return states
    if rng is None:
        rng = np.random.default_rng(0)
    idx = rng.choice(states.shape[0], size=count, replace=False)
    return states[np.sort(idx)]
