"""Adaptive-moment (Adam) parameter updates."""

from __future__ import annotations

import numpy as np

from .params import ParamStore


def optimizer_step(params: ParamStore, grads: dict, lr: float = 1e-3,
                   betas: tuple[float, float] = (0.9, 0.999),
                   eps: float = 1e-8) -> ParamStore:
    """One Adam step with bias correction, applied in place.

    `grads` must contain one array per store entry, shape-aligned.
    Raises on non-finite gradients; guarantees finite parameters after
    the update. Returns the (mutated) store for chaining.
    """
    names = set(params.names())
    if set(grads) != names:
        missing = names ^ set(grads)
        raise ValueError(f"gradients not aligned with parameters: {sorted(missing)}")
    b1, b2 = betas
    for name in params.names():
        g = np.asarray(grads[name], dtype=np.float64)
        ent = params[name]
        if g.shape != ent.data.shape:
            raise ValueError(f"gradient shape mismatch for {name!r}")
        if not np.all(np.isfinite(g)):
            raise ValueError(f"non-finite gradient for {name!r}")
        m, v, t = params.moments(name)
        t += 1
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * g * g
        mhat = m / (1.0 - b1 ** t)
        vhat = v / (1.0 - b2 ** t)
        new = ent.data - lr * mhat / (np.sqrt(vhat) + eps)
        params.set_moments(name, m, v, t)
        params.set_value(name, new)
    return params
