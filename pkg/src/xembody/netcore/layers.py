"""Dense layers, activations, layer norm, and masked multi-head attention."""

from __future__ import annotations

import numpy as np

from .params import ParamStore
from .tensor import Tensor, as_tensor


def init_dense(params: ParamStore, name: str, fan_in: int, fan_out: int,
               rng: np.random.Generator, scale: float | None = None,
               zero: bool = False):
    """Register weight and bias for a dense layer under `name`."""
    if zero:
        w = np.zeros((fan_in, fan_out))
    else:
        limit = scale if scale is not None else np.sqrt(6.0 / (fan_in + fan_out))
        w = rng.uniform(-limit, limit, size=(fan_in, fan_out))
    params.add(name + "_w", w)
    params.add(name + "_b", np.zeros(fan_out))


def dense(params: ParamStore, name: str, x) -> Tensor:
    """Affine map x @ W + b, batched over leading axes.

    Accepts a single vector or a stack of row vectors; shapes must
    agree with the registered weights.
    """
    x = as_tensor(x)
    w = params[name + "_w"]
    b = params[name + "_b"]
    if x.shape[-1] != w.shape[0]:
        raise ValueError(f"dense {name!r}: input width {x.shape[-1]} != "
                         f"weight fan-in {w.shape[0]}")
    single = x.ndim == 1
    if single:
        x = x.reshape(1, -1)
    out = x @ w + b
    return out.reshape(out.shape[-1]) if single else out


def layer_norm(x, gain, bias, eps: float = 1e-5) -> Tensor:
    """Normalize the last axis to zero mean, unit variance, then affine."""
    x = as_tensor(x)
    if x.shape[-1] < 2:
        raise ValueError("layer_norm needs length >= 2 on the last axis")
    mu = x.mean(axis=-1, keepdims=True)
    centered = x - mu
    var = (centered * centered).mean(axis=-1, keepdims=True)
    return centered * (var + eps) ** -0.5 * gain + bias


def gelu_tanh(x) -> Tensor:
    """Smooth tanh-based gate used in the transformer feed-forward."""
    x = as_tensor(x)
    inner = 0.7978845608028654 * (x + 0.044715 * x * x * x)
    return 0.5 * x * (1.0 + inner.tanh())


def sinusoidal_positions(length: int, width: int) -> np.ndarray:
    """Fixed sin/cos positional table, shape (length, width)."""
    pos = np.arange(length, dtype=np.float64)[:, None]
    idx = np.arange(width, dtype=np.float64)[None, :]
    angle = pos / np.power(10000.0, 2.0 * np.floor(idx / 2.0) / width)
    table = np.where(idx % 2 == 0, np.sin(angle), np.cos(angle))
    return table


def causal_masks(t: int) -> tuple[np.ndarray, np.ndarray]:
    """(keep, push) masks: keep is 1 at allowed positions j <= i, push is
    a large negative constant at blocked positions so softmax zeroes them."""
    keep = np.tril(np.ones((t, t)))
    push = np.where(keep > 0.0, 0.0, -1e30)
    return keep, push


def init_attention(params: ParamStore, name: str, width: int,
                   rng: np.random.Generator):
    for part in ("q", "k", "v", "o"):
        init_dense(params, f"{name}_{part}", width, width, rng)


def masked_attention(params: ParamStore, name: str, sequence, heads: int,
                     return_weights: bool = False):
    """Causal scaled dot-product attention over a (T, d) or (B, T, d) input.

    Position t attends to positions <= t only; each attention row is a
    probability vector. Heads split the channel axis and are concatenated
    back before the output projection.
    """
    x = as_tensor(sequence)
    single = x.ndim == 2
    if single:
        x = x.reshape(1, *x.shape)
    b, t, d = x.shape
    if d % heads != 0:
        raise ValueError(f"width {d} not divisible by {heads} heads")
    dh = d // heads

    def split(z):
        return z.reshape(b, t, heads, dh).transpose((0, 2, 1, 3))

    q = split(dense(params, f"{name}_q", x))
    k = split(dense(params, f"{name}_k", x))
    v = split(dense(params, f"{name}_v", x))
    scores = (q @ k.transpose((0, 1, 3, 2))) * (1.0 / np.sqrt(dh))
    keep, push = causal_masks(t)
    scores = scores * keep + push
    weights = scores.softmax(axis=-1)
    mixed = weights @ v
    merged = mixed.transpose((0, 2, 1, 3)).reshape(b, t, d)
    out = dense(params, f"{name}_o", merged)
    if single:
        out = out.reshape(t, d)
        weights_out = weights.data[0]
    else:
        weights_out = weights.data
    if return_weights:
        return out, weights_out
    return out
