"""Minimal numeric substrate: autodiff tensors, layers, Adam, grad checks."""

from .gradcheck import GradCheckReport, grad_check, grad_of
from .layers import (causal_masks, dense, gelu_tanh, init_attention,
                     init_dense, layer_norm, masked_attention,
                     sinusoidal_positions)
from .optim import optimizer_step
from .params import ParamStore
from .tensor import (NonFiniteError, Tensor, as_tensor, eigvecs_descending,
                     no_grad, signed_descending_eigh)

__all__ = [
    "GradCheckReport", "grad_check", "grad_of",
    "causal_masks", "dense", "gelu_tanh", "init_attention", "init_dense",
    "layer_norm", "masked_attention", "sinusoidal_positions",
    "optimizer_step", "ParamStore",
    "NonFiniteError", "Tensor", "as_tensor", "eigvecs_descending",
    "no_grad", "signed_descending_eigh",
]
