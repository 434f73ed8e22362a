"""Analytic gradients and their finite-difference verification."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import ParamStore
from .tensor import Tensor


def grad_of(loss_program, params: ParamStore) -> dict[str, np.ndarray]:
    """Reverse-mode gradients of a scalar loss for every store entry.

    `loss_program` is a zero-argument callable composing netcore ops over
    the store's tensors and returning a scalar Tensor. Entries the loss
    does not touch get exactly-zero gradients.
    """
    params.zero_grads()
    loss = loss_program()
    if not isinstance(loss, Tensor) or loss.data.size != 1:
        raise ValueError("loss program must return a scalar Tensor")
    if not np.isfinite(loss.data):
        raise ValueError("loss is non-finite at the current parameters")
    loss.backward()
    return params.grads()


@dataclass
class GradCheckReport:
    """Max relative error per parameter entry, against central differences."""

    tolerance: float
    errors: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e <= self.tolerance for e in self.errors.values())

    @property
    def worst(self) -> tuple[str, float]:
        name = max(self.errors, key=self.errors.get)
        return name, self.errors[name]

    def failing(self) -> list[str]:
        return [n for n, e in self.errors.items() if e > self.tolerance]


def grad_check(loss_program, params: ParamStore, tolerance: float = 1e-4,
               h: float = 1e-5,
               analytic: dict[str, np.ndarray] | None = None) -> GradCheckReport:
    """Compare grad_of against central differences, entry by entry.

    Relative error is |a - n| / (|a| + |n| + 1e-8) per element; the report
    stores the max over each entry. Failures are reported, not raised.
    `analytic` lets a test inject corrupted gradients as a negative control.
    """
    if analytic is None:
        analytic = grad_of(loss_program, params)
    report = GradCheckReport(tolerance=tolerance)
    for name in params.names():
        ent = params[name]
        a = analytic[name]
        n = np.zeros_like(ent.data)
        flat = ent.data.reshape(-1)
        nflat = n.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            f_plus = float(loss_program().data)
            flat[i] = orig - h
            f_minus = float(loss_program().data)
            flat[i] = orig
            nflat[i] = (f_plus - f_minus) / (2.0 * h)
        err = np.abs(a - n) / (np.abs(a) + np.abs(n) + 1e-8)
        report.errors[name] = float(err.max()) if err.size else 0.0
    return report
