"""Reverse-mode autodiff over float64 numpy arrays.

Tape-based engine in the micrograd style: every op records its parents
and a closure that pushes the output gradient back to them. Sized for
the tiny dense/attention models in this package, not a general tensor
library -- only the ops those models need exist.
"""

from __future__ import annotations

import contextlib

import numpy as np


class NonFiniteError(RuntimeError):
    """An op produced a non-finite value; carries the op name."""

    def __init__(self, op: str):
        super().__init__(f"non-finite value produced by op '{op}'")
        self.op = op


_grad_enabled = True


@contextlib.contextmanager
def no_grad():
    """Disable tape recording inside the block (pure inference)."""
    global _grad_enabled
    prev = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = prev


def _unbroadcast(grad, shape):
    # Sum a gradient down to `shape` after numpy broadcasting.
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_bwd", "_op")

    def __init__(self, data, requires_grad=False):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self.requires_grad = requires_grad
        self._parents = ()
        self._bwd = None
        self._op = "leaf"

    # -- plumbing ---------------------------------------------------------

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    def item(self):
        return float(self.data)

    def __repr__(self):
        return f"Tensor(op={self._op}, shape={self.shape})"

    def _accum(self, g):
        # grads are never mutated in place, so sharing views is safe
        self.grad = g if self.grad is None else self.grad + g

    def zero_grad(self):
        self.grad = None

    def backward(self):
        """Backprop from a scalar output through the recorded tape."""
        if self.data.size != 1:
            raise ValueError("backward() requires a scalar output")
        # iterative topo sort (graphs can be deep for long sequences)
        topo, visited, stack = [], set(), [(self, False)]
        while stack:
            node, done = stack.pop()
            if done:
                topo.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if p.requires_grad and id(p) not in visited:
                    stack.append((p, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._bwd is not None and node.grad is not None:
                node._bwd(node.grad)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = as_tensor(other)
        out = _result(self.data + other.data, (self, other), "add")
        if out._bwd is _PENDING:
            def bwd(g):
                if self.requires_grad:
                    self._accum(_unbroadcast(g, self.shape))
                if other.requires_grad:
                    other._accum(_unbroadcast(g, other.shape))
            out._bwd = bwd
        return out

    __radd__ = __add__

    def __neg__(self):
        out = _result(-self.data, (self,), "neg")
        if out._bwd is _PENDING:
            out._bwd = lambda g: self._accum(-g)
        return out

    def __sub__(self, other):
        other = as_tensor(other)
        out = _result(self.data - other.data, (self, other), "sub")
        if out._bwd is _PENDING:
            def bwd(g):
                if self.requires_grad:
                    self._accum(_unbroadcast(g, self.shape))
                if other.requires_grad:
                    other._accum(_unbroadcast(-g, other.shape))
            out._bwd = bwd
        return out

    def __rsub__(self, other):
        return as_tensor(other) - self

    def __mul__(self, other):
        other = as_tensor(other)
        out = _result(self.data * other.data, (self, other), "mul")
        if out._bwd is _PENDING:
            def bwd(g):
                if self.requires_grad:
                    self._accum(_unbroadcast(g * other.data, self.shape))
                if other.requires_grad:
                    other._accum(_unbroadcast(g * self.data, other.shape))
            out._bwd = bwd
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_tensor(other)
        out = _result(self.data / other.data, (self, other), "div")
        if out._bwd is _PENDING:
            def bwd(g):
                if self.requires_grad:
                    self._accum(_unbroadcast(g / other.data, self.shape))
                if other.requires_grad:
                    other._accum(_unbroadcast(-g * self.data / other.data ** 2,
                                              other.shape))
            out._bwd = bwd
        return out

    def __rtruediv__(self, other):
        return as_tensor(other) / self

    def __pow__(self, exponent):
        if not isinstance(exponent, (int, float)):
            raise TypeError("only constant exponents are supported")
        c = float(exponent)
        out = _result(self.data ** c, (self,), "pow")
        if out._bwd is _PENDING:
            out._bwd = lambda g: self._accum(g * c * self.data ** (c - 1.0))
        return out

    def __matmul__(self, other):
        other = as_tensor(other)
        out = _result(self.data @ other.data, (self, other), "matmul")
        if out._bwd is _PENDING:
            a, b = self.data, other.data
            def bwd(g):
                if self.requires_grad:
                    self._accum(_unbroadcast(g @ b.swapaxes(-1, -2), self.shape))
                if other.requires_grad:
                    other._accum(_unbroadcast(a.swapaxes(-1, -2) @ g, other.shape))
            out._bwd = bwd
        return out

    # -- elementwise functions ---------------------------------------------

    def exp(self):
        out = _result(np.exp(self.data), (self,), "exp")
        if out._bwd is _PENDING:
            y = out.data
            out._bwd = lambda g: self._accum(g * y)
        return out

    def log(self):
        out = _result(np.log(self.data), (self,), "log")
        if out._bwd is _PENDING:
            out._bwd = lambda g: self._accum(g / self.data)
        return out

    def tanh(self):
        out = _result(np.tanh(self.data), (self,), "tanh")
        if out._bwd is _PENDING:
            y = out.data
            out._bwd = lambda g: self._accum(g * (1.0 - y * y))
        return out

    def clip(self, lo, hi):
        out = _result(np.clip(self.data, lo, hi), (self,), "clip")
        if out._bwd is _PENDING:
            mask = (self.data > lo) & (self.data < hi)
            out._bwd = lambda g: self._accum(g * mask)
        return out

    # -- reductions and shape ops -------------------------------------------

    def sum(self, axis=None, keepdims=False):
        out = _result(self.data.sum(axis=axis, keepdims=keepdims), (self,), "sum")
        if out._bwd is _PENDING:
            out._bwd = lambda g: self._accum(
                np.broadcast_to(_restore_axes(g, self.shape, axis, keepdims),
                                self.shape))
        return out

    def mean(self, axis=None, keepdims=False):
        out = _result(self.data.mean(axis=axis, keepdims=keepdims), (self,), "mean")
        if out._bwd is _PENDING:
            count = self.data.size // max(out.data.size, 1)
            out._bwd = lambda g: self._accum(
                np.broadcast_to(_restore_axes(g, self.shape, axis, keepdims),
                                self.shape) / count)
        return out

    def reshape(self, *shape):
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        out = _result(self.data.reshape(shape), (self,), "reshape")
        if out._bwd is _PENDING:
            out._bwd = lambda g: self._accum(g.reshape(self.shape))
        return out

    def transpose(self, axes):
        out = _result(self.data.transpose(axes), (self,), "transpose")
        if out._bwd is _PENDING:
            inv = np.argsort(axes)
            out._bwd = lambda g: self._accum(g.transpose(inv))
        return out

    def softmax(self, axis=-1):
        x = self.data
        ex = np.exp(x - x.max(axis=axis, keepdims=True))
        y = ex / ex.sum(axis=axis, keepdims=True)
        out = _result(y, (self,), "softmax")
        if out._bwd is _PENDING:
            def bwd(g):
                self._accum((g - (g * y).sum(axis=axis, keepdims=True)) * y)
            out._bwd = bwd
        return out


_PENDING = object()


def _result(data, parents, op):
    data = np.asarray(data, dtype=np.float64)
    if not np.all(np.isfinite(data)):
        raise NonFiniteError(op)
    needs = _grad_enabled and any(p.requires_grad for p in parents)
    out = Tensor(data)
    if needs:
        out.requires_grad = True
        out._parents = tuple(p for p in parents if p.requires_grad)
        out._bwd = _PENDING
        out._op = op
    return out


def _restore_axes(g, shape, axis, keepdims):
    # reinsert reduced axes as size-1 so the grad broadcasts back
    if keepdims:
        return g
    if axis is None:
        return g.reshape([1] * len(shape))
    axes = (axis,) if isinstance(axis, int) else tuple(axis)
    return np.expand_dims(g, tuple(a % len(shape) for a in axes))


def as_tensor(x):
    return x if isinstance(x, Tensor) else Tensor(x)


# -- symmetric eigendecomposition -------------------------------------------

def signed_descending_eigh(mat: np.ndarray):
    """Eigendecomposition of a symmetric matrix with a fixed convention.

    Eigenvalues sorted descending; each eigenvector flipped so its
    largest-magnitude component is positive (ties broken by lowest
    index, which np.argmax already does).

    Returns (eigenvalues, eigenvectors as columns).
    """
    w, v = np.linalg.eigh(mat)
    order = np.argsort(w)[::-1]
    w = w[order]
    v = v[:, order]
    picks = np.abs(v).argmax(axis=0)
    signs = np.where(v[picks, np.arange(v.shape[1])] < 0.0, -1.0, 1.0)
    return w, v * signs


def eigvecs_descending(cov: Tensor, gap: float = 1e-6) -> Tensor:
    """Sign-normalized eigenvectors of a symmetric matrix, as a Tensor op.

    The adjoint uses the standard symmetric-eigendecomposition formula
    with pair contributions zeroed when the eigengap is below `gap`
    (the formula diverges at degeneracies).
    """
    cov = as_tensor(cov)
    a = 0.5 * (cov.data + cov.data.T)
    w_raw, v_raw = np.linalg.eigh(a)
    order = np.argsort(w_raw)[::-1]
    v_sorted = v_raw[:, order]
    picks = np.abs(v_sorted).argmax(axis=0)
    signs = np.where(v_sorted[picks, np.arange(v_sorted.shape[1])] < 0.0, -1.0, 1.0)
    out = _result(v_sorted * signs, (cov,), "eigvecs")
    if out._bwd is _PENDING:
        def bwd(g):
            # undo sign flip and descending sort to get grads w.r.t. raw columns
            g_raw = np.empty_like(g)
            g_raw[:, order] = g * signs
            diff = w_raw[None, :] - w_raw[:, None]
            with np.errstate(divide="ignore"):
                f = np.where(np.abs(diff) > gap, 1.0 / diff, 0.0)
            np.fill_diagonal(f, 0.0)
            abar = v_raw @ (f * (v_raw.T @ g_raw)) @ v_raw.T
            cov._accum(0.5 * (abar + abar.T))
        out._bwd = bwd
    return out
