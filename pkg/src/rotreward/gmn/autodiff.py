"""Minimal reverse-mode automatic differentiation over numpy arrays.

Covers exactly the operations the graph matching network needs. Tensors
record their parents and a backward closure; `backward()` runs the tape in
reverse topological order.
"""
from __future__ import annotations

import numpy as np

from .kernels import segment_sum as _segment_sum_kernel


_GRAD_ENABLED = True


class no_grad:
    """Context manager: ops built inside record no tape (inference mode)."""

    def __enter__(self):
        global _GRAD_ENABLED
        self.previous = _GRAD_ENABLED
        _GRAD_ENABLED = False

    def __exit__(self, *exc):
        global _GRAD_ENABLED
        _GRAD_ENABLED = self.previous
        return False


class Tensor:
    __slots__ = ("value", "grad", "parents", "backward_fn", "name", "_owns_grad")

    def __init__(self, value, parents=(), backward_fn=None, name=None):
        self.value = np.asarray(value)
        self.grad = None
        self._owns_grad = False
        if _GRAD_ENABLED:
            self.parents = parents
            self.backward_fn = backward_fn
        else:
            self.parents = ()
            self.backward_fn = None
        self.name = name

    @property
    def shape(self):
        return self.value.shape

    def item(self) -> float:
        return float(self.value)

    def accumulate(self, grad):
        # copy-on-write: a single incoming gradient is kept by reference
        # (buffers may be shared between tensors), a second one allocates
        if self.grad is None:
            self.grad = grad
        elif self._owns_grad:
            self.grad += grad
        else:
            self.grad = self.grad + grad
            self._owns_grad = True

    def backward(self):
        order: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for parent in node.parents:
                stack.append((parent, False))
        self.grad = np.ones_like(self.value)
        self._owns_grad = True
        for node in reversed(order):
            if node.backward_fn is not None and node.grad is not None:
                node.backward_fn(node.grad)

    # operator sugar
    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __matmul__(self, other):
        return matmul(self, other)


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Reduce grad back to the shape it was broadcast from."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad


def add(a: Tensor, b: Tensor) -> Tensor:
    value = a.value + b.value

    def backward(grad):
        a.accumulate(_unbroadcast(grad, a.value.shape))
        b.accumulate(_unbroadcast(grad, b.value.shape))

    return Tensor(value, (a, b), backward)


def sub(a: Tensor, b: Tensor) -> Tensor:
    value = a.value - b.value

    def backward(grad):
        a.accumulate(_unbroadcast(grad, a.value.shape))
        b.accumulate(_unbroadcast(-grad, b.value.shape))

    return Tensor(value, (a, b), backward)


def mul(a: Tensor, b: Tensor) -> Tensor:
    value = a.value * b.value

    def backward(grad):
        a.accumulate(_unbroadcast(grad * b.value, a.value.shape))
        b.accumulate(_unbroadcast(grad * a.value, b.value.shape))

    return Tensor(value, (a, b), backward)


def scale(a: Tensor, factor: float) -> Tensor:
    value = a.value * factor

    def backward(grad):
        a.accumulate(grad * factor)

    return Tensor(value, (a,), backward)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    value = a.value @ b.value

    def backward(grad):
        a.accumulate(grad @ b.value.T)
        b.accumulate(a.value.T @ grad)

    return Tensor(value, (a, b), backward)


def affine(x: Tensor, w: Tensor, b: Tensor) -> Tensor:
    """x @ w + b in one node (row-broadcast bias)."""
    value = x.value @ w.value + b.value

    def backward(grad):
        x.accumulate(grad @ w.value.T)
        w.accumulate(x.value.T @ grad)
        b.accumulate(grad.sum(axis=0))

    return Tensor(value, (x, w, b), backward)


def slice_rows(a: Tensor, start: int, stop: int) -> Tensor:
    value = a.value[start:stop]

    def backward(grad):
        full = np.zeros_like(a.value)
        full[start:stop] = grad
        a.accumulate(full)

    return Tensor(value, (a,), backward)


def concat_rows(tensors: list[Tensor]) -> Tensor:
    value = np.concatenate([t.value for t in tensors], axis=0)
    heights = [t.value.shape[0] for t in tensors]

    def backward(grad):
        offset = 0
        for tensor, height in zip(tensors, heights):
            tensor.accumulate(grad[offset : offset + height])
            offset += height

    return Tensor(value, tuple(tensors), backward)


def transpose(a: Tensor) -> Tensor:
    def backward(grad):
        a.accumulate(grad.T)

    return Tensor(a.value.T, (a,), backward)


def tanh(a: Tensor) -> Tensor:
    value = np.tanh(a.value)

    def backward(grad):
        a.accumulate(grad * (1.0 - value * value))

    return Tensor(value, (a,), backward)


def sigmoid(a: Tensor) -> Tensor:
    value = np.where(
        a.value >= 0, 1.0 / (1.0 + np.exp(-np.abs(a.value))), np.exp(-np.abs(a.value)) / (1.0 + np.exp(-np.abs(a.value)))
    ).astype(a.value.dtype)

    def backward(grad):
        a.accumulate(grad * value * (1.0 - value))

    return Tensor(value, (a,), backward)


def sum_all(a: Tensor) -> Tensor:
    value = a.value.sum()

    def backward(grad):
        a.accumulate(np.full_like(a.value, grad))

    return Tensor(value, (a,), backward)


def sum_axis(a: Tensor, axis: int, keepdims: bool = True) -> Tensor:
    value = a.value.sum(axis=axis, keepdims=keepdims)

    def backward(grad):
        if not keepdims:
            grad = np.expand_dims(grad, axis)
        a.accumulate(np.broadcast_to(grad, a.value.shape).copy())

    return Tensor(value, (a,), backward)


def concat_cols(tensors: list[Tensor]) -> Tensor:
    value = np.concatenate([t.value for t in tensors], axis=1)
    widths = [t.value.shape[1] for t in tensors]

    def backward(grad):
        offset = 0
        for tensor, width in zip(tensors, widths):
            tensor.accumulate(grad[:, offset : offset + width])
            offset += width

    return Tensor(value, tuple(tensors), backward)


def gather_rows(a: Tensor, index: np.ndarray) -> Tensor:
    value = a.value[index]

    def backward(grad):
        if a.value.ndim == 1:
            grad_a = np.bincount(index, weights=grad, minlength=a.value.shape[0]).astype(
                a.value.dtype
            )
        else:
            grad_a = _segment_sum_kernel(np.ascontiguousarray(grad), index, a.value.shape[0])
        a.accumulate(grad_a)

    return Tensor(value, (a,), backward)


def as_column(a: Tensor) -> Tensor:
    """View a vector (m,) as a column (m, 1)."""
    value = a.value[:, None]

    def backward(grad):
        a.accumulate(grad[:, 0])

    return Tensor(value, (a,), backward)


def row_dot(a: Tensor, b: Tensor) -> Tensor:
    """Row-wise dot product of two (m, d) matrices -> (m,)."""
    value = (a.value * b.value).sum(axis=1)

    def backward(grad):
        g = grad[:, None]
        a.accumulate(g * b.value)
        b.accumulate(g * a.value)

    return Tensor(value, (a, b), backward)


def segment_softmax_contiguous(
    a: Tensor, offsets: np.ndarray, segment_ids: np.ndarray
) -> Tensor:
    """Softmax of a (m,) vector within contiguous segments.

    offsets are the segment start indices (for reduceat); segment_ids gives
    each row's segment for the cheap broadcast back.
    """
    v = a.value
    maxima = np.maximum.reduceat(v, offsets)
    ex = np.exp(v - maxima[segment_ids])
    denominators = np.add.reduceat(ex, offsets)
    value = ex / denominators[segment_ids]

    def backward(grad):
        inner = np.add.reduceat(grad * value, offsets)
        a.accumulate((grad - inner[segment_ids]) * value)

    return Tensor(value, (a,), backward)


def segment_sum(a: Tensor, segment_ids: np.ndarray, num_segments: int) -> Tensor:
    value = _segment_sum_kernel(a.value, segment_ids, num_segments)

    def backward(grad):
        a.accumulate(grad[segment_ids])

    return Tensor(value, (a,), backward)


def row_softmax(a: Tensor) -> Tensor:
    shifted = a.value - a.value.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    value = exp / exp.sum(axis=1, keepdims=True)

    def backward(grad):
        inner = (grad * value).sum(axis=1, keepdims=True)
        a.accumulate((grad - inner) * value)

    return Tensor(value, (a,), backward)


def masked_row_softmax(a: Tensor, additive_mask: np.ndarray) -> Tensor:
    """Row softmax of a + mask; the mask (e.g. -1e30 off-block) takes no gradient."""
    masked = a.value + additive_mask
    shifted = masked - masked.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    value = exp / exp.sum(axis=1, keepdims=True)

    def backward(grad):
        inner = (grad * value).sum(axis=1, keepdims=True)
        a.accumulate((grad - inner) * value)

    return Tensor(value, (a,), backward)


def paired_row_distances(a: Tensor) -> Tensor:
    """L2 distances between consecutive row pairs of a (2B, d) matrix -> (B,)."""
    even = a.value[0::2]
    odd = a.value[1::2]
    diff = even - odd
    value = np.sqrt((diff * diff).sum(axis=1))

    def backward(grad):
        denominator = np.maximum(value, 1e-30)[:, None]
        direction = diff / denominator
        full = np.zeros_like(a.value)
        full[0::2] = grad[:, None] * direction
        full[1::2] = -grad[:, None] * direction
        a.accumulate(full)

    return Tensor(value, (a,), backward)


def euclidean_distance(a: Tensor, b: Tensor) -> Tensor:
    """L2 distance of two (1, d) rows; exact at zero, guarded backward."""
    diff = a.value - b.value
    value = np.asarray(np.sqrt((diff * diff).sum()), dtype=a.value.dtype)

    def backward(grad):
        denominator = max(float(value), 1e-30)
        direction = diff / denominator
        a.accumulate(grad * direction)
        b.accumulate(-grad * direction)

    return Tensor(value, (a, b), backward)


def exp(a: Tensor) -> Tensor:
    value = np.exp(a.value)

    def backward(grad):
        a.accumulate(grad * value)

    return Tensor(value, (a,), backward)


def bce_with_logits(z: Tensor, label) -> Tensor:
    """Binary cross-entropy of sigmoid(z) against {0,1} labels (scalar or
    vector), in the numerically stable softplus form."""
    zv = z.value
    # softplus(z) - z*label, with softplus computed stably
    value = np.maximum(zv, 0.0) + np.log1p(np.exp(-np.abs(zv))) - zv * label

    def backward(grad):
        shifted = np.exp(-np.abs(zv))
        sig = np.where(zv >= 0, 1.0 / (1.0 + shifted), shifted / (1.0 + shifted))
        z.accumulate(grad * (sig - label))

    return Tensor(value, (z,), backward)
