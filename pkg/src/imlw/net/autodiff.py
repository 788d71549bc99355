"""Minimal reverse-mode automatic differentiation over float64 numpy arrays.

Covers exactly the operations the encoders and noise networks need; shapes are
validated eagerly so failures name the offending operand instead of silently
broadcasting.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionError


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum `grad` back down to `shape` after numpy broadcasting."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad


class Tensor:
    __slots__ = ("value", "grad", "parents", "_backward", "requires_grad")

    def __init__(self, value, parents=(), backward=None, requires_grad=False):
        self.value = np.asarray(value, dtype=np.float64)
        self.grad: np.ndarray | None = None
        self.parents: tuple[Tensor, ...] = parents
        self._backward = backward
        self.requires_grad = requires_grad or any(p.requires_grad for p in parents)

    @property
    def shape(self):
        return self.value.shape

    # --- graph traversal -----------------------------------------------------

    def backward(self) -> None:
        if self.value.ndim != 0:
            raise DimensionError("backward() requires a scalar loss")
        order: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                order.append(node)
                continue
            if id(node) in seen or not node.requires_grad:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node.parents:
                stack.append((p, False))
        self.grad = np.ones_like(self.value)
        for node in reversed(order):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    def _accumulate(self, grad: np.ndarray) -> None:
        if self.grad is None:
            self.grad = np.zeros_like(self.value)
        self.grad += grad

    # --- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = _as_tensor(other)
        out = Tensor(self.value + other.value, (self, other))

        def backward(g):
            if self.requires_grad:
                self._accumulate(_unbroadcast(g, self.value.shape))
            if other.requires_grad:
                other._accumulate(_unbroadcast(g, other.value.shape))
        out._backward = backward
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Tensor(-self.value, (self,))

        def backward(g):
            if self.requires_grad:
                self._accumulate(-g)
        out._backward = backward
        return out

    def __sub__(self, other):
        return self + (-_as_tensor(other))

    def __rsub__(self, other):
        return _as_tensor(other) + (-self)

    def __mul__(self, other):
        other = _as_tensor(other)
        out = Tensor(self.value * other.value, (self, other))

        def backward(g):
            if self.requires_grad:
                self._accumulate(_unbroadcast(g * other.value, self.value.shape))
            if other.requires_grad:
                other._accumulate(_unbroadcast(g * self.value, other.value.shape))
        out._backward = backward
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_tensor(other)
        out = Tensor(self.value / other.value, (self, other))

        def backward(g):
            if self.requires_grad:
                self._accumulate(_unbroadcast(g / other.value, self.value.shape))
            if other.requires_grad:
                other._accumulate(
                    _unbroadcast(-g * self.value / other.value**2, other.value.shape))
        out._backward = backward
        return out

    def __pow__(self, exponent: float):
        out = Tensor(self.value**exponent, (self,))

        def backward(g):
            if self.requires_grad:
                self._accumulate(g * exponent * self.value ** (exponent - 1))
        out._backward = backward
        return out

    def __matmul__(self, other):
        other = _as_tensor(other)
        if self.value.shape[-1] != other.value.shape[-2 if other.value.ndim > 1 else 0]:
            raise DimensionError(
                f"matmul mismatch: {self.value.shape} @ {other.value.shape}")
        out = Tensor(self.value @ other.value, (self, other))

        def backward(g):
            if self.requires_grad:
                self._accumulate(_unbroadcast(g @ np.swapaxes(other.value, -1, -2),
                                              self.value.shape))
            if other.requires_grad:
                other._accumulate(_unbroadcast(np.swapaxes(self.value, -1, -2) @ g,
                                               other.value.shape))
        out._backward = backward
        return out

    # --- shaping -------------------------------------------------------------

    def reshape(self, *shape):
        out = Tensor(self.value.reshape(*shape), (self,))

        def backward(g):
            if self.requires_grad:
                self._accumulate(g.reshape(self.value.shape))
        out._backward = backward
        return out

    def transpose(self, axes):
        out = Tensor(np.transpose(self.value, axes), (self,))
        inverse = np.argsort(axes)

        def backward(g):
            if self.requires_grad:
                self._accumulate(np.transpose(g, inverse))
        out._backward = backward
        return out

    def sum(self, axis=None, keepdims=False):
        out = Tensor(self.value.sum(axis=axis, keepdims=keepdims), (self,))

        def backward(g):
            if self.requires_grad:
                gg = g
                if axis is not None and not keepdims:
                    gg = np.expand_dims(gg, axis)
                self._accumulate(np.broadcast_to(gg, self.value.shape).copy())
        out._backward = backward
        return out

    def mean(self, axis=None, keepdims=False):
        count = self.value.size if axis is None else self.value.shape[axis]
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    def pad_axis(self, axis: int, before: int, after: int):
        """Zero-pad along one axis (convolution halo)."""
        widths = [(0, 0)] * self.value.ndim
        widths[axis] = (before, after)
        out = Tensor(np.pad(self.value, widths), (self,))
        slicer = [slice(None)] * self.value.ndim
        slicer[axis] = slice(before, before + self.value.shape[axis])
        slicer = tuple(slicer)

        def backward(g):
            if self.requires_grad:
                self._accumulate(g[slicer])
        out._backward = backward
        return out

    def slice_axis(self, axis: int, start: int, stop: int):
        slicer = [slice(None)] * self.value.ndim
        slicer[axis] = slice(start, stop)
        slicer = tuple(slicer)
        out = Tensor(self.value[slicer], (self,))

        def backward(g):
            if self.requires_grad:
                full = np.zeros_like(self.value)
                full[slicer] = g
                self._accumulate(full)
        out._backward = backward
        return out

    # --- nonlinearities ------------------------------------------------------

    def tanh(self):
        v = np.tanh(self.value)
        out = Tensor(v, (self,))

        def backward(g):
            if self.requires_grad:
                self._accumulate(g * (1.0 - v * v))
        out._backward = backward
        return out

    def exp(self):
        v = np.exp(self.value)
        out = Tensor(v, (self,))

        def backward(g):
            if self.requires_grad:
                self._accumulate(g * v)
        out._backward = backward
        return out

    def softmax(self, axis: int = -1):
        shifted = self.value - self.value.max(axis=axis, keepdims=True)
        e = np.exp(shifted)
        v = e / e.sum(axis=axis, keepdims=True)
        out = Tensor(v, (self,))

        def backward(g):
            if self.requires_grad:
                dot = (g * v).sum(axis=axis, keepdims=True)
                self._accumulate(v * (g - dot))
        out._backward = backward
        return out


def _as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def constant(x) -> Tensor:
    return Tensor(np.asarray(x, dtype=np.float64))


def concat(tensors: list[Tensor], axis: int = -1) -> Tensor:
    values = [t.value for t in tensors]
    out = Tensor(np.concatenate(values, axis=axis), tuple(tensors))
    sizes = [v.shape[axis] for v in values]
    offsets = np.concatenate([[0], np.cumsum(sizes)])

    def backward(g):
        for t, start, stop in zip(tensors, offsets[:-1], offsets[1:]):
            if t.requires_grad:
                slicer = [slice(None)] * g.ndim
                slicer[axis] = slice(int(start), int(stop))
                t._accumulate(g[tuple(slicer)])
    out._backward = backward
    return out
