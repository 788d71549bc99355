"""Reverse-mode autodiff: every op checked against central finite differences."""

import numpy as np
import pytest

from imlw.errors import DimensionError
from imlw.net.autodiff import Tensor, concat


def fd_grad(f, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of a scalar function, elementwise."""
    g = np.zeros_like(x)
    flat = x.reshape(-1)
    gf = g.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        up = f(x)
        flat[i] = orig - h
        down = f(x)
        flat[i] = orig
        gf[i] = (up - down) / (2 * h)
    return g


def check(build, shape, rng, rtol=1e-6):
    """Compare autodiff against FD for a scalar-valued graph over one input."""
    x = rng.normal(size=shape)
    t = Tensor(x.copy(), requires_grad=True)
    loss = build(t)
    loss.backward()
    numeric = fd_grad(lambda v: float(build(Tensor(v.copy(), requires_grad=True)).value), x)
    np.testing.assert_allclose(t.grad, numeric, rtol=rtol, atol=1e-8)


class TestOpGradients:
    # [DERIVED] every gradient vs. central finite differences

    def test_add_mul(self, rng):
        c = rng.normal(size=(3, 4))
        check(lambda t: ((t + c) * t).sum(), (3, 4), rng)

    def test_broadcast_add(self, rng):
        c = rng.normal(size=(4,))
        check(lambda t: ((t + c) * (t + c)).sum(), (3, 4), rng)

    def test_sub_neg_div(self, rng):
        c = rng.normal(size=(3, 4)) + 3.0
        check(lambda t: ((t - c) / c - (-t)).sum(), (3, 4), rng)

    def test_pow(self, rng):
        check(lambda t: ((t * t + 1.0) ** 1.5).sum(), (5,), rng)

    def test_matmul(self, rng):
        w = rng.normal(size=(4, 2))
        check(lambda t: ((t @ w) * (t @ w)).sum(), (3, 4), rng)

    def test_batched_matmul(self, rng):
        w = rng.normal(size=(2, 4, 3))
        check(lambda t: (t @ w).sum(), (2, 5, 4), rng)

    def test_reshape_transpose(self, rng):
        check(lambda t: (t.reshape(4, 3).transpose((1, 0)) ** 2.0).sum(), (3, 4), rng)

    def test_sum_axis_mean(self, rng):
        check(lambda t: (t.sum(axis=1) ** 2.0).mean(), (3, 4), rng)

    def test_pad_slice(self, rng):
        check(lambda t: (t.pad_axis(1, 1, 1).slice_axis(1, 0, 4) ** 2.0).sum(), (2, 4), rng)

    def test_tanh_exp(self, rng):
        check(lambda t: (t.tanh() * t.exp()).sum(), (3, 3), rng)

    def test_softmax(self, rng):
        c = rng.normal(size=(3, 4))
        check(lambda t: (t.softmax(axis=-1) * c).sum(), (3, 4), rng)

    def test_concat(self, rng):
        c = rng.normal(size=(3, 2))
        check(lambda t: (concat([t, Tensor(c)], axis=1) ** 2.0).sum(), (3, 2), rng)


class TestGraphMechanics:
    def test_backward_requires_scalar(self, rng):
        t = Tensor(rng.normal(size=(3,)), requires_grad=True)
        with pytest.raises(DimensionError):
            (t * 2.0).backward()

    def test_grad_accumulates_across_uses(self):
        t = Tensor(np.array(2.0), requires_grad=True)
        loss = t * t + t  # d/dt = 2t + 1 = 5
        loss.backward()
        assert t.grad == pytest.approx(5.0)

    def test_no_grad_without_requires(self):
        t = Tensor(np.array(2.0))
        loss = t * t
        loss.backward()
        assert t.grad is None

    def test_matmul_shape_check(self, rng):
        a = Tensor(rng.normal(size=(3, 4)))
        b = Tensor(rng.normal(size=(3, 4)))
        with pytest.raises(DimensionError):
            a @ b

    def test_deep_chain_iterative_traversal(self):
        # deep graphs must not hit the recursion limit
        t = Tensor(np.array(1.0), requires_grad=True)
        x = t
        for _ in range(5000):
            x = x + 0.0
        x.backward()
        assert t.grad == pytest.approx(1.0)

    def test_float64_everywhere(self):
        t = Tensor(np.array([1, 2], dtype=np.int64))
        assert t.value.dtype == np.float64
