import numpy as np
import pytest

from rotreward.gmn import autodiff as ad


def finite_difference(build, params, h=1e-6):
    """Central differences of a scalar-valued builder over flat params."""
    grads = []
    for i in range(len(params)):
        up = params.copy()
        up[i] += h
        down = params.copy()
        down[i] -= h
        grads.append((build(up) - build(down)) / (2 * h))
    return np.array(grads)


def check_op(build_tensor, n_params, seed=0, tolerance=1e-7):
    rng = np.random.default_rng(seed)
    params = rng.standard_normal(n_params)

    def value_of(p):
        out = build_tensor(ad.Tensor(p))
        return float(out.value)

    root_param = ad.Tensor(params)
    out = build_tensor(root_param)
    out.backward()
    numeric = finite_difference(value_of, params)
    assert np.allclose(root_param.grad, numeric, rtol=tolerance, atol=tolerance)


def test_affine_grad():
    rng = np.random.default_rng(0)
    x_val = rng.standard_normal((2, 3))
    w_val = rng.standard_normal((3, 4))
    b_val = rng.standard_normal(4)
    mask = rng.standard_normal((2, 4))

    x, w, b = ad.Tensor(x_val.copy()), ad.Tensor(w_val.copy()), ad.Tensor(b_val.copy())
    out = ad.sum_all(ad.mul(ad.affine(x, w, b), ad.Tensor(mask)))
    out.backward()

    def value(flat_w):
        result = x_val @ flat_w.reshape(3, 4) + b_val
        return float((result * mask).sum())

    numeric = finite_difference(value, w_val.reshape(-1).copy())
    assert np.allclose(w.grad.reshape(-1), numeric, atol=1e-6)

    def value_b(flat_b):
        return float(((x_val @ w_val + flat_b) * mask).sum())

    assert np.allclose(b.grad, finite_difference(value_b, b_val.copy()), atol=1e-6)

    def value_x(flat_x):
        return float(((flat_x.reshape(2, 3) @ w_val + b_val) * mask).sum())

    assert np.allclose(x.grad.reshape(-1), finite_difference(value_x, x_val.reshape(-1).copy()), atol=1e-6)


def test_elementwise_grads():
    rng = np.random.default_rng(1)
    x = rng.standard_normal(12)

    for op in (ad.tanh, ad.sigmoid, ad.exp):
        t = ad.Tensor(x.copy())
        out = ad.sum_all(op(t))
        out.backward()

        def value(p, op=op):
            return float(op(ad.Tensor(p)).value.sum())

        numeric = finite_difference(value, x.copy())
        assert np.allclose(t.grad, numeric, atol=1e-6)


def test_softmax_grads():
    rng = np.random.default_rng(2)
    x = rng.standard_normal(12)
    weights = rng.standard_normal(12)

    def value(p):
        mat = ad.Tensor(p.reshape(3, 4))
        return float((ad.row_softmax(mat).value * weights.reshape(3, 4)).sum())

    t = ad.Tensor(x.reshape(3, 4))
    out = ad.sum_all(ad.mul(ad.row_softmax(t), ad.Tensor(weights.reshape(3, 4))))
    out.backward()
    numeric = finite_difference(value, x.copy())
    assert np.allclose(t.grad.reshape(-1), numeric, atol=1e-6)


def test_segment_ops_grads():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(12)
    seg = np.array([0, 0, 1, 2], dtype=np.int64)
    weights = rng.standard_normal((3, 3))

    def value(p):
        t = ad.Tensor(p.reshape(4, 3))
        return float((ad.segment_sum(t, seg, 3).value * weights).sum())

    t = ad.Tensor(x.reshape(4, 3))
    out = ad.sum_all(ad.mul(ad.segment_sum(t, seg, 3), ad.Tensor(weights)))
    out.backward()
    numeric = finite_difference(value, x.copy())
    assert np.allclose(t.grad.reshape(-1), numeric, atol=1e-6)


def test_gather_and_segment_softmax_grads():
    rng = np.random.default_rng(4)
    x = rng.standard_normal(8)
    idx = np.array([0, 2, 2, 1], dtype=np.int64)
    offsets = np.array([0, 2], dtype=np.int64)
    seg_ids = np.array([0, 0, 1, 1], dtype=np.int64)
    weights = rng.standard_normal(4)

    def value(p):
        t = ad.Tensor(p)
        gathered = ad.gather_rows(t, idx)
        soft = ad.segment_softmax_contiguous(gathered, offsets, seg_ids)
        return float((soft.value * weights).sum())

    t = ad.Tensor(x.copy())
    soft = ad.segment_softmax_contiguous(ad.gather_rows(t, idx), offsets, seg_ids)
    out = ad.sum_all(ad.mul(soft, ad.Tensor(weights)))
    out.backward()
    numeric = finite_difference(value, x.copy())
    assert np.allclose(t.grad, numeric, atol=1e-6)


def test_euclidean_distance_grad_and_zero_guard():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(6)

    def value(p):
        return float(
            ad.euclidean_distance(ad.Tensor(p[:3][None, :]), ad.Tensor(p[3:][None, :])).value
        )

    a = ad.Tensor(x[:3][None, :])
    b = ad.Tensor(x[3:][None, :])
    out = ad.euclidean_distance(a, b)
    out.backward()
    numeric = finite_difference(value, x.copy())
    assert np.allclose(np.concatenate([a.grad.ravel(), b.grad.ravel()]), numeric, atol=1e-6)

    same = ad.Tensor(np.ones((1, 3)))
    zero = ad.euclidean_distance(same, ad.Tensor(np.ones((1, 3))))
    assert float(zero.value) == 0.0
    zero.backward()  # must not produce NaNs
    assert np.isfinite(same.grad).all()


def test_bce_with_logits_stability_and_grad():
    for z0 in (-50.0, -1.0, 0.0, 1.0, 50.0):
        for label in (0.0, 1.0):
            z = ad.Tensor(np.array(z0))
            loss = ad.bce_with_logits(z, label)
            assert np.isfinite(loss.value)
            loss.backward()
            sigmoid = 1.0 / (1.0 + np.exp(-z0))
            assert np.allclose(z.grad, sigmoid - label, atol=1e-9)


def test_paired_row_distances():
    rng = np.random.default_rng(6)
    x = rng.standard_normal(12)

    def value(p):
        return float(ad.paired_row_distances(ad.Tensor(p.reshape(4, 3))).value.sum())

    t = ad.Tensor(x.reshape(4, 3))
    out = ad.sum_all(ad.paired_row_distances(t))
    out.backward()
    numeric = finite_difference(value, x.copy())
    assert np.allclose(t.grad.reshape(-1), numeric, atol=1e-6)


def test_no_grad_mode_drops_tape():
    with ad.no_grad():
        t = ad.mul(ad.Tensor(np.ones(3)), ad.Tensor(np.full(3, 2.0)))
    assert t.parents == () and t.backward_fn is None


def test_shared_gradient_buffers_are_not_corrupted():
    # h appears twice in h + h; downstream of another shared path
    h = ad.Tensor(np.array([1.0, 2.0]))
    s = ad.add(h, h)
    t = ad.add(s, h)
    out = ad.sum_all(t)
    out.backward()
    assert np.allclose(h.grad, [3.0, 3.0])
