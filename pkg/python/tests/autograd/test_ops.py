import numpy as np
import pytest

import libmetaact.autograd as ag
import libmetaact.autograd.ops as ops
from libmetaact.metaglobal import ShapeError


def test_forward_record_matmul():
    program = ag.Program(steps=[ag.OpStep("matmul", ("A", "B"), "C")])
    out, trace = ag.forward_record(
        program,
        {"A": ag.Tensor([[1.0, 2.0], [3.0, 4.0]]), "B": ag.Tensor([[1.0], [1.0]])},
    )
    assert out.shape == (2, 1)
    assert out.tolist() == [[3.0], [7.0]]
    assert len(trace) == 3


def test_forward_record_relu():
    program = ag.Program(steps=[ag.OpStep("relu", ("x",), "y")])
    out, trace = ag.forward_record(program, {"x": ag.Tensor([-1.0, 0.0, 2.0])})
    assert out.tolist() == [0.0, 0.0, 2.0]


def test_forward_record_zero_spline():
    attrs = {"a": -5.0, "b": 5.0, "mode": "linear", "order": 0}
    program = ag.Program(steps=[ag.OpStep("spline_eval", ("x", "psi"), "y", attrs)])
    x = np.linspace(-7.0, 7.0, 15).reshape(5, 3)
    out, trace = ag.forward_record(
        program, {"x": ag.Tensor(x), "psi": ag.Tensor(np.zeros(50))}
    )
    assert np.all(out.data == 0.0)


def test_shape_mismatch_names_op():
    program = ag.Program(steps=[ag.OpStep("matmul", ("A", "B"), "C")])
    with pytest.raises(ShapeError) as excinfo:
        ag.forward_record(
            program, {"A": ag.Tensor(np.ones((2, 3))), "B": ag.Tensor(np.ones((2, 1)))}
        )
    assert excinfo.value.op == "matmul"
    assert excinfo.value.shapes == [(2, 3), (2, 1)]
    assert "matmul" in str(excinfo.value)

    trace = ag.Trace()
    with pytest.raises(ShapeError):
        ops.add(trace.leaf(np.ones(3), "a"), trace.leaf(np.ones(4), "b"))
    with pytest.raises(ShapeError):
        ops.mse(trace.leaf(np.ones((2, 1)), "p"), trace.constant(np.ones((2, 2))))


def test_replay_is_bit_identical(rng):
    program = ag.Program(
        steps=[
            ag.OpStep("matmul", ("x", "W"), "z"),
            ag.OpStep("add", ("z", "b"), "z1"),
            ag.OpStep("tanh", ("z1",), "h"),
            ag.OpStep(
                "spline_eval",
                ("h", "psi"),
                "g",
                {"a": -1.0, "b": 1.0, "mode": "cubic", "order": 0},
            ),
            ag.OpStep("mse", ("g", "y"), "loss"),
        ],
        constants=("y",),
    )
    inputs = {
        "x": ag.Tensor(rng.standard_normal((6, 3))),
        "W": ag.Tensor(rng.standard_normal((3, 4))),
        "b": ag.Tensor(rng.standard_normal(4)),
        "psi": ag.Tensor(rng.standard_normal(9)),
        "y": ag.Tensor(rng.standard_normal((6, 4))),
    }
    out, trace = ag.forward_record(program, inputs)
    assert np.array_equal(ag.replay(trace).data, out.data)
    out2, trace2 = ag.forward_record(program, inputs)
    assert np.array_equal(out2.data, out.data)
    g1 = ag.backward(trace, ag.Tensor(1.0))
    g2 = ag.backward(trace2, ag.Tensor(1.0))
    assert set(g1.keys()) == {"x", "W", "b", "psi"}
    for name in g1:
        assert np.array_equal(g1[name].data, g2[name].data)


def test_backward_relu_sum():
    program = ag.Program(
        steps=[ag.OpStep("relu", ("x",), "h"), ag.OpStep("sum", ("h",), "s")]
    )
    out, trace = ag.forward_record(program, {"x": ag.Tensor([-1.0, 2.0])})
    grads = ag.backward(trace, ag.Tensor(1.0))
    assert grads["x"].tolist() == [0.0, 1.0]


def test_backward_relu_subgradient_at_zero():
    trace = ag.Trace()
    x = trace.leaf([0.0], "x")
    (g,) = ag.grad(ops.sum(ops.relu(x)), [x])
    assert g.tolist() == [0.0]


def test_backward_unreached_leaf_is_zero():
    program = ag.Program(steps=[ag.OpStep("tanh", ("x",), "y")])
    out, trace = ag.forward_record(
        program, {"x": ag.Tensor([0.5, 1.0]), "unused": ag.Tensor(np.ones((2, 2)))}
    )
    grads = ag.backward(trace, ag.Tensor([1.0, 1.0]))
    assert np.array_equal(grads["unused"].data, np.zeros((2, 2)))


def test_backward_seed_shape():
    program = ag.Program(steps=[ag.OpStep("tanh", ("x",), "y")])
    out, trace = ag.forward_record(program, {"x": ag.Tensor([0.5, 1.0])})
    with pytest.raises(ShapeError):
        ag.backward(trace, ag.Tensor([1.0, 1.0, 1.0]))


@pytest.mark.parametrize("x", [0.3, 1.7, 2.0, 4.0])
def test_spline_psi_gradient_inside(x, central_difference):
    psi = np.linspace(-1.0, 2.0, 5)

    def f(p):
        trace = ag.Trace()
        out = ops.spline_eval(trace.constant([x]), trace.leaf(p, "psi"), 0.0, 4.0)
        return float(out.value[0])

    trace = ag.Trace()
    pv = trace.leaf(psi, "psi")
    out = ops.spline_eval(trace.constant([x]), pv, 0.0, 4.0)
    (g,) = ag.grad(out, [pv])
    assert np.count_nonzero(g) <= 2
    assert np.sum(g) == pytest.approx(1.0, abs=1e-14)
    assert np.all(g >= 0.0)
    np.testing.assert_allclose(g, central_difference(f, psi), atol=1e-8)


@pytest.mark.parametrize("x, index", [(-3.0, 0), (9.0, 4)])
def test_spline_psi_gradient_outside(x, index):
    trace = ag.Trace()
    pv = trace.leaf(np.linspace(-1.0, 2.0, 5), "psi")
    out = ops.spline_eval(trace.constant([x]), pv, 0.0, 4.0)
    (g,) = ag.grad(out, [pv])
    expected = np.zeros(5)
    expected[index] = 1.0
    assert np.array_equal(g, expected)


def test_mse_matmul_gradient(rng, central_difference):
    x = rng.standard_normal((3, 4))
    y = rng.standard_normal((3, 4))
    W = rng.standard_normal((3, 3))

    def f(W_):
        trace = ag.Trace()
        return float(ops.mse(ops.matmul(trace.constant(W_), x), y).value)

    trace = ag.Trace()
    Wv = trace.leaf(W, "W")
    (g,) = ag.grad(ops.mse(ops.matmul(Wv, trace.constant(x)), trace.constant(y)), [Wv])
    fd = central_difference(f, W)
    assert np.max(np.abs(g - fd) / np.abs(fd)) <= 1e-6


def test_primitive_gradients(rng, check_gradient):
    x = rng.uniform(0.5, 1.5, size=(3, 4))
    other = rng.uniform(0.5, 1.5, size=(3, 4))
    row = rng.uniform(0.5, 1.5, size=(4,))
    onehot = np.eye(4)[[0, 2, 1]]

    check_gradient(lambda t, v: ops.tanh(v), x)
    check_gradient(lambda t, v: ops.tanh_grad(v), x)
    check_gradient(lambda t, v: ops.relu(v - 1.0), x)
    check_gradient(lambda t, v: ops.mul(v, other), x)
    check_gradient(lambda t, v: ops.div(other, v), x)
    check_gradient(lambda t, v: ops.div(v, row), x)
    check_gradient(lambda t, v: ops.sub(row, v), x)
    check_gradient(lambda t, v: ops.add(v, row), x)
    check_gradient(lambda t, v: ops.scale(v, -2.5), x)
    check_gradient(lambda t, v: ops.transpose(v), x)
    check_gradient(lambda t, v: ops.sum_to(v, (1, 4)), x)
    check_gradient(lambda t, v: ops.sum_to(v, (4,)), x)
    check_gradient(lambda t, v: ops.broadcast_to(ops.sum_to(v, (4,)), (2, 3, 4)), x)
    check_gradient(lambda t, v: ops.mul(ops.softmax(v), other), x)
    check_gradient(lambda t, v: ops.softmax_ce(v, onehot), x)
    check_gradient(lambda t, v: ops.mse(v, other), x)
    check_gradient(lambda t, v: ops.mul(ops.slice_cols(v, 1, 3), other[:, :2]), x)
    weights = np.arange(21.0).reshape(3, 7)
    check_gradient(lambda t, v: ops.mul(ops.pad_cols(v, 2, 7), weights), x)
    check_gradient(lambda t, v: ops.spectral_sigma(v), x)
    check_gradient(lambda t, v: ops.div(v, ops.spectral_sigma(v)), x)
    check_gradient(
        lambda t, v: ops.mul(ops.spectral_sigma_grad(v), other),
        x,
        rtol=1e-3,
        atol=1e-5,
        eps=1e-3,
    )


@pytest.mark.parametrize("mode", ["linear", "cubic"])
def test_spline_gradients(mode, rng, check_gradient):
    psi = rng.standard_normal(9)
    # samples away from grid points, so the op is differentiable in x
    cells = np.arange(12).reshape(4, 3) % 8
    x = -2.0 + 0.5 * cells + 0.5 * rng.uniform(0.2, 0.8, (4, 3))
    check_gradient(lambda t, v: ops.spline_eval(v, psi, -2.0, 2.0, mode), x)
    check_gradient(lambda t, v: ops.spline_eval(x, v, -2.0, 2.0, mode), psi)
    psi_cols = rng.standard_normal((3, 9))
    check_gradient(lambda t, v: ops.spline_eval(x, v, -2.0, 2.0, mode), psi_cols)
    check_gradient(lambda t, v: ops.spline_eval(v, psi_cols, -2.0, 2.0, mode), x)
    g = rng.standard_normal((4, 3))
    check_gradient(
        lambda t, v: ops.spline_scatter(x, v, psi.shape, -2.0, 2.0, mode), g
    )


def test_second_order_tanh():
    trace = ag.Trace()
    x = trace.leaf(np.array([-0.7, 0.1, 1.3]), "x")
    (g,) = ag.grad(ops.sum(ops.tanh(x)), [x], create_graph=True)
    (h,) = ag.grad(ops.sum(g), [x])
    t = np.tanh(x.value)
    np.testing.assert_allclose(h, -2.0 * t * (1.0 - t * t), rtol=1e-12)


def test_second_order_spline_mixed(rng, central_difference):
    """d/dpsi of sum(v * d/dx spline(x, psi)) by double backward"""
    psi = rng.standard_normal(7)
    x = np.array([-0.8, -0.1, 0.35, 0.9])
    v = rng.standard_normal(4)

    def f(p):
        trace = ag.Trace()
        xv = trace.leaf(x, "x")
        out = ops.sum(ops.spline_eval(xv, trace.constant(p), -1.0, 1.0, "cubic"))
        (gx,) = ag.grad(out, [xv])
        return float(np.dot(gx, v))

    trace = ag.Trace()
    xv = trace.leaf(x, "x")
    pv = trace.leaf(psi, "psi")
    out = ops.sum(ops.spline_eval(xv, pv, -1.0, 1.0, "cubic"))
    (gx,) = ag.grad(out, [xv], create_graph=True)
    (gp,) = ag.grad(ops.sum(ops.mul(gx, v)), [pv])
    np.testing.assert_allclose(gp, central_difference(f, psi), rtol=1e-5, atol=1e-7)
