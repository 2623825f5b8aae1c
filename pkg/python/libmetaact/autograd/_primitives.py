"""Forward rules, shape checks, and vector-Jacobian products of the primitives

Every vector-Jacobian product is itself written with the recording ops of
:mod:`libmetaact.autograd.ops`, so gradients can be recorded and differentiated
again (used for Hessian-vector products in :func:`meta_backward`).
"""
import dataclasses
from typing import Callable, Optional

import numpy as np

import libmetaact.autograd.ops as ops
from libmetaact.autograd._spectral import power_iteration
from libmetaact.autograd._trace import Var, check_broadcast
from libmetaact.metaglobal import ShapeError
from libmetaact.splines._kernel import MODES, spline_scatter, spline_values


@dataclasses.dataclass(frozen=True)
class Primitive:
    kind: str
    n_inputs: int
    forward: Callable[[list, dict], np.ndarray]
    vjp: Callable[[Var, list, Var, dict], tuple]
    check: Callable[[list, dict], None]


def _no_check(values, attrs):
    pass


def _no_vjp(g, ins, out, attrs):
    return tuple(None for _ in ins)


def _require_2d(op, *values):
    for v in values:
        if v.ndim != 2:
            raise ShapeError(op, [x.shape for x in values], "operands must be 2d")


def _check_elementwise(op):
    def check(values, attrs):
        check_broadcast(op, *[v.shape for v in values])

    return check


# -- matmul / transpose --


def _check_matmul(values, attrs):
    A, B = values
    _require_2d("matmul", A, B)
    if A.shape[1] != B.shape[0]:
        raise ShapeError("matmul", [A.shape, B.shape], "inner dimensions differ")


def _vjp_matmul(g, ins, out, attrs):
    A, B = ins
    return (ops.matmul(g, ops.transpose(B)), ops.matmul(ops.transpose(A), g))


def _check_transpose(values, attrs):
    _require_2d("transpose", values[0])


# -- elementwise arithmetic --


def _vjp_add(g, ins, out, attrs):
    A, B = ins
    return (ops.sum_to(g, A.shape), ops.sum_to(g, B.shape))


def _vjp_sub(g, ins, out, attrs):
    A, B = ins
    return (ops.sum_to(g, A.shape), ops.scale(ops.sum_to(g, B.shape), -1.0))


def _vjp_mul(g, ins, out, attrs):
    A, B = ins
    return (ops.sum_to(ops.mul(g, B), A.shape), ops.sum_to(ops.mul(g, A), B.shape))


def _vjp_div(g, ins, out, attrs):
    A, B = ins
    ga = ops.sum_to(ops.div(g, B), A.shape)
    gb = ops.scale(ops.sum_to(ops.mul(g, ops.div(out, B)), B.shape), -1.0)
    return (ga, gb)


def _vjp_scale(g, ins, out, attrs):
    return (ops.scale(g, attrs["c"]),)


# -- nonlinearities --


def _vjp_tanh(g, ins, out, attrs):
    return (ops.mul(g, ops.tanh_grad(ins[0])),)


def _forward_tanh_grad(values, attrs):
    t = np.tanh(values[0])
    return 1.0 - t * t


def _vjp_tanh_grad(g, ins, out, attrs):
    (A,) = ins
    return (ops.mul(g, ops.scale(ops.mul(ops.tanh(A), out), -2.0)),)


def _vjp_relu(g, ins, out, attrs):
    return (ops.mul(g, ops.step(ins[0])),)


# -- splines --


def _check_spline(op):
    def check(values, attrs):
        x, other = values
        if attrs["mode"] not in MODES:
            raise ValueError(f"Error in {op}: unknown mode '{attrs['mode']}'")
        if not attrs["a"] < attrs["b"]:
            raise ValueError(f"Error in {op}: require a < b")
        if op == "spline_eval":
            psi = other
            if psi.ndim not in (1, 2) or psi.shape[-1] < 2:
                raise ShapeError(op, [x.shape, psi.shape], "bad control values")
            if psi.ndim == 2 and (x.ndim == 0 or x.shape[-1] != psi.shape[0]):
                raise ShapeError(
                    op,
                    [x.shape, psi.shape],
                    "per-column control values need one row per sample column",
                )
        else:
            if x.shape != other.shape:
                raise ShapeError(op, [x.shape, other.shape], "x and g differ")

    return check


def _forward_spline_eval(values, attrs):
    x, psi = values
    return spline_values(x, psi, attrs["a"], attrs["b"], attrs["mode"], attrs["order"])


def _vjp_spline_eval(g, ins, out, attrs):
    x, psi = ins
    a, b, mode, order = attrs["a"], attrs["b"], attrs["mode"], attrs["order"]
    gx = ops.mul(g, ops.spline_eval(x, psi, a, b, mode, order + 1))
    gpsi = ops.spline_scatter(x, g, psi.shape, a, b, mode, order)
    return (gx, gpsi)


def _forward_spline_scatter(values, attrs):
    x, g = values
    return spline_scatter(
        x, g, attrs["psi_shape"], attrs["a"], attrs["b"], attrs["mode"], attrs["order"]
    )


def _vjp_spline_scatter(u, ins, out, attrs):
    x, g = ins
    a, b, mode, order = attrs["a"], attrs["b"], attrs["mode"], attrs["order"]
    gx = ops.mul(g, ops.spline_eval(x, u, a, b, mode, order + 1))
    gg = ops.spline_eval(x, u, a, b, mode, order)
    return (gx, gg)


# -- reductions and broadcasting --


def _vjp_sum(g, ins, out, attrs):
    return (ops.broadcast_to(g, ins[0].shape),)


def _check_sum_to(values, attrs):
    shape = attrs["shape"]
    if check_broadcast("sum_to", shape, values[0].shape) != values[0].shape:
        raise ShapeError("sum_to", [values[0].shape, shape], "cannot reduce")


def _forward_sum_to(values, attrs):
    A = values[0]
    shape = attrs["shape"]
    lead = A.ndim - len(shape)
    out = A.sum(axis=tuple(range(lead))) if lead > 0 else A
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and out.shape[i] != 1)
    if axes:
        out = out.sum(axis=axes, keepdims=True)
    return np.array(out, dtype=np.float64)


def _vjp_sum_to(g, ins, out, attrs):
    return (ops.broadcast_to(g, ins[0].shape),)


def _check_broadcast_to(values, attrs):
    shape = attrs["shape"]
    if check_broadcast("broadcast_to", shape, values[0].shape) != shape:
        raise ShapeError("broadcast_to", [values[0].shape, shape], "cannot broadcast")


def _vjp_broadcast_to(g, ins, out, attrs):
    return (ops.sum_to(g, ins[0].shape),)


# -- losses --


def _check_same_shape(op):
    def check(values, attrs):
        if values[0].shape != values[1].shape:
            raise ShapeError(op, [v.shape for v in values])

    return check


def _vjp_mse(g, ins, out, attrs):
    P, Y = ins
    n = max(P.value.size, 1)
    d = ops.mul(ops.broadcast_to(g, P.shape), ops.sub(P, Y))
    return (ops.scale(d, 2.0 / n), ops.scale(d, -2.0 / n))


def _forward_softmax(values, attrs):
    z = values[0]
    e = np.exp(z - z.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


def _check_softmax(values, attrs):
    _require_2d("softmax", values[0])


def _vjp_softmax(g, ins, out, attrs):
    inner = ops.sum_to(ops.mul(g, out), (out.shape[0], 1))
    return (ops.mul(out, ops.sub(g, inner)),)


def _check_softmax_ce(values, attrs):
    _require_2d("softmax_ce", *values)
    _check_same_shape("softmax_ce")(values, attrs)


def _forward_softmax_ce(values, attrs):
    z, y = values
    shifted = z - z.max(axis=1, keepdims=True)
    log_s = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    return np.array(-(y * log_s).sum() / max(z.shape[0], 1))


def _vjp_softmax_ce(g, ins, out, attrs):
    Z, Y = ins
    n = max(Z.shape[0], 1)
    d = ops.mul(ops.broadcast_to(g, Z.shape), ops.sub(ops.softmax(Z), Y))
    return (ops.scale(d, 1.0 / n), None)


# -- column slicing --


def _check_slice(values, attrs):
    A = values[0]
    _require_2d("slice", A)
    if not 0 <= attrs["start"] <= attrs["stop"] <= A.shape[1]:
        raise ShapeError(
            "slice", [A.shape], f"columns {attrs['start']}:{attrs['stop']} out of range"
        )


def _vjp_slice(g, ins, out, attrs):
    return (ops.pad_cols(g, attrs["start"], ins[0].shape[1]),)


def _check_pad(values, attrs):
    A = values[0]
    _require_2d("pad", A)
    if attrs["start"] < 0 or attrs["start"] + A.shape[1] > attrs["width"]:
        raise ShapeError("pad", [A.shape], f"does not fit in width {attrs['width']}")


def _forward_pad(values, attrs):
    A = values[0]
    out = np.zeros((A.shape[0], attrs["width"]))
    out[:, attrs["start"] : attrs["start"] + A.shape[1]] = A
    return out


def _vjp_pad(g, ins, out, attrs):
    start = attrs["start"]
    return (ops.slice_cols(g, start, start + ins[0].shape[1]),)


# -- spectral norm --


def _check_spectral(values, attrs):
    _require_2d("spectral_sigma", values[0])
    if not np.any(values[0]):
        raise ValueError("Error in spectral_sigma: zero matrix")


def _forward_spectral_grad(values, attrs):
    sigma, u, v = power_iteration(values[0])
    return np.outer(u, v)


def _vjp_spectral_sigma(g, ins, out, attrs):
    return (ops.mul(g, ops.spectral_sigma_grad(ins[0])),)


def _vjp_spectral_sigma_grad(g, ins, out, attrs):
    return (ops.spectral_sigma_grad_vjp(g, ins[0]),)


def _check_spectral_grad_vjp(values, attrs):
    g, W = values
    _check_spectral([W], attrs)
    if g.shape != W.shape:
        raise ShapeError(
            "spectral_sigma_grad_vjp", [g.shape, W.shape], "shapes differ"
        )


def _forward_spectral_grad_vjp(values, attrs):
    # [u; v] spans the null space of M = [[-sigma I, W], [W.T, -sigma I]] and
    # [du; dv] is the solution of M [du; dv] = r(dW) orthogonal to it, so the
    # cotangent [G v; G.T u] pulls back through the same restricted inverse
    G, W = values
    m, n = W.shape
    sigma, u, v = power_iteration(W)
    null = np.concatenate([u, v]) / np.sqrt(2.0)
    M = np.block([[-sigma * np.eye(m), W], [W.T, -sigma * np.eye(n)]])
    M += sigma * np.outer(null, null)
    rhs = np.concatenate([G @ v, G.T @ u])
    rhs -= null * (null @ rhs)
    z = np.linalg.lstsq(M, rhs, rcond=None)[0]
    z -= null * (null @ z)
    zu, zv = z[:m], z[m:]
    return -(np.outer(zu, v) + np.outer(u, zv))


def _elementwise(kind, forward, vjp):
    return Primitive(kind, 2, forward, vjp, _check_elementwise(kind))


def _unary(kind, forward, vjp, check=_no_check):
    return Primitive(kind, 1, forward, vjp, check)


def _registry(*prims: Primitive) -> dict:
    return {p.kind: p for p in prims}


PRIMITIVES: dict[str, Primitive] = _registry(
    Primitive(
        "matmul", 2, lambda v, at: v[0] @ v[1], _vjp_matmul, _check_matmul
    ),
    _unary(
        "transpose",
        lambda v, at: np.ascontiguousarray(v[0].T),
        lambda g, ins, out, at: (ops.transpose(g),),
        _check_transpose,
    ),
    _elementwise("add", lambda v, at: v[0] + v[1], _vjp_add),
    _elementwise("sub", lambda v, at: v[0] - v[1], _vjp_sub),
    _elementwise("mul", lambda v, at: v[0] * v[1], _vjp_mul),
    _elementwise("div", lambda v, at: v[0] / v[1], _vjp_div),
    _unary("scale", lambda v, at: v[0] * at["c"], _vjp_scale),
    _unary("tanh", lambda v, at: np.tanh(v[0]), _vjp_tanh),
    _unary("tanh_grad", _forward_tanh_grad, _vjp_tanh_grad),
    _unary("relu", lambda v, at: np.maximum(v[0], 0.0), _vjp_relu),
    _unary("step", lambda v, at: (v[0] > 0.0).astype(np.float64), _no_vjp),
    Primitive(
        "spline_eval",
        2,
        _forward_spline_eval,
        _vjp_spline_eval,
        _check_spline("spline_eval"),
    ),
    Primitive(
        "spline_scatter",
        2,
        _forward_spline_scatter,
        _vjp_spline_scatter,
        _check_spline("spline_scatter"),
    ),
    _unary("sum", lambda v, at: np.array(v[0].sum()), _vjp_sum),
    _unary("sum_to", _forward_sum_to, _vjp_sum_to, _check_sum_to),
    _unary(
        "broadcast_to",
        lambda v, at: np.array(np.broadcast_to(v[0], at["shape"])),
        _vjp_broadcast_to,
        _check_broadcast_to,
    ),
    Primitive(
        "mse",
        2,
        lambda v, at: np.array(np.mean((v[0] - v[1]) ** 2)),
        _vjp_mse,
        _check_same_shape("mse"),
    ),
    _unary("softmax", _forward_softmax, _vjp_softmax, _check_softmax),
    Primitive(
        "softmax_ce", 2, _forward_softmax_ce, _vjp_softmax_ce, _check_softmax_ce
    ),
    _unary(
        "slice",
        lambda v, at: np.array(v[0][:, at["start"] : at["stop"]]),
        _vjp_slice,
        _check_slice,
    ),
    _unary("pad", _forward_pad, _vjp_pad, _check_pad),
    _unary(
        "spectral_sigma",
        lambda v, at: np.array(power_iteration(v[0])[0]),
        _vjp_spectral_sigma,
        _check_spectral,
    ),
    _unary(
        "spectral_sigma_grad",
        _forward_spectral_grad,
        _vjp_spectral_sigma_grad,
        _check_spectral,
    ),
    Primitive(
        "spectral_sigma_grad_vjp",
        2,
        _forward_spectral_grad_vjp,
        _no_vjp,
        _check_spectral_grad_vjp,
    ),
)


def primitive(kind: str) -> Optional[Primitive]:
    return PRIMITIVES.get(kind)
