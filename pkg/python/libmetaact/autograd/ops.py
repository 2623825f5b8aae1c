"""Recording wrappers for the primitive ops

Each function appends one node to the trace of its first input. Numbers and
arrays passed where a :class:`Var` is expected are recorded as constants.
"""
from typing import Sequence

from libmetaact.autograd._trace import Var


def _vars(*args):
    trace = next(a.trace for a in args if isinstance(a, Var))
    return trace, [a if isinstance(a, Var) else trace.constant(a) for a in args]


def matmul(a, b) -> Var:
    """Matrix product of 2d operands"""
    trace, ins = _vars(a, b)
    return trace.apply("matmul", ins)


def transpose(a: Var) -> Var:
    return a.trace.apply("transpose", [a])


def add(a, b) -> Var:
    """Elementwise sum, with numpy broadcasting"""
    trace, ins = _vars(a, b)
    return trace.apply("add", ins)


def sub(a, b) -> Var:
    trace, ins = _vars(a, b)
    return trace.apply("sub", ins)


def mul(a, b) -> Var:
    trace, ins = _vars(a, b)
    return trace.apply("mul", ins)


def div(a, b) -> Var:
    trace, ins = _vars(a, b)
    return trace.apply("div", ins)


def scale(a: Var, c: float) -> Var:
    """Multiply by a fixed number"""
    return a.trace.apply("scale", [a], c=float(c))


def tanh(a: Var) -> Var:
    return a.trace.apply("tanh", [a])


def tanh_grad(a: Var) -> Var:
    """``1 - tanh(a)**2``"""
    return a.trace.apply("tanh_grad", [a])


def relu(a: Var) -> Var:
    """``max(0, a)``, with subgradient 0 at 0"""
    return a.trace.apply("relu", [a])


def step(a: Var) -> Var:
    """``1.0`` where ``a > 0``, else ``0.0``; not differentiated"""
    return a.trace.apply("step", [a])


def spline_eval(
    x: Var, psi, a: float, b: float, mode: str = "linear", order: int = 0
) -> Var:
    """Evaluate a spline with control values `psi` at `x`

    See :func:`libmetaact.splines.spline_values` for the meaning of 1d and 2d
    `psi`.
    """
    trace, ins = _vars(x, psi)
    return trace.apply(
        "spline_eval", ins, a=float(a), b=float(b), mode=mode, order=int(order)
    )


def spline_scatter(
    x: Var, g, psi_shape: Sequence[int], a: float, b: float, mode: str, order: int = 0
) -> Var:
    """Adjoint of :func:`spline_eval` with respect to the control values"""
    trace, ins = _vars(x, g)
    return trace.apply(
        "spline_scatter",
        ins,
        psi_shape=tuple(int(n) for n in psi_shape),
        a=float(a),
        b=float(b),
        mode=mode,
        order=int(order),
    )


def sum(a: Var) -> Var:
    """Sum of all elements, shape ``()``"""
    return a.trace.apply("sum", [a])


def sum_to(a: Var, shape: Sequence[int]) -> Var:
    """Sum over broadcast dimensions, so that the result has `shape`"""
    shape = tuple(int(n) for n in shape)
    if a.shape == shape:
        return a
    return a.trace.apply("sum_to", [a], shape=shape)


def broadcast_to(a: Var, shape: Sequence[int]) -> Var:
    shape = tuple(int(n) for n in shape)
    if a.shape == shape:
        return a
    return a.trace.apply("broadcast_to", [a], shape=shape)


def mse(pred, target) -> Var:
    """Mean of squared differences over all elements"""
    trace, ins = _vars(pred, target)
    return trace.apply("mse", ins)


def softmax(z: Var) -> Var:
    """Row-wise softmax of a 2d array"""
    return z.trace.apply("softmax", [z])


def softmax_ce(logits, targets) -> Var:
    """Mean over rows of ``-sum(targets * log(softmax(logits)))``

    `targets` (one-hot rows or probabilities) are not differentiated.
    """
    trace, ins = _vars(logits, targets)
    return trace.apply("softmax_ce", ins)


def slice_cols(a: Var, start: int, stop: int) -> Var:
    """Columns ``start:stop`` of a 2d array"""
    return a.trace.apply("slice", [a], start=int(start), stop=int(stop))


def pad_cols(a: Var, start: int, width: int) -> Var:
    """Zero-padded 2d array with `width` columns, ``a`` at columns
    ``start:start + a.shape[1]``"""
    return a.trace.apply("pad", [a], start=int(start), width=int(width))


def spectral_sigma(W: Var) -> Var:
    """Largest singular value of a 2d array, shape ``()``"""
    return W.trace.apply("spectral_sigma", [W])


def spectral_sigma_grad(W: Var) -> Var:
    """``u @ v.T`` for the leading singular vectors of `W`"""
    return W.trace.apply("spectral_sigma_grad", [W])


def spectral_sigma_grad_vjp(g: Var, W: Var) -> Var:
    """Cotangent of `W` for a cotangent `g` of :func:`spectral_sigma_grad`;
    not differentiated"""
    return g.trace.apply("spectral_sigma_grad_vjp", [g, W])
