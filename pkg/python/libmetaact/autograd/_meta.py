import collections
import dataclasses
from typing import Callable, Optional

import numpy as np

import libmetaact.autograd.ops as ops
from libmetaact.autograd._methods import grad
from libmetaact.autograd._trace import Trace, Var
from libmetaact.metaglobal import ConfigError

LossFn = Callable[[Trace, dict, dict], Var]
"""Loss builder: ``loss_fn(trace, params, psi) -> scalar Var``, where `params`
and `psi` map names to nodes of `trace`."""


def _record_inputs(
    trace: Trace,
    values: dict[str, np.ndarray],
    prefix: str,
    differentiable: bool,
) -> dict[str, Var]:
    if differentiable:
        return {k: trace.leaf(v, f"{prefix}:{k}") for k, v in values.items()}
    return {k: trace.constant(v) for k, v in values.items()}


@dataclasses.dataclass(frozen=True)
class UpdateStep:
    """One recorded plain gradient descent step

    ``params_out = params_in - lr * grad_params(loss_fn(params_in, psi))``

    Attributes
    ----------
    params_in: dict[str, np.ndarray]
        The parameters entering the step.
    lr: float
        The learning rate.
    loss_fn: LossFn
        Builds the inner loss on a fresh trace. It must be deterministic (any
        minibatch is fixed inside the closure).
    """

    params_in: dict
    lr: float
    loss_fn: LossFn


def gd_step(
    loss_fn: LossFn,
    params: dict[str, np.ndarray],
    psi: dict[str, np.ndarray],
    lr: float,
) -> tuple[dict[str, np.ndarray], float, UpdateStep]:
    """Take one plain gradient descent step on the parameters

    Returns
    -------
    (params_out, loss, step): tuple[dict, float, UpdateStep]
        The updated parameters, the loss value before the step, and the record
        of the step.
    """
    trace = Trace()
    theta = _record_inputs(trace, params, "theta", True)
    psi_vars = _record_inputs(trace, psi, "psi", False)
    loss = loss_fn(trace, theta, psi_vars)
    names = list(theta)
    grads = grad(loss, [theta[n] for n in names])
    out = {n: params[n] - lr * g for n, g in zip(names, grads)}
    record = UpdateStep(params_in=dict(params), lr=float(lr), loss_fn=loss_fn)
    return (out, float(loss.value), record)


class UnrolledWindow:
    """The last `capacity` inner update steps

    Older steps are dropped as new ones are recorded, so the parameters entering
    the oldest kept step act as constants for :func:`meta_backward`.
    """

    def __init__(self, capacity: int):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        capacity: int
            Maximum number of steps kept. Must be >= 0.
        """
        if capacity < 0:
            raise ConfigError("Error in UnrolledWindow: capacity must be >= 0")
        self.capacity = capacity
        self._steps: collections.deque = collections.deque(maxlen=max(capacity, 1))

    def __len__(self) -> int:
        return len(self._steps) if self.capacity > 0 else 0

    @property
    def steps(self) -> list[UpdateStep]:
        """list[UpdateStep]: The kept steps, oldest first"""
        return list(self._steps) if self.capacity > 0 else []

    def record(self, step: UpdateStep) -> None:
        if self.capacity > 0:
            self._steps.append(step)

    def step(
        self,
        loss_fn: LossFn,
        params: dict[str, np.ndarray],
        psi: dict[str, np.ndarray],
        lr: float,
    ) -> tuple[dict[str, np.ndarray], float]:
        """Take one gradient descent step and record it

        Returns the updated parameters and the loss before the step.
        """
        out, loss, record = gd_step(loss_fn, params, psi, lr)
        self.record(record)
        return (out, loss)


def meta_backward(
    window: UnrolledWindow,
    outer_loss_fn: LossFn,
    params: dict[str, np.ndarray],
    psi: dict[str, np.ndarray],
    t: Optional[int] = None,
) -> tuple[float, dict[str, np.ndarray]]:
    """Gradient of an outer loss with respect to the activation parameters

    The outer loss is evaluated at the final parameters `params`. The gradient
    includes the direct effect of `psi` on the outer loss and its effect on the
    parameters through the last `t` recorded steps. Parameters entering the
    window are constants.

    Going backwards through step ``k`` with ``params_{k+1} = params_k - lr *
    grad_params L_k``, the adjoint ``v`` of ``params_{k+1}`` contributes

    - ``v - lr * H_{params,params} v`` to the adjoint of ``params_k``, and
    - ``-lr * H_{psi,params} v`` to the gradient of `psi`,

    where the Hessian-vector products are the gradients of
    ``sum(grad_params L_k * v)`` on a freshly recorded trace of step ``k``.

    Parameters
    ----------
    window: UnrolledWindow
        The recorded steps that produced `params`.
    outer_loss_fn: LossFn
        Builds the outer (validation) loss.
    params: dict[str, np.ndarray]
        The final parameters.
    psi: dict[str, np.ndarray]
        The activation parameters used by every step and by the outer loss.
    t: Optional[int] = None
        Number of steps to differentiate through. Default is all recorded
        steps. ``t = 0`` gives the direct gradient only.

    Returns
    -------
    (outer_loss, grads): tuple[float, dict[str, np.ndarray]]
        The outer loss value and its gradient for each entry of `psi`.
    """
    steps = window.steps
    t = len(steps) if t is None else t
    if t < 0:
        raise ConfigError("Error in meta_backward: t must be >= 0")
    if t > len(steps):
        raise ConfigError(
            f"Error in meta_backward: t={t} exceeds the {len(steps)} recorded steps"
        )

    trace = Trace()
    theta = _record_inputs(trace, params, "theta", True)
    psi_vars = _record_inputs(trace, psi, "psi", True)
    loss = outer_loss_fn(trace, theta, psi_vars)
    theta_names = list(theta)
    psi_names = list(psi_vars)
    g = grad(loss, [theta[n] for n in theta_names] + [psi_vars[n] for n in psi_names])
    v = dict(zip(theta_names, g[: len(theta_names)]))
    g_psi = dict(zip(psi_names, g[len(theta_names) :]))
    outer_loss = float(loss.value)

    for record in reversed(steps[len(steps) - t :]):
        tr = Trace()
        th = _record_inputs(tr, record.params_in, "theta", True)
        ps = _record_inputs(tr, psi, "psi", True)
        inner = record.loss_fn(tr, th, ps)
        gk = grad(inner, [th[n] for n in theta_names], create_graph=True)
        dot = None
        for n, gn in zip(theta_names, gk):
            term = ops.sum(ops.mul(gn, tr.constant(v[n])))
            dot = term if dot is None else dot + term
        hv = grad(dot, [th[n] for n in theta_names] + [ps[n] for n in psi_names])
        for i, n in enumerate(theta_names):
            v[n] = v[n] - record.lr * hv[i]
        for i, n in enumerate(psi_names):
            g_psi[n] = g_psi[n] - record.lr * hv[len(theta_names) + i]

    return (outer_loss, g_psi)
