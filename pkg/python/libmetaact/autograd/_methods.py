import dataclasses
from typing import Optional, Sequence, Union

import numpy as np

from libmetaact.autograd._primitives import PRIMITIVES
from libmetaact.autograd._Tensor import Tensor
from libmetaact.autograd._trace import Trace, Var
from libmetaact.metaglobal import ShapeError


@dataclasses.dataclass(frozen=True)
class OpStep:
    """One step of a :class:`Program`

    Attributes
    ----------
    kind: str
        The primitive op kind, e.g. "matmul" or "spline_eval".
    inputs: tuple[str, ...]
        Names of the input values (program inputs or earlier step outputs).
    output: str
        Name given to the result.
    attrs: dict
        Non-tensor op parameters, e.g. ``{"a": -5.0, "b": 5.0, "mode": "linear",
        "order": 0}`` for "spline_eval".
    """

    kind: str
    inputs: tuple
    output: str
    attrs: dict = dataclasses.field(default_factory=dict)


@dataclasses.dataclass(frozen=True)
class Program:
    """A straight-line sequence of ops

    Attributes
    ----------
    steps: list[OpStep]
        The ops, in execution order.
    constants: tuple[str, ...] = ()
        Names of program inputs that are recorded as constants (no gradient).
        All other inputs are recorded as leaves.
    """

    steps: list
    constants: tuple = ()


def forward_record(
    program: Program,
    inputs: dict[str, Union[Tensor, np.ndarray]],
) -> tuple[Tensor, Trace]:
    """Evaluate a program and record its trace

    Parameters
    ----------
    program: Program
        The ops to evaluate.
    inputs: dict[str, Tensor]
        Input values by name.

    Returns
    -------
    (output, trace): tuple[Tensor, Trace]
        The value of the last step and the recorded trace. Program inputs are
        trace leaves (or constants) named by their input names.
    """
    if len(program.steps) == 0:
        raise ValueError("Error in forward_record: empty program")
    trace = Trace()
    env: dict[str, Var] = {}
    for name in sorted(inputs):
        if name in program.constants:
            env[name] = trace.constant(inputs[name])
        else:
            env[name] = trace.leaf(inputs[name], name)
    for step in program.steps:
        missing = [n for n in step.inputs if n not in env]
        if missing:
            raise ValueError(
                f"Error in forward_record: op '{step.kind}' has undefined "
                f"inputs {missing}"
            )
        env[step.output] = trace.apply(
            step.kind, [env[n] for n in step.inputs], **step.attrs
        )
    return (Tensor(env[program.steps[-1].output].value), trace)


def replay(trace: Trace, upto: Optional[int] = None) -> Tensor:
    """Re-evaluate every recorded op from the recorded inputs

    Returns the value of node `upto` (default: the last node).
    """
    values: list[np.ndarray] = []
    for node in trace.nodes:
        if node.kind in ("leaf", "constant"):
            values.append(node.value)
            continue
        prim = PRIMITIVES[node.kind]
        with np.errstate(all="ignore"):
            values.append(prim.forward([values[i] for i in node.inputs], node.attrs))
    index = len(values) - 1 if upto is None else upto
    return Tensor(values[index])


def _backprop(
    output: Var,
    seed: Var,
    target: Trace,
) -> dict[int, Var]:
    """Accumulate vector-Jacobian products from `output` back to the leaves

    Gradient nodes are recorded on `target`. If `target` is the trace of `output`,
    the gradients are themselves differentiable; otherwise the forward values are
    copied into `target` as constants.
    """
    source = output.trace
    if target is source:

        def resolve(i: int) -> Var:
            return Var(source, i)

    else:
        cache: dict[int, Var] = {}

        def resolve(i: int) -> Var:
            if i not in cache:
                cache[i] = target.constant(source.nodes[i].value)
            return cache[i]

    grads: dict[int, Var] = {output.index: seed}
    for node in reversed(source.nodes[: output.index + 1]):
        if node.index not in grads or not node.requires_grad:
            continue
        if node.kind in ("leaf", "constant"):
            continue
        contribs = PRIMITIVES[node.kind].vjp(
            grads[node.index],
            [resolve(i) for i in node.inputs],
            resolve(node.index),
            node.attrs,
        )
        for i, c in zip(node.inputs, contribs):
            if c is None or not source.nodes[i].requires_grad:
                continue
            grads[i] = c if i not in grads else grads[i] + c
    return grads


def grad(
    output: Var,
    wrt: Sequence[Var],
    seed: Optional[np.ndarray] = None,
    create_graph: bool = False,
) -> list:
    """Gradient of ``sum(seed * output)`` with respect to the nodes `wrt`

    Parameters
    ----------
    output: Var
        The node to differentiate.
    wrt: Sequence[Var]
        Nodes (usually leaves) of the same trace.
    seed: Optional[np.ndarray] = None
        Output weights, same shape as `output`. Default is ones.
    create_graph: bool = False
        If True, gradients are recorded on the trace of `output` and returned
        as :class:`Var`, so they can be differentiated again. Otherwise they are
        returned as np.ndarray.

    Returns
    -------
    grads: list
        One gradient per entry of `wrt`, zero where there is no path.
    """
    seed = np.ones(output.shape) if seed is None else np.asarray(seed, np.float64)
    if seed.shape != output.shape:
        raise ShapeError("backward", [seed.shape, output.shape], "seed shape")
    target = output.trace if create_graph else Trace()
    seed_var = target.constant(seed)
    grads = _backprop(output, seed_var, target) if output.requires_grad else {}
    result = []
    for v in wrt:
        if v.trace is not output.trace:
            raise ValueError("Error in grad: node belongs to another trace")
        g = grads.get(v.index)
        if create_graph:
            result.append(g if g is not None else target.constant(np.zeros(v.shape)))
        else:
            result.append(np.array(g.value) if g is not None else np.zeros(v.shape))
    return result


def backward(
    trace: Trace,
    seed: Union[Tensor, np.ndarray],
    output: Optional[int] = None,
) -> dict[str, Tensor]:
    """Gradient of ``sum(seed * output)`` with respect to every leaf

    Parameters
    ----------
    trace: Trace
        A recorded trace.
    seed: Tensor
        Output weights; must have the shape of the output node.
    output: Optional[int] = None
        Index of the output node. Default is the last node.

    Returns
    -------
    grads: dict[str, Tensor]
        Gradient for each leaf, by leaf name. Leaves with no path to the output
        get zeros.
    """
    index = len(trace.nodes) - 1 if output is None else output
    seed_arr = seed.data if isinstance(seed, Tensor) else np.asarray(seed, np.float64)
    leaves = trace.leaves
    names = list(leaves)
    grads = grad(
        Var(trace, index), [Var(trace, leaves[n]) for n in names], seed=seed_arr
    )
    return {n: Tensor(g) for n, g in zip(names, grads)}
