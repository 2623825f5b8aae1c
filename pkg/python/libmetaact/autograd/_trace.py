import dataclasses
from typing import Any, Optional, Union

import numpy as np
import numpy.typing as npt

from libmetaact.autograd._Tensor import Tensor
from libmetaact.metaglobal import ShapeError


@dataclasses.dataclass(frozen=True)
class TraceNode:
    """One recorded operation

    Attributes
    ----------
    index: int
        Position in the trace. Every input index is smaller.
    kind: str
        The op kind, or "leaf" / "constant" for inputs.
    inputs: tuple[int, ...]
        Indices of the input nodes.
    attrs: dict
        Non-tensor op parameters.
    value: np.ndarray
        The forward value (read-only), saved for backward.
    requires_grad: bool
        True if a leaf is upstream of this node.
    name: Optional[str]
        The leaf name, for leaves.
    """

    index: int
    kind: str
    inputs: tuple
    attrs: dict
    value: np.ndarray
    requires_grad: bool
    name: Optional[str] = None


class Var:
    """A handle on a node of a :class:`Trace`

    Arithmetic operators record new nodes on the same trace.
    """

    __slots__ = ("trace", "index")

    def __init__(self, trace: "Trace", index: int):
        self.trace = trace
        self.index = index

    @property
    def node(self) -> TraceNode:
        return self.trace.nodes[self.index]

    @property
    def value(self) -> np.ndarray:
        """np.ndarray: The forward value (read-only)"""
        return self.trace.nodes[self.index].value

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    @property
    def requires_grad(self) -> bool:
        return self.trace.nodes[self.index].requires_grad

    def _lift(self, other) -> "Var":
        if isinstance(other, Var):
            return other
        return self.trace.constant(other)

    def __add__(self, other):
        return self.trace.apply("add", [self, self._lift(other)])

    def __radd__(self, other):
        return self.trace.apply("add", [self._lift(other), self])

    def __sub__(self, other):
        return self.trace.apply("sub", [self, self._lift(other)])

    def __rsub__(self, other):
        return self.trace.apply("sub", [self._lift(other), self])

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self.trace.apply("scale", [self], c=float(other))
        return self.trace.apply("mul", [self, self._lift(other)])

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.trace.apply("scale", [self], c=float(other))
        return self.trace.apply("mul", [self._lift(other), self])

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self.trace.apply("scale", [self], c=1.0 / float(other))
        return self.trace.apply("div", [self, self._lift(other)])

    def __neg__(self):
        return self.trace.apply("scale", [self], c=-1.0)

    def __matmul__(self, other):
        return self.trace.apply("matmul", [self, self._lift(other)])

    def __repr__(self) -> str:
        node = self.node
        return f"Var(index={self.index}, kind='{node.kind}', shape={self.shape})"


class Trace:
    """A record of operations, in execution order

    Leaves are named, differentiable inputs. Constants are inputs that never
    receive gradients. Every other node is produced by :func:`Trace.apply`, which
    evaluates a primitive and appends a :class:`TraceNode`. Because nodes can only
    refer to earlier nodes, the trace is a DAG in topological order.

    A Trace is confined to the worker that builds it.
    """

    def __init__(self):
        self.nodes: list[TraceNode] = []
        self._leaf_index: dict[str, int] = {}

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def leaves(self) -> dict[str, int]:
        """dict[str, int]: Leaf name -> node index"""
        return dict(self._leaf_index)

    def _append(self, **kwargs) -> Var:
        value = kwargs["value"]
        if not isinstance(value, np.ndarray) or value.dtype != np.float64:
            value = np.asarray(value, dtype=np.float64)
        if value.flags.writeable:
            value = np.array(value)
            value.setflags(write=False)
        node = TraceNode(index=len(self.nodes), value=value, **_drop(kwargs, "value"))
        self.nodes.append(node)
        return Var(self, node.index)

    def leaf(self, value: Union[Tensor, npt.ArrayLike], name: str) -> Var:
        """Add a named differentiable input"""
        if name in self._leaf_index:
            raise ValueError(f"Error in Trace.leaf: duplicate leaf name '{name}'")
        data = value.data if isinstance(value, Tensor) else np.array(value, np.float64)
        var = self._append(
            kind="leaf", inputs=(), attrs={}, value=data, requires_grad=True, name=name
        )
        self._leaf_index[name] = var.index
        return var

    def constant(self, value: Union[Tensor, npt.ArrayLike]) -> Var:
        """Add an input that never receives gradients"""
        data = value.data if isinstance(value, Tensor) else np.array(value, np.float64)
        return self._append(
            kind="constant", inputs=(), attrs={}, value=data, requires_grad=False
        )

    def apply(self, kind: str, inputs: list[Var], **attrs: Any) -> Var:
        """Evaluate primitive `kind` on `inputs` and record it"""
        from libmetaact.autograd._primitives import PRIMITIVES

        if kind not in PRIMITIVES:
            raise ValueError(f"Error in Trace.apply: unknown op kind '{kind}'")
        prim = PRIMITIVES[kind]
        if len(inputs) != prim.n_inputs:
            raise ValueError(
                f"Error in Trace.apply: op '{kind}' takes {prim.n_inputs} inputs, "
                f"got {len(inputs)}"
            )
        for v in inputs:
            if v.trace is not self:
                raise ValueError(
                    f"Error in Trace.apply: op '{kind}' input belongs to another trace"
                )
        values = [v.value for v in inputs]
        prim.check(values, attrs)
        with np.errstate(all="ignore"):
            out = prim.forward(values, attrs)
        return self._append(
            kind=kind,
            inputs=tuple(v.index for v in inputs),
            attrs=attrs,
            value=out,
            requires_grad=any(v.requires_grad for v in inputs),
        )


def _drop(d: dict, key: str) -> dict:
    return {k: v for k, v in d.items() if k != key}


def check_broadcast(op: str, *shapes: tuple) -> tuple:
    try:
        return np.broadcast_shapes(*shapes)
    except ValueError:
        raise ShapeError(op, list(shapes), "not broadcastable")
