"""Reverse-mode differentiation over dense float64 arrays

The :py:mod:`libmetaact.autograd` module records operations on a
:class:`Trace` and differentiates them:

- :func:`forward_record` evaluates a :class:`Program` and records its trace
- :func:`backward` returns the gradient of a recorded output for every leaf
- :func:`grad` differentiates a node, optionally recording the gradient so it can
  be differentiated again
- :func:`meta_backward` differentiates a validation loss with respect to the
  activation parameters through a window of recorded gradient descent steps

Models build their traces directly with the ops in
:py:mod:`libmetaact.autograd.ops`.

"""
from . import ops
from ._meta import (
    LossFn,
    UnrolledWindow,
    UpdateStep,
    gd_step,
    meta_backward,
)
from ._methods import (
    OpStep,
    Program,
    backward,
    forward_record,
    grad,
    replay,
)
from ._primitives import (
    PRIMITIVES,
)
from ._spectral import (
    SPECTRAL_MAX_ITER,
    SPECTRAL_TOL,
    power_iteration,
)
from ._Tensor import (
    Tensor,
)
from ._trace import (
    Trace,
    TraceNode,
    Var,
)
