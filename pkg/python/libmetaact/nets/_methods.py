from typing import Optional, Union

import numpy as np
import numpy.typing as npt

import libmetaact.autograd as ag
import libmetaact.autograd.ops as ops
from libmetaact.metaglobal import ConfigError, ShapeError
from libmetaact.nets._MlpSpec import MlpSpec
from libmetaact.nets._ParamSet import ParamSet
from libmetaact.splines import ActivationBinding

ActivationParams = dict
"""dict[str, np.ndarray]: Spline control values of a network, by name.

- "hidden": shared hidden-layer spline, shape ``(n_c,)``
- "hidden0", "hidden1", ...: per-layer hidden splines, shape ``(n_c,)``
- "iaf": input activation functions, shape ``(input_dim, n_c)``
"""


def init_params(spec: MlpSpec, seed: int) -> ParamSet:
    """Initialize network parameters

    Weights are drawn uniformly from ``[-limit, limit]``, with
    ``limit = sqrt(6 / (fan_in + fan_out))``; biases are zero.

    Parameters
    ----------
    spec: MlpSpec
        The architecture.
    seed: int
        Seed for ``numpy.random.default_rng``.

    Returns
    -------
    params: ParamSet
        The initial parameters.
    """
    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for fan_in, fan_out in spec.layer_shapes():
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return ParamSet(weights, biases)


def param_vector(params: ParamSet) -> np.ndarray:
    """Flatten parameters, see :func:`ParamSet.to_vector`"""
    return params.to_vector()


def params_from_vector(spec: MlpSpec, vector: npt.ArrayLike) -> ParamSet:
    """Inverse of :func:`param_vector` for the architecture `spec`"""
    vector = np.asarray(vector, dtype=np.float64)
    weights = []
    biases = []
    offset = 0
    for fan_in, fan_out in spec.layer_shapes():
        n = fan_in * fan_out
        if offset + n + fan_out > vector.size:
            raise ConfigError(
                "Error in params_from_vector: vector too short for the architecture"
            )
        weights.append(vector[offset : offset + n].reshape(fan_in, fan_out))
        offset += n
        biases.append(vector[offset : offset + fan_out])
        offset += fan_out
    if offset != vector.size:
        raise ConfigError(
            f"Error in params_from_vector: vector has {vector.size} values, "
            f"architecture needs {offset}"
        )
    return ParamSet(weights, biases)


def activation_params(spec: MlpSpec) -> ActivationParams:
    """Collect the spline control values of a network

    Returns an empty dict if the network has no spline activations.
    """
    psi = {}
    act = spec.activation
    if act.kind == "spline":
        if act.scope == "shared":
            psi["hidden"] = np.array(act.splines[0].psi)
        else:
            for i, s in enumerate(act.splines):
                psi[f"hidden{i}"] = np.array(s.psi)
    if spec.iaf is not None:
        psi["iaf"] = np.stack([s.psi for s in spec.iaf.splines])
    return psi


def with_activation_params(spec: MlpSpec, psi: ActivationParams) -> MlpSpec:
    """Return a copy of `spec` with spline control values replaced

    Entries of `psi` follow :data:`ActivationParams`; splines without an entry
    are kept.
    """
    act = spec.activation
    if act.kind == "spline":
        if act.scope == "shared":
            if "hidden" in psi:
                act = act.with_splines([act.splines[0].with_psi(psi["hidden"])])
        else:
            act = act.with_splines(
                [
                    s.with_psi(psi[f"hidden{i}"]) if f"hidden{i}" in psi else s
                    for i, s in enumerate(act.splines)
                ]
            )
    iaf = spec.iaf
    if iaf is not None and "iaf" in psi:
        iaf = iaf.with_splines(
            [s.with_psi(row) for s, row in zip(iaf.splines, psi["iaf"])]
        )
    return spec.replace(activation=act, iaf=iaf)


def spectral_normalize(W: npt.ArrayLike) -> np.ndarray:
    """Divide a matrix by its largest singular value

    The largest singular value is found by power iteration (relative tolerance
    1e-8, at most 1000 iterations).

    Raises
    ------
    ValueError
        If `W` is zero.
    """
    W = np.asarray(W, dtype=np.float64)
    if not np.any(W):
        raise ValueError("Error in spectral_normalize: zero matrix")
    sigma, u, v = ag.power_iteration(W)
    return W / sigma


def _activation(
    h: ag.Var,
    binding: ActivationBinding,
    layer: int,
    psi: dict[str, ag.Var],
) -> ag.Var:
    if binding.kind == "relu":
        return ops.relu(h)
    if binding.kind == "tanh":
        return ops.tanh(ops.scale(h, binding.alpha))
    s = binding.layer_spline(layer)
    key = "hidden" if binding.scope == "shared" else f"hidden{layer}"
    return ops.spline_eval(h, psi[key], s.a, s.b, s.mode)


def build_forward(
    trace: ag.Trace,
    spec: MlpSpec,
    params: dict[str, ag.Var],
    x: ag.Var,
    psi: Optional[dict[str, ag.Var]] = None,
) -> ag.Var:
    """Record the network forward pass on a trace

    Parameters
    ----------
    trace: libmetaact.autograd.Trace
        The trace to record on.
    spec: MlpSpec
        The architecture.
    params: dict[str, libmetaact.autograd.Var]
        Parameter nodes named as :func:`ParamSet.as_dict`.
    x: libmetaact.autograd.Var
        Input batch, shape ``(n, input_dim)``.
    psi: Optional[dict[str, libmetaact.autograd.Var]] = None
        Spline control value nodes named as :data:`ActivationParams`. Missing
        entries are taken from `spec` as constants.

    Returns
    -------
    out: libmetaact.autograd.Var
        Network output, shape ``(n, output_dim)``.
    """
    if len(x.shape) != 2 or x.shape[1] != spec.input_dim:
        raise ShapeError(
            "forward", [x.shape], f"expected input width {spec.input_dim}"
        )
    psi = dict(psi or {})
    for key, value in activation_params(spec).items():
        if key not in psi:
            psi[key] = trace.constant(value)

    h = x
    if spec.iaf is not None:
        # per-input splines share one grid
        s = spec.iaf.splines[0]
        h = ops.spline_eval(h, psi["iaf"], s.a, s.b, s.mode)

    def weight(i: int) -> ag.Var:
        W = params[f"W{i}"]
        if spec.spectral_norm:
            return ops.div(W, ops.spectral_sigma(W))
        return W

    for layer in range(len(spec.hidden)):
        z = ops.add(ops.matmul(h, weight(layer)), params[f"b{layer}"])
        a = _activation(z, spec.activation, layer, psi)
        h = ops.add(a, h) if spec.has_residual(layer) else a
    last = len(spec.hidden)
    return ops.add(ops.matmul(h, weight(last)), params[f"b{last}"])


def forward(
    spec: MlpSpec,
    params: ParamSet,
    x: npt.ArrayLike,
    psi: Optional[ActivationParams] = None,
) -> np.ndarray:
    """Evaluate the network

    Parameters
    ----------
    spec: MlpSpec
        The architecture, including activation functions.
    params: ParamSet
        The weights and biases.
    x: array_like
        Input batch, shape ``(n, input_dim)``.
    psi: Optional[ActivationParams] = None
        Spline control values overriding those in `spec`.

    Returns
    -------
    out: np.ndarray
        Shape ``(n, output_dim)``; ``(n, 1)`` for the regression head.
    """
    trace = ag.Trace()
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    theta = {k: trace.constant(v) for k, v in params.as_dict().items()}
    psi_vars = None
    if psi is not None:
        psi_vars = {k: trace.constant(v) for k, v in psi.items()}
    out = build_forward(trace, spec, theta, trace.constant(x), psi_vars)
    return np.array(out.value)
