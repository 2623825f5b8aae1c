import numpy as np
import pytest

import libmetaact.autograd as ag
import libmetaact.nets as nets
import libmetaact.splines as splines
from libmetaact.metaglobal import ConfigError, ShapeError


def test_init_params_deterministic(two_layer_spec):
    p1 = nets.init_params(two_layer_spec, seed=3)
    p2 = nets.init_params(two_layer_spec, seed=3)
    p3 = nets.init_params(two_layer_spec, seed=4)
    assert p1.allclose(p2)
    assert not p1.allclose(p3)
    assert [W.shape for W in p1.weights] == [(3, 5), (5, 4), (4, 2)]
    for b in p1.biases:
        assert np.all(b == 0.0)


def test_init_params_bounded():
    spec = nets.MlpSpec(input_dim=20, hidden=(30,), output_dim=10)
    limits = [np.sqrt(6.0 / 50.0), np.sqrt(6.0 / 40.0)]
    for seed in range(1000):
        params = nets.init_params(spec, seed)
        for W, limit in zip(params.weights, limits):
            assert np.max(np.abs(W)) <= limit


def test_param_vector_round_trip(two_layer_spec):
    params = nets.init_params(two_layer_spec, seed=0)
    v = nets.param_vector(params)
    assert v.shape == (params.size,)
    assert params.size == 3 * 5 + 5 + 5 * 4 + 4 + 4 * 2 + 2
    assert nets.params_from_vector(two_layer_spec, v).allclose(params)
    with pytest.raises(ConfigError):
        nets.params_from_vector(two_layer_spec, v[:-1])


def test_linear_model_forward(batch):
    spec = nets.linear_model_spec(3, 2)
    params = nets.init_params(spec, seed=1)
    params.biases[0][:] = [0.5, -0.25]
    out = nets.forward(spec, params, batch)
    assert np.allclose(out, batch @ params.weights[0] + params.biases[0], atol=1e-14)


def test_output_shapes(batch):
    reg = nets.MlpSpec(input_dim=3, hidden=(4,), head="regression")
    assert nets.forward(reg, nets.init_params(reg, 0), batch).shape == (7, 1)
    logits = nets.MlpSpec(input_dim=3, hidden=(4,), output_dim=6)
    assert nets.forward(logits, nets.init_params(logits, 0), batch).shape == (7, 6)
    with pytest.raises(ShapeError):
        nets.forward(logits, nets.init_params(logits, 0), np.ones((2, 4)))


def test_invalid_specs():
    with pytest.raises(ConfigError):
        nets.MlpSpec(input_dim=3, hidden=(4, 5), residual=True)
    with pytest.raises(ConfigError):
        nets.MlpSpec(input_dim=3, output_dim=2, head="regression")
    with pytest.raises(ConfigError):
        nets.MlpSpec(
            input_dim=3,
            hidden=(4, 4),
            activation=splines.spline_binding(
                [splines.init_spline("zeros")], scope="per_layer"
            ),
        )
    with pytest.raises(ConfigError):
        nets.MlpSpec(
            input_dim=3,
            iaf=splines.spline_binding(
                [splines.init_spline("identity")] * 2, scope="per_input"
            ),
        )


def test_identity_iafs_have_no_effect(spline_spec, batch):
    params = nets.init_params(spline_spec, seed=5)
    without = spline_spec.replace(iaf=None)
    np.testing.assert_allclose(
        nets.forward(spline_spec, params, batch),
        nets.forward(without, params, batch),
        rtol=0.0,
        atol=1e-12,
    )


def test_shared_and_per_layer_relu_agree(batch):
    relu = splines.init_spline("relu", n_c=51, a=-5.0, b=5.0)
    shared = nets.MlpSpec(input_dim=3, hidden=(6, 6), output_dim=2)
    per_layer = shared.replace(
        activation=splines.spline_binding([relu, relu], scope="per_layer")
    )
    spline_shared = shared.replace(activation=splines.spline_binding([relu]))
    params = nets.init_params(shared, seed=2)
    expected = nets.forward(shared, params, batch)
    np.testing.assert_allclose(
        nets.forward(per_layer, params, batch), expected, atol=1e-12
    )
    np.testing.assert_allclose(
        nets.forward(spline_shared, params, batch), expected, atol=1e-12
    )


def test_identity_splines_compose_to_affine_map(batch):
    identity = splines.init_spline("identity", n_c=41, a=-20.0, b=20.0)
    spec = nets.MlpSpec(
        input_dim=3,
        hidden=(5, 4),
        output_dim=2,
        activation=splines.spline_binding([identity]),
    )
    params = nets.init_params(spec, seed=9)
    for b in params.biases:
        b[:] = np.linspace(-0.5, 0.5, b.size)
    W = params.weights[0] @ params.weights[1] @ params.weights[2]
    c = (params.biases[0] @ params.weights[1] + params.biases[1]) @ params.weights[
        2
    ] + params.biases[2]
    expected = batch @ W + c
    out = nets.forward(spec, params, batch)
    assert np.max(np.abs(out - expected)) / np.max(np.abs(expected)) <= 1e-10


def test_spectral_normalize():
    normalized = nets.spectral_normalize(np.diag([2.0, 1.0]))
    assert np.allclose(normalized, np.diag([1.0, 0.5]))
    theta = 0.3
    Q = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    assert np.allclose(nets.spectral_normalize(Q), Q, atol=1e-12)
    with pytest.raises(ValueError):
        nets.spectral_normalize(np.zeros((3, 3)))


def test_spectral_sigma_matches_svd():
    W = np.random.default_rng(5).standard_normal((5, 5))
    sigma, u, v = ag.power_iteration(W)
    expected = np.linalg.svd(W, compute_uv=False)[0]
    assert abs(sigma - expected) / expected <= 1e-6
    normalized = nets.spectral_normalize(W)
    sigma = np.linalg.svd(normalized, compute_uv=False)[0]
    assert sigma == pytest.approx(1.0, abs=1e-6)


def test_spectral_norm_scale_invariance(batch):
    spec = nets.MlpSpec(input_dim=3, hidden=(6,), output_dim=2, spectral_norm=True)
    params = nets.init_params(spec, seed=4)
    scaled = nets.ParamSet([3.0 * W for W in params.weights], params.biases)
    a = nets.forward(spec, params, batch)
    b = nets.forward(spec, scaled, batch)
    assert np.max(np.abs(a - b)) / np.max(np.abs(a)) <= 1e-6


def test_activation_params(spline_spec):
    psi = nets.activation_params(spline_spec)
    assert set(psi.keys()) == {"hidden0", "hidden1", "iaf"}
    assert psi["iaf"].shape == (3, 50)
    psi["hidden1"] = np.zeros(21)
    updated = nets.with_activation_params(spline_spec, psi)
    assert np.all(updated.activation.splines[1].psi == 0.0)
    assert updated.activation.splines[1].mode == "cubic"
    assert updated.activation.splines[0] == spline_spec.activation.splines[0]
    assert nets.activation_params(nets.MlpSpec(input_dim=2)) == {}
