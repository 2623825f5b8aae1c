import numpy as np
import pandas as pd
import pytest

import libmetaact.complexity as cx
import libmetaact.nets as nets
import libmetaact.training as training
from libmetaact.metaglobal import ConfigError


def test_slice_of_linear_model_is_planar(linear_model):
    s = cx.input_slice_2d(linear_model, anchor=[0.3, -0.2], dims=(0, 1))
    assert s.values.shape == (200, 200)
    assert len(s.to_frame()) == 40000
    np.testing.assert_allclose(np.diff(s.values, n=2, axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(np.diff(s.values, n=2, axis=1), 0.0, atol=1e-12)
    assert s.normalized.min() == 0.0
    assert s.normalized.max() == pytest.approx(1.0)
    assert s.u[0] == -1.0 and s.u[-1] == 1.0


def test_slice_keeps_other_coordinates_fixed():
    model = lambda X: X[:, [2]]  # noqa: E731
    s = cx.input_slice_2d(model, anchor=[0.0, 0.0, 0.7], dims=(0, 1), resolution=5)
    assert np.all(s.values == 0.7)
    assert np.all(s.normalized == 0.0)


def test_slice_through_three_points(relu_model):
    p = np.array([[0.0, 0.0], [1.0, 0.5], [-0.5, 2.0]])
    s = cx.input_slice_2d(relu_model, points=p, resolution=11, output_dim=1)
    out = relu_model(p)
    assert s.values[0, 0] == pytest.approx(out[0, 1])
    assert s.values[-1, 0] == pytest.approx(out[1, 1])
    assert s.values[0, -1] == pytest.approx(out[2, 1])


def test_slice_errors(linear_model):
    with pytest.raises(ConfigError):
        cx.input_slice_2d(linear_model, anchor=[0.0, 0.0], dims=(1, 1))
    with pytest.raises(ConfigError):
        cx.input_slice_2d(linear_model)
    with pytest.raises(ConfigError):
        cx.input_slice_2d(linear_model, points=[[0, 0], [1, 1], [2, 2]])


def test_pca_of_line_trajectory():
    d = np.array([1.0, -2.0, 0.5, 0.0])
    S = np.array([0.3, 0.1, -0.4, 2.0]) + np.arange(5.0)[:, None] * d
    pca = cx.trajectory_pca(S)
    u = d / np.linalg.norm(d)
    assert abs(pca.directions[0] @ u) == pytest.approx(1.0)
    assert pca.explained_variance[1] == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(pca.directions @ pca.directions.T, np.eye(2), atol=1e-12)


def test_pca_preserves_planar_geometry(planar_snapshots):
    pca = cx.trajectory_pca(planar_snapshots)
    S = planar_snapshots
    for i, j in [(0, 1), (2, 7), (3, 8)]:
        assert np.linalg.norm(pca.coords[i] - pca.coords[j]) == pytest.approx(
            np.linalg.norm(S[i] - S[j])
        )
    np.testing.assert_allclose(pca.mean + pca.coords @ pca.directions, S, atol=1e-10)
    assert pca.explained_variance[0] >= pca.explained_variance[1]


def test_pca_errors():
    with pytest.raises(ConfigError):
        cx.trajectory_pca(np.ones((2, 4)))
    with pytest.raises(ConfigError):
        cx.trajectory_pca(np.ones((5, 4)))


def test_plane_validation():
    with pytest.raises(ConfigError):
        cx.Plane(np.zeros(3), np.array([1.0, 0, 0]), np.array([1.0, 1.0, 0]))
    with pytest.raises(ConfigError):
        cx.Plane(np.zeros(2), np.array([1.0, 0, 0]), np.array([0.0, 1.0, 0]))


def test_random_plane(linear_model):
    plane = cx.random_plane(linear_model.params, seed=3)
    B = np.vstack([plane.e1, plane.e2])
    np.testing.assert_allclose(B @ B.T, np.eye(2), atol=1e-12)
    r = 0.1 * np.linalg.norm(linear_model.param_vector())
    assert cx.random_extents(plane) == pytest.approx((-r, r, -r, r))
    assert plane.kind == "random"


def _short_run(blobs):
    spec = nets.linear_model_spec(2, 2, head="logits")
    config = training.TrainConfig(lr=0.5, max_steps=30, swa_window=0)
    return spec, training.train(spec, blobs, config)


def test_pca_plane_and_extents(blobs):
    spec, result = _short_run(blobs)
    plane = cx.pca_plane(result.trajectory)
    np.testing.assert_allclose(plane.center, result.trajectory.snapshots[-1])
    u0, u1, v0, v1 = cx.pca_extents(plane, result.trajectory)
    coords = plane.project(result.trajectory.snapshot_matrix())
    assert u0 <= min(coords[:, 0].min(), 0.0) and u1 >= max(coords[:, 0].max(), 0.0)
    assert v0 <= min(coords[:, 1].min(), 0.0) and v1 >= max(coords[:, 1].max(), 0.0)


def test_landscape_center_is_model_loss(blobs):
    spec, result = _short_run(blobs)
    plane = cx.pca_plane(result.trajectory)
    center = result.trajectory.params(-1)
    expected, _ = training.evaluate(spec, center, blobs, blobs.split.train)

    flat = cx.landscape(spec, plane, (0.0, 0.0, 0.0, 0.0), blobs, resolution=3)
    np.testing.assert_allclose(flat.values, expected, rtol=1e-12)

    grid = cx.landscape(spec, plane, (0.0, 1.0, 0.0, 1.0), blobs, resolution=4)
    assert grid.values.shape == (4, 4)
    assert grid.values[0, 0] == pytest.approx(expected, rel=1e-12)
    assert len(grid.to_frame()) == 16


def test_tv_landscape_of_linear_model_is_zero(blobs, linear_model):
    plane = cx.random_plane(linear_model.params, seed=0)
    land = cx.landscape(
        linear_model.spec,
        plane,
        (-1.0, 1.0, -1.0, 1.0),
        blobs,
        kind="tv",
        resolution=3,
        n_paths=10,
        n_points=20,
    )
    assert np.all(np.abs(land.values) < 1e-10)
    with pytest.raises(ConfigError):
        cx.landscape(linear_model.spec, plane, (0, 1, 0, 1), blobs, kind="hessian")


def test_grid_csv(tmp_path, linear_model):
    s = cx.input_slice_2d(linear_model, anchor=[0.0, 0.0], resolution=6)
    path = cx.write_grid_csv(tmp_path / "slice.csv", s)
    table = pd.read_csv(path)
    assert list(table.columns) == ["u", "v", "value"]
    np.testing.assert_allclose(table["value"].to_numpy(), s.values.ravel())
