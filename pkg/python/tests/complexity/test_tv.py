import numpy as np
import pytest

import libmetaact.complexity as cx
from libmetaact.metaglobal import ConfigError


def test_path_tv_hand_example():
    assert cx.path_tv([0.0, 1.0, 0.0]) == pytest.approx(2.0)
    assert cx.path_tv([0.0, 1.0, 2.0, 3.0]) == pytest.approx(0.0)
    # baseline from 0 to 2: residuals 0, 2 - 2/3, -1 - 4/3, 0
    expected = abs(4.0 / 3.0) + abs(-7.0 / 3.0 - 4.0 / 3.0) + abs(7.0 / 3.0)
    assert cx.path_tv([0.0, 2.0, -1.0, 2.0]) == pytest.approx(expected)


def test_path_tv_ignores_affine_part():
    rng = np.random.default_rng(0)
    values = rng.standard_normal(50)
    lam = np.linspace(0.0, 1.0, 50)
    assert cx.path_tv(values + 3.0 * lam - 7.0) == pytest.approx(cx.path_tv(values))
    with pytest.raises(ConfigError):
        cx.path_tv([1.0])


def test_path_points():
    path = cx.Path([0.0, 0.0], [1.0, 2.0], n_points=5)
    points = path.points()
    assert points.shape == (5, 2)
    np.testing.assert_allclose(points[2], [0.5, 1.0])
    np.testing.assert_allclose(points[-1], [1.0, 2.0])
    with pytest.raises(ConfigError):
        cx.Path([0.0], [1.0], n_points=1)
    with pytest.raises(ConfigError):
        cx.Path([0.0], [1.0, 2.0])


def test_linear_model_has_zero_tv(blobs, linear_model):
    report = cx.tv_complexity(linear_model, blobs, n_paths=50, n_points=40)
    assert report.n_paths == 50
    assert np.all(np.abs(report.values) < 1e-10)


def test_constant_model_has_zero_tv(blobs):
    report = cx.tv_complexity(lambda X: np.ones((len(X), 3)), blobs, n_paths=20)
    assert report.mean == 0.0
    assert set(report.output_dims.tolist()) <= {0, 1, 2}


def test_endpoints_have_different_labels(blobs):
    rng = np.random.default_rng(3)
    first, second = cx.sample_endpoints(blobs, 100, rng)
    train = set(blobs.split.train.tolist())
    assert set(first.tolist()) <= train
    assert set(second.tolist()) <= train
    assert np.all(blobs.y[first] != blobs.y[second])


def test_regression_endpoints():
    import libmetaact.tasks as tasks

    ds = tasks.make_abs_regression(n_rows=80, seed=2)
    first, second = cx.sample_endpoints(ds, 40, np.random.default_rng(0))
    assert np.all(first != second)
    report = cx.tv_complexity(lambda X: X**2, ds, n_paths=10, n_points=20)
    assert report.n_paths == 10
    assert np.all(report.values >= 0.0)


def test_single_label_rows(blobs):
    rows = np.flatnonzero(blobs.y == 0)
    with pytest.raises(ConfigError):
        cx.tv_complexity(lambda X: X, blobs, rows=rows)


def test_tv_is_deterministic(blobs, relu_model):
    a = cx.tv_complexity(relu_model, blobs, n_paths=30, seed=4)
    b = cx.tv_complexity(relu_model, blobs, n_paths=30, seed=4)
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.output_dims, b.output_dims)


def test_tv_seed_stability(blobs, relu_model):
    means = [
        cx.tv_complexity(relu_model, blobs, n_paths=200, seed=seed).mean
        for seed in range(3)
    ]
    assert len(set(means)) == 3
    assert np.std(means) <= 0.25 * np.mean(means)


def test_tv_grows_under_refinement(blobs, relu_model):
    coarse = cx.tv_complexity(relu_model, blobs, n_paths=40, n_points=11, seed=1)
    fine = cx.tv_complexity(relu_model, blobs, n_paths=40, n_points=101, seed=1)
    assert np.array_equal(coarse.output_dims, fine.output_dims)
    assert np.all(fine.values >= coarse.values - 1e-9)


def test_tv_report_frame(blobs, relu_model):
    report = cx.tv_complexity(relu_model, blobs, n_paths=12, n_points=10)
    frame = report.to_frame()
    assert list(frame.columns) == ["path", "output_dim", "tv"]
    assert len(frame) == 12
    assert frame["tv"].mean() == pytest.approx(report.mean)


@pytest.mark.slow
def test_staircase_tv_grows_during_training():
    import libmetaact.nets as nets
    import libmetaact.tasks as tasks
    import libmetaact.training as training

    ds = tasks.make_staircase(n_rows=600, seed=0)
    ds = ds.with_split(tasks.split(ds, 0.8, seed=0))
    spec = nets.MlpSpec(input_dim=2, hidden=(32, 32), output_dim=2)
    config = training.TrainConfig(optimizer="rmsprop", lr=0.01, max_steps=1500)
    result = training.train(spec, ds, config)
    table = cx.tv_along_training(result.trajectory, ds, n_paths=50, every=100)
    assert table["step"].iloc[0] == 0
    assert table["mean_tv"].iloc[-1] >= table["mean_tv"].iloc[0]
