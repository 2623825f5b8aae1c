import numpy as np
import pandas as pd
import pytest

import libmetaact.experiments as ex
import libmetaact.nets as nets
import libmetaact.tasks as tasks
from libmetaact.metaglobal import ConfigError, read_json


def test_cmd_train_outputs(tiny_config):
    config = tiny_config.replace(seeds=(0, 1))
    summary = ex.cmd_train(config)
    assert list(summary.columns) == ex.TRAIN_SUMMARY_COLUMNS
    assert summary["seed"].tolist() == [0, 1]
    for seed in (0, 1):
        run_dir = ex.run_dir_of(config, config.model.hidden, seed)
        for name in ("config.json", "metrics.csv", "checkpoint.json", "trajectory.npz"):
            assert (run_dir / name).exists()
        assert not (run_dir / "spline.json").exists()
        assert read_json(run_dir / "config.json")["seeds"] == [seed]
    out = run_dir.parent
    assert (out / "summary.csv").exists()
    assert read_json(out / "metadata.json")["command"] == "train"


def test_cmd_train_is_reproducible(tiny_config, tmp_path):
    first = tiny_config.replace(output_dir=str(tmp_path / "a"))
    second = tiny_config.replace(output_dir=str(tmp_path / "b"))
    ex.cmd_train(first)
    ex.cmd_train(second)
    for name in ("metrics.csv", "checkpoint.json"):
        a = (ex.run_dir_of(first, (8,), 0) / name).read_bytes()
        b = (ex.run_dir_of(second, (8,), 0) / name).read_bytes()
        assert a == b


def test_cmd_train_hidden_sweep(tiny_config):
    config = tiny_config.replace(hidden_sweep=((4,), (4, 4)))
    summary = ex.cmd_train(config)
    assert summary["hidden"].tolist() == ["h4", "h4x4"]
    model = nets.load_checkpoint(ex.run_dir_of(config, (4, 4), 0) / "checkpoint.json")
    assert model.spec.hidden == (4, 4)
    assert model.spec.input_dim == 2


def test_cmd_meta(tiny_meta_config):
    result = ex.cmd_meta(tiny_meta_config)
    out = tiny_meta_config.output_dir
    assert result.best.spec.activation.kind == "spline"
    assert result.best.spec.activation.splines[0].n_c == 11
    log = pd.read_csv(f"{out}/restart_log.csv")
    assert len(log) == 1
    meta_log = pd.read_csv(f"{out}/meta_log.csv")
    assert len(meta_log) == len(result.best.log)
    data = read_json(f"{out}/spline.json")
    assert data["hidden"]["kind"] == "spline"


def test_cmd_meta_requires_meta_settings(tiny_config):
    with pytest.raises(ConfigError):
        ex.cmd_meta(tiny_config)


def test_learnable_spec(tiny_meta_config):
    spec = ex.learnable_spec(tiny_meta_config.model, tiny_meta_config.meta)
    s = spec.activation.splines[0]
    assert s.n_c == 11
    np.testing.assert_allclose(s.psi, np.maximum(np.linspace(-5.0, 5.0, 11), 0.0))
    assert ex.learnable_spec(spec, tiny_meta_config.meta) is spec


def test_cmd_prefactor_sweep(tiny_config):
    sweep = ex.cmd_prefactor_sweep(tiny_config, alphas=[2.0, 0.5, 1.0])
    table = sweep.table
    assert list(table.columns) == ex.SWEEP_COLUMNS
    assert table["alpha"].tolist() == [0.5, 1.0, 2.0]
    np.testing.assert_allclose(table["effective_lr"], 0.5 / table["alpha"])
    assert sweep.best_alpha in (0.5, 1.0, 2.0)
    best = table.loc[table["alpha"] == sweep.best_alpha, "val_acc"].iloc[0]
    assert best == table["val_acc"].max()
    written = pd.read_csv(f"{tiny_config.output_dir}/sweep.csv")
    assert len(written) == 3
    # alpha > 1 trains with a smaller step than the base learning rate
    assert table.loc[table["alpha"] > 1.0, "effective_lr"].lt(0.5).all()
    with pytest.raises(ConfigError):
        ex.cmd_prefactor_sweep(tiny_config)


def test_best_alpha_skips_missing_accuracies():
    table = pd.DataFrame(
        {
            "alpha": [0.5, 1.0, 2.0],
            "effective_lr": [1.0, 0.5, 0.25],
            "val_acc": [np.nan, 0.7, 0.7],
            "test_acc": [np.nan, 0.6, 0.65],
        }
    )
    assert ex.PrefactorSweep(table).best_alpha == 1.0
    table["val_acc"] = np.nan
    with pytest.raises(ConfigError, match="no finite validation accuracy"):
        ex.PrefactorSweep(table).best_alpha


def test_cmd_gen_data(tmp_path, blobs_task):
    path = ex.cmd_gen_data(blobs_task, tmp_path / "data")
    ds = ex.build_dataset(blobs_task)
    loaded = tasks.load_tabular_csv(path, normalize=False)
    assert loaded.n_rows == ds.n_rows
    np.testing.assert_allclose(loaded.X, ds.X)
    split = read_json(tmp_path / "data" / "split.json")
    assert split["test"] == ds.split.test.tolist()


def test_cmd_analyze_linear_tv(tmp_path, blobs_task):
    ds = ex.build_dataset(blobs_task)
    spec = nets.linear_model_spec(2, 2)
    checkpoint = nets.save_checkpoint(
        tmp_path / "run" / "checkpoint.json",
        nets.MlpModel(spec, nets.init_params(spec, seed=0)),
    )
    path = ex.cmd_analyze(checkpoint, ds, "tv", tmp_path / "analysis", n_paths=30)
    table = pd.read_csv(path)
    assert len(table) == 30
    assert np.all(np.abs(table["tv"]) < 1e-9)
    assert read_json(tmp_path / "analysis" / "metadata.json")["seeds"] == [0]

    with pytest.raises(ConfigError):
        ex.cmd_analyze(checkpoint, ds, "landscape-pca", tmp_path / "analysis")
    with pytest.raises(ConfigError):
        ex.cmd_analyze(checkpoint, ds, "hessian", tmp_path / "analysis")


def test_cmd_analyze_slice_and_landscape(tiny_config, tmp_path):
    ex.cmd_train(tiny_config)
    checkpoint = ex.run_dir_of(tiny_config, (8,), 0) / "checkpoint.json"
    out = tmp_path / "analysis"
    slice_path = ex.cmd_analyze(checkpoint, tiny_config.task, "slice2d", out)
    assert len(pd.read_csv(slice_path)) == 40000
    land = ex.cmd_analyze(
        checkpoint, tiny_config.task, "landscape-pca", out, resolution=3
    )
    table = pd.read_csv(land)
    assert list(table.columns) == ["u", "v", "value"]
    assert len(table) == 9
    random = ex.cmd_analyze(
        checkpoint, tiny_config.task, "landscape-random", out, resolution=2
    )
    assert random.name == "landscape_random.csv"
