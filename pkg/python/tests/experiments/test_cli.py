import numpy as np
import pandas as pd
import pytest

import libmetaact.experiments as ex
import libmetaact.nets as nets
import libmetaact.training as training
from libmetaact.metaglobal import write_json


def test_train_command(tiny_config, config_file, tmp_path):
    path = config_file(tiny_config.replace(seeds=(0, 1)))
    out = tmp_path / "cli"
    argv = ["train", "--config", str(path), "--seed", "3", "--out", str(out)]
    assert ex.main(argv) == 0
    summary = pd.read_csv(out / "summary.csv")
    assert summary["seed"].tolist() == [3]
    assert (out / "seed_3" / "metrics.csv").exists()


def test_gen_data_command(tiny_config, config_file, tmp_path):
    path = config_file(tiny_config)
    out = tmp_path / "data"
    assert ex.main(["gen-data", "--config", str(path), "--out", str(out)]) == 0
    assert len(pd.read_csv(out / "data.csv")) == 60


def test_sweep_command(tiny_config, config_file, tmp_path):
    path = config_file(tiny_config)
    out = tmp_path / "sweep"
    argv = ["sweep", "--config", str(path), "--out", str(out), "--alphas", "1", "4"]
    assert ex.main(argv) == 0
    assert pd.read_csv(out / "sweep.csv")["alpha"].tolist() == [1.0, 4.0]


def test_analyze_command(tiny_config, config_file, tmp_path):
    ex.cmd_train(tiny_config)
    checkpoint = ex.run_dir_of(tiny_config, (8,), 0) / "checkpoint.json"
    path = config_file(tiny_config)
    out = tmp_path / "analysis"
    argv = ["analyze", "--config", str(path), "--out", str(out)]
    argv += ["--checkpoint", str(checkpoint), "--what", "tv", "--n-paths", "5"]
    assert ex.main(argv) == 0
    assert len(pd.read_csv(out / "tv.csv")) == 5


def test_analyze_knn_command(tiny_config, config_file, tmp_path):
    ex.cmd_train(tiny_config)
    checkpoint = ex.run_dir_of(tiny_config, (8,), 0) / "checkpoint.json"
    path = config_file(tiny_config)
    out = tmp_path / "analysis"
    argv = ["analyze", "--config", str(path), "--out", str(out)]
    argv += ["--checkpoint", str(checkpoint), "--what", "knn"]
    assert ex.main(argv) == 0
    table = pd.read_csv(out / "knn.csv")
    assert list(table.columns) == ex.KNN_COLUMNS
    assert table["method"].tolist() == ["checkpoint", "knn"]
    knn = table.iloc[1]
    assert 1 <= knn["k"] <= 32
    assert knn["metric"] in ("l2", "l1")
    assert table[["train_acc", "val_acc", "test_acc"]].stack().between(0, 1).all()


def test_meta_divergence_exits_3(tiny_meta_config, config_file, tmp_path):
    meta = tiny_meta_config.meta.replace(inner_lr=np.inf, n_tr_max=6)
    path = config_file(tiny_meta_config.replace(meta=meta))
    code = ex.main(["meta", "--config", str(path), "--out", str(tmp_path / "x")])
    assert code == ex.EXIT_NUMERICAL_FAILURE


def test_config_errors_exit_2(tiny_config, config_file, tmp_path):
    assert ex.main(["train"]) == ex.EXIT_CONFIG_ERROR
    path = config_file(tiny_config)
    assert ex.main(["meta", "--config", str(path)]) == ex.EXIT_CONFIG_ERROR
    data = tiny_config.to_dict()
    data["task"] = {"type": "mnist"}
    bad = write_json(tmp_path / "bad.json", data)
    assert ex.main(["train", "--config", str(bad)]) == ex.EXIT_CONFIG_ERROR
    with pytest.raises(SystemExit):
        ex.main(["plot", "--config", str(path)])


def test_divergence_exits_3(tiny_config, config_file, tmp_path):
    config = tiny_config.replace(
        task={"type": "abs_regression", "n_rows": 60, "seed": 1},
        model=nets.linear_model_spec(1, 1, head="regression"),
        train=training.TrainConfig(lr=1e4, max_steps=500, swa_window=0),
    )
    path = config_file(config)
    with np.errstate(all="ignore"):
        code = ex.main(["train", "--config", str(path), "--out", str(tmp_path / "x")])
    assert code == ex.EXIT_NUMERICAL_FAILURE


def test_preset_names_in_parser():
    parser = ex.build_parser()
    args = parser.parse_args(["train", "--preset", "grokking", "--workers", "2"])
    config = ex.load_config(args)
    assert config.n_workers == 2
    assert config.model.hidden == (256,)
