import json

import numpy as np
import pytest

import libmetaact.experiments as ex
import libmetaact.splines as splines
from libmetaact.metaglobal import ConfigError


def test_config_dict_round_trip(tiny_meta_config):
    data = tiny_meta_config.to_dict()
    json.dumps(data)
    again = ex.ExperimentConfig.from_dict(data)
    assert again.to_dict() == data
    assert again.meta == tiny_meta_config.meta
    assert again.model == tiny_meta_config.model


def test_config_validation(tiny_config):
    data = tiny_config.to_dict()
    with pytest.raises(ConfigError):
        ex.ExperimentConfig.from_dict({**data, "learning_rate": 1.0})
    with pytest.raises(ConfigError):
        ex.ExperimentConfig.from_dict({k: v for k, v in data.items() if k != "task"})
    with pytest.raises(ConfigError):
        tiny_config.replace(seeds=())
    with pytest.raises(ConfigError):
        tiny_config.replace(task={"type": "mnist"})
    with pytest.raises(ConfigError):
        tiny_config.replace(alphas=(1.0, -2.0))
    with pytest.raises(ConfigError):
        tiny_config.replace(n_workers=0)


def test_overrides(tiny_config):
    config = tiny_config.replace(seeds=(0, 1, 2))
    same = config.with_overrides()
    assert same == config
    changed = config.with_overrides(seed=7, out="elsewhere", workers=3)
    assert changed.seeds == (7,)
    assert changed.output_dir == "elsewhere"
    assert changed.n_workers == 3


def test_build_algorithmic_dataset():
    ds = ex.build_dataset(
        {"type": "algorithmic", "expression": "a+b", "modulus": 13, "validation": False}
    )
    assert ds.n_rows == 169
    assert ds.split.train.size == 135
    assert ds.split.val.size == 0
    assert ds.class_count == 13


def test_build_regression_dataset(blobs_task):
    ds = ex.build_dataset({**blobs_task, "regression": True})
    assert ds.kind == "regression"
    assert set(np.unique(ds.y)) == {-1.0, 1.0}
    assert ds.split.val.size == ds.split.test.size


def test_build_collage_keeps_ood_pool():
    source = {"type": "blobs", "n_per_class": 20, "dims": 3}
    ds = ex.build_dataset(
        {"type": "collage", "a": source, "b": source, "target": "B", "n_ood": 16}
    )
    ood = set(ds.pools["ood"].tolist())
    used = np.concatenate([ds.split.train, ds.split.val, ds.split.test])
    assert len(ood) == 16
    assert not ood & set(used.tolist())
    assert ds.input_dim == 6


def test_fit_spec(blobs_task):
    ds = ex.build_dataset(blobs_task)
    s = splines.init_spline("relu", n_c=11)
    iaf = splines.spline_binding(
        [splines.init_spline("identity", n_c=20, a=-1.0, b=1.0)], scope="per_input"
    )
    spec = ex.fit_spec(
        ex.grokking().model.replace(iaf=iaf),
        ds,
        hidden=(4, 4),
        activation=splines.spline_binding([s], scope="per_layer"),
    )
    assert spec.input_dim == 2
    assert spec.output_dim == 2
    assert spec.head == "logits"
    assert spec.hidden == (4, 4)
    assert spec.activation.count() == 2
    assert spec.iaf.count() == 2

    reg = ex.fit_spec(spec, ex.build_dataset({**blobs_task, "regression": True}))
    assert reg.head == "regression"
    assert reg.output_dim == 1
