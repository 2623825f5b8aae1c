import pytest

import libmetaact.experiments as ex
import libmetaact.metalearn as metalearn
import libmetaact.nets as nets
import libmetaact.training as training
from libmetaact.metaglobal import write_json


@pytest.fixture
def blobs_task():
    return {"type": "blobs", "n_per_class": 30, "margin": 1.0, "seed": 2}


@pytest.fixture
def tiny_config(tmp_path, blobs_task):
    return ex.ExperimentConfig(
        task=blobs_task,
        model=nets.MlpSpec(input_dim=1, hidden=(8,), output_dim=1),
        train=training.TrainConfig(lr=0.5, max_steps=20, swa_window=0),
        output_dir=str(tmp_path / "out"),
    )


@pytest.fixture
def tiny_meta_config(tiny_config):
    return tiny_config.replace(
        meta=metalearn.MetaConfig(
            n_tr_max=2,
            outer_lr=0.1,
            t=1,
            init="relu",
            n_c=11,
            sampler=metalearn.EpisodeSampler(train_size=20, val_size=10),
            patience=0,
            retrain=training.TrainConfig(max_steps=5, swa_window=0),
        )
    )


@pytest.fixture
def config_file(tmp_path):
    def write(config: ex.ExperimentConfig, name: str = "config.json"):
        return write_json(tmp_path / name, config.to_dict())

    return write
