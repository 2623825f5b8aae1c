import pytest

import libmetaact.metalearn as metalearn
import libmetaact.nets as nets
import libmetaact.splines as splines
import libmetaact.tasks as tasks
import libmetaact.training as training


@pytest.fixture
def blobs():
    ds = tasks.make_two_blobs(n_per_class=40, margin=1.0, std=0.8, seed=2)
    return ds.with_split(tasks.split(ds, 0.8, seed=0, validation=True))


@pytest.fixture
def spline_mlp():
    s = splines.init_spline("relu", n_c=11, a=-3.0, b=3.0)
    return nets.MlpSpec(
        input_dim=2,
        hidden=(4,),
        output_dim=2,
        activation=splines.spline_binding([s]),
    )


@pytest.fixture
def quick_meta():
    return metalearn.MetaConfig(
        n_tr_max=3,
        outer_lr=0.1,
        t=2,
        inner_lr=0.1,
        sampler=metalearn.EpisodeSampler(train_size=20, val_size=10),
        retrain=training.TrainConfig(max_steps=8, swa_window=0),
        patience=0,
    )
