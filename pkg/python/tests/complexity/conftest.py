import numpy as np
import pytest

import libmetaact.nets as nets
import libmetaact.tasks as tasks


@pytest.fixture
def blobs():
    ds = tasks.make_two_blobs(n_per_class=30, margin=1.0, seed=5)
    return ds.with_split(tasks.split(ds, 0.8, seed=0))


@pytest.fixture
def linear_model():
    spec = nets.linear_model_spec(2, 2, head="logits")
    return nets.MlpModel(spec, nets.init_params(spec, seed=1))


@pytest.fixture
def relu_model():
    spec = nets.MlpSpec(input_dim=2, hidden=(16, 16), output_dim=2)
    return nets.MlpModel(spec, nets.init_params(spec, seed=2))


@pytest.fixture
def planar_snapshots():
    """Snapshots on a 2d affine plane in a 6d space"""
    rng = np.random.default_rng(8)
    Q, _ = np.linalg.qr(rng.standard_normal((6, 2)))
    coords = rng.standard_normal((9, 2)) * np.array([3.0, 1.0])
    return rng.standard_normal(6) + coords @ Q.T
