import pytest

import libmetaact.nets as nets
import libmetaact.tasks as tasks


@pytest.fixture
def blobs():
    ds = tasks.make_two_blobs(n_per_class=50, margin=2.0, seed=3)
    return ds.with_split(tasks.split(ds, 0.8, seed=0, validation=True))


@pytest.fixture
def linear_classifier():
    return nets.linear_model_spec(2, 2, head="logits")


@pytest.fixture
def abs_regression():
    ds = tasks.make_abs_regression(n_rows=60, seed=1)
    return ds.with_split(tasks.split(ds, 0.8, seed=0, validation=True))
