import numpy as np
import pytest

import libmetaact.tasks as tasks


@pytest.fixture
def mod_add_27():
    return tasks.gen_algorithmic(tasks.AlgTaskSpec(expression="a+b", modulus=27))


@pytest.fixture
def tiny_image_sources():
    """Two 3-class sources with tile-identifying features"""
    rng = np.random.default_rng(0)
    yA = np.repeat(np.arange(3), 10)
    yB = np.repeat(np.arange(3), 8)
    dsA = tasks.Dataset(
        X=np.column_stack([yA, rng.uniform(size=yA.size)]),
        y=yA,
        class_count=3,
    )
    dsB = tasks.Dataset(
        X=np.column_stack([yB + 100, rng.uniform(size=yB.size), np.zeros(yB.size)]),
        y=yB,
        class_count=3,
    )
    return dsA, dsB
