import pytest

import libmetaact.splines as splines


@pytest.fixture
def relu_spline_51():
    return splines.init_spline("relu", n_c=51, a=-5.0, b=5.0)


@pytest.fixture
def random_psi():
    import numpy as np

    rng = np.random.default_rng(7)
    return rng.standard_normal(12)
