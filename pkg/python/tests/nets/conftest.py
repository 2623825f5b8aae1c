import numpy as np
import pytest

import libmetaact.nets as nets
import libmetaact.splines as splines


@pytest.fixture
def two_layer_spec():
    return nets.MlpSpec(input_dim=3, hidden=(5, 4), output_dim=2)


@pytest.fixture
def spline_spec():
    per_layer = [
        splines.init_spline("relu", n_c=21, a=-3.0, b=3.0),
        splines.init_spline("identity", n_c=21, a=-3.0, b=3.0, mode="cubic"),
    ]
    return nets.MlpSpec(
        input_dim=3,
        hidden=(4, 4),
        output_dim=2,
        residual=True,
        activation=splines.spline_binding(per_layer, scope="per_layer"),
        iaf=splines.spline_binding(
            [splines.init_spline("identity", n_c=50, a=-1.0, b=1.0)] * 3,
            scope="per_input",
        ),
    )


@pytest.fixture
def batch():
    return np.random.default_rng(11).uniform(-1.0, 1.0, size=(7, 3))
