"""Learnable activation functions

The :py:mod:`libmetaact.splines` module provides:

- :class:`~libmetaact.splines.SplineActivation`, a scalar function interpolating
  learnable control values on a regular grid, with constant extrapolation
- :class:`~libmetaact.splines.ActivationBinding`, which describes whether a model
  uses ReLU, ``tanh(alpha * x)``, or spline activations, and whether splines are
  shared, per hidden layer, or per input dimension
- Initialization, evaluation, and file IO methods

"""
from ._ActivationBinding import (
    ActivationBinding,
    relu_binding,
    spline_binding,
    tanh_binding,
)
from ._io import (
    activation_set_from_dict,
    activation_set_to_dict,
    load_spline,
    save_spline,
)
from ._kernel import (
    MODES,
    spline_scatter,
    spline_values,
)
from ._methods import (
    INIT_KINDS,
    init_spline,
    resample_spline,
    spline_eval,
    tanh_prefactor,
)
from ._SplineActivation import (
    SplineActivation,
)
