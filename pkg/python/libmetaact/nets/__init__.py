"""Fully-connected networks with learnable activations

The :py:mod:`libmetaact.nets` module provides:

- :class:`MlpSpec`, the architecture: hidden widths, residual connections,
  hidden-layer activations, input activation functions (IAFs), spectral
  normalization, and the output head
- :class:`ParamSet`, the weights and biases
- :func:`forward` and :func:`build_forward`, evaluating a network directly or
  recording it on an autograd trace
- :class:`MlpModel`, a callable architecture + parameters pair
- Checkpoint IO

"""
from ._io import (
    checkpoint_from_dict,
    checkpoint_to_dict,
    load_checkpoint,
    save_checkpoint,
)
from ._methods import (
    ActivationParams,
    activation_params,
    build_forward,
    forward,
    init_params,
    param_vector,
    params_from_vector,
    spectral_normalize,
    with_activation_params,
)
from ._MlpModel import (
    MlpModel,
)
from ._MlpSpec import (
    HEADS,
    MlpSpec,
    linear_model_spec,
)
from ._ParamSet import (
    ParamSet,
)
