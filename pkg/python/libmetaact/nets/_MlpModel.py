from typing import Optional

import numpy as np
import numpy.typing as npt

from libmetaact.nets._methods import (
    ActivationParams,
    activation_params,
    forward,
    param_vector,
    params_from_vector,
    with_activation_params,
)
from libmetaact.nets._MlpSpec import MlpSpec
from libmetaact.nets._ParamSet import ParamSet


class MlpModel:
    """A network architecture together with its parameters

    Calling the model evaluates the network: ``model(X)`` returns the raw head
    outputs (logits before any softmax, or the regression output).
    """

    def __init__(
        self,
        spec: MlpSpec,
        params: ParamSet,
        psi: Optional[ActivationParams] = None,
    ):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        spec: MlpSpec
            The architecture.
        params: ParamSet
            The weights and biases.
        psi: Optional[ActivationParams] = None
            Spline control values, replacing those in `spec`.
        """
        if psi is not None:
            spec = with_activation_params(spec, psi)
        self.spec = spec
        self.params = params

    def __call__(self, X: npt.ArrayLike) -> np.ndarray:
        return forward(self.spec, self.params, X)

    @property
    def psi(self) -> ActivationParams:
        """ActivationParams: The spline control values"""
        return activation_params(self.spec)

    def param_vector(self) -> np.ndarray:
        return param_vector(self.params)

    def with_param_vector(self, vector: npt.ArrayLike) -> "MlpModel":
        """A model with the same architecture and the given flattened
        parameters"""
        return MlpModel(self.spec, params_from_vector(self.spec, vector))
