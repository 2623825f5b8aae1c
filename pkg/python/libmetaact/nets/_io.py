"""Checkpoint files"""
import pathlib
from typing import Union

from libmetaact.metaglobal import ConfigError, read_json, write_json
from libmetaact.nets._methods import params_from_vector
from libmetaact.nets._MlpModel import MlpModel
from libmetaact.nets._MlpSpec import MlpSpec
from libmetaact.splines import activation_set_from_dict, activation_set_to_dict


def checkpoint_to_dict(model: MlpModel) -> dict:
    """Represent a model as a checkpoint dict

    Format: ``{"spec": MlpSpec dict, "params": list[float], "psi": activation set
    dict or null}``. "psi" holds the hidden and input spline activations, if any.
    """
    spec = model.spec
    has_splines = spec.activation.kind == "spline" or spec.iaf is not None
    return {
        "spec": spec.to_dict(),
        "params": model.param_vector().tolist(),
        "psi": activation_set_to_dict(spec.activation, spec.iaf)
        if has_splines
        else None,
    }


def checkpoint_from_dict(data: dict) -> MlpModel:
    """Construct a model from a checkpoint dict"""
    try:
        spec = MlpSpec.from_dict(data["spec"])
        if data.get("psi") is not None:
            hidden, iaf = activation_set_from_dict(data["psi"])
            spec = spec.replace(activation=hidden, iaf=iaf)
        params = params_from_vector(spec, data["params"])
    except KeyError as e:
        raise ConfigError(f"Error in checkpoint_from_dict: missing key {e}")
    return MlpModel(spec, params)


def save_checkpoint(path: Union[str, pathlib.Path], model: MlpModel) -> pathlib.Path:
    """Write a checkpoint JSON file"""
    return write_json(path, checkpoint_to_dict(model))


def load_checkpoint(path: Union[str, pathlib.Path]) -> MlpModel:
    """Read a checkpoint JSON file written by :func:`save_checkpoint`"""
    return checkpoint_from_dict(read_json(path))
