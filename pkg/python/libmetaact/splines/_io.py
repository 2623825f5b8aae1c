"""Spline and activation-set files"""
import pathlib
from typing import Optional, Union

from libmetaact.metaglobal import read_json, write_json
from libmetaact.splines._ActivationBinding import ActivationBinding
from libmetaact.splines._SplineActivation import SplineActivation


def save_spline(path: Union[str, pathlib.Path], s: SplineActivation) -> pathlib.Path:
    """Save a spline as ``{"n_c", "a", "b", "mode", "psi"}`` JSON"""
    return write_json(path, s.to_dict())


def load_spline(path: Union[str, pathlib.Path]) -> SplineActivation:
    """Load a spline saved by :func:`save_spline`"""
    return SplineActivation.from_dict(read_json(path))


def activation_set_to_dict(
    hidden: ActivationBinding, iaf: Optional[ActivationBinding] = None
) -> dict:
    """Represent learned hidden-layer activations and optional IAFs as a dict

    Format: ``{"hidden": ActivationBinding dict, "iaf": ActivationBinding dict or
    null}``
    """
    return {
        "hidden": hidden.to_dict(),
        "iaf": None if iaf is None else iaf.to_dict(),
    }


def activation_set_from_dict(
    data: dict,
) -> tuple[ActivationBinding, Optional[ActivationBinding]]:
    """Read the format written by :func:`activation_set_to_dict`"""
    hidden = ActivationBinding.from_dict(data["hidden"])
    iaf = data.get("iaf")
    return (hidden, None if iaf is None else ActivationBinding.from_dict(iaf))
