from typing import Union

import numpy as np
import numpy.typing as npt

from libmetaact.metaglobal import ConfigError
from libmetaact.splines._SplineActivation import SplineActivation

INIT_KINDS = ("zeros", "relu", "identity")


def spline_eval(
    s: SplineActivation, x: Union[float, npt.ArrayLike]
) -> Union[float, np.ndarray]:
    """Evaluate a spline activation

    Parameters
    ----------
    s: SplineActivation
        The activation.
    x: Union[float, array_like]
        A scalar or an array of samples.

    Returns
    -------
    y: Union[float, np.ndarray]
        The interpolant value, with the shape of `x`. Samples below ``s.a`` give
        ``s.psi[0]``, samples above ``s.b`` give ``s.psi[-1]``, and samples exactly
        on grid point ``i`` give ``s.psi[i]``.
    """
    return s(x)


def init_spline(
    kind: str,
    n_c: int = 50,
    a: float = -5.0,
    b: float = 5.0,
    mode: str = "linear",
) -> SplineActivation:
    """Construct an initial spline activation

    Parameters
    ----------
    kind: str
        One of:

        - "zeros": ``psi = 0``
        - "relu": ``psi[i] = max(0, grid[i])``
        - "identity": ``psi[i] = grid[i]``

    n_c: int = 50
        Number of control points, at least 2.
    a: float = -5.0
        Lower interval endpoint.
    b: float = 5.0
        Upper interval endpoint.
    mode: str = "linear"
        Interpolation mode.

    Returns
    -------
    s: SplineActivation
        The initialized activation.
    """
    if n_c < 2:
        raise ConfigError(f"Error in init_spline: n_c must be >= 2, got {n_c}")
    grid = a + np.arange(n_c) * ((b - a) / (n_c - 1))
    if kind == "zeros":
        psi = np.zeros(n_c)
    elif kind == "relu":
        psi = np.maximum(0.0, grid)
    elif kind == "identity":
        psi = grid
    else:
        raise ConfigError(
            f"Error in init_spline: invalid kind '{kind}', expected one of {INIT_KINDS}"
        )
    return SplineActivation(psi, a=a, b=b, mode=mode)


def tanh_prefactor(
    alpha: float, x: Union[float, npt.ArrayLike]
) -> Union[float, np.ndarray]:
    """Evaluate ``tanh(alpha * x)``

    Parameters
    ----------
    alpha: float
        The prefactor, must be positive.
    x: Union[float, array_like]
        A scalar or an array of samples.
    """
    if not alpha > 0.0:
        raise ConfigError(f"Error in tanh_prefactor: alpha must be > 0, got {alpha}")
    y = np.tanh(alpha * np.asarray(x, dtype=np.float64))
    if np.ndim(x) == 0:
        return float(y)
    return y


def resample_spline(s: SplineActivation, n_c: int) -> SplineActivation:
    """Move a spline activation onto a grid with a different number of control
    points

    The new control values are the values of `s` at the new grid points, so the
    result reproduces `s` exactly wherever the two grids coincide.
    """
    if n_c < 2:
        raise ConfigError(f"Error in resample_spline: n_c must be >= 2, got {n_c}")
    grid = s.a + np.arange(n_c) * ((s.b - s.a) / (n_c - 1))
    return SplineActivation(s(grid), a=s.a, b=s.b, mode=s.mode)
