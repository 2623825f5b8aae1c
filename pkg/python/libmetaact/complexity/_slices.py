import dataclasses
from typing import Optional

import numpy as np
import numpy.typing as npt
import pandas as pd

from libmetaact.complexity._tv import Model
from libmetaact.metaglobal import ConfigError

SLICE_RESOLUTION = 200


def minmax_normalize(values: np.ndarray) -> np.ndarray:
    """Values mapped to [0, 1]; a constant array maps to zeros"""
    lo, hi = np.min(values), np.max(values)
    if hi == lo:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


@dataclasses.dataclass
class Slice2d:
    """Model outputs on a 2d grid of input points

    Attributes
    ----------
    u, v: np.ndarray
        Grid coordinates, each of length `resolution`.
    values: np.ndarray
        Model output at ``(u[i], v[j])`` in ``values[i, j]``.
    normalized: np.ndarray
        `values` min-max normalized to [0, 1], for rendering.
    output_dim: int
        The output dimension shown.
    """

    u: np.ndarray
    v: np.ndarray
    values: np.ndarray
    normalized: np.ndarray
    output_dim: int

    def to_frame(self) -> pd.DataFrame:
        """Table with columns u, v, value, in row-major grid order"""
        U, V = np.meshgrid(self.u, self.v, indexing="ij")
        return pd.DataFrame(
            {"u": U.ravel(), "v": V.ravel(), "value": self.values.ravel()}
        )


def input_slice_2d(
    model: Model,
    anchor: Optional[npt.ArrayLike] = None,
    dims: tuple[int, int] = (0, 1),
    points: Optional[npt.ArrayLike] = None,
    resolution: int = SLICE_RESOLUTION,
    output_dim: int = 0,
) -> Slice2d:
    """Evaluate a model on a 2d slice of the input space

    Two variants:

    - Axis pair: with `anchor`, coordinates ``dims = (m, n)`` of the anchor
      point vary over [-1, 1] x [-1, 1], other coordinates stay fixed.
    - Affine plane: with ``points = (p0, p1, p2)``, the grid covers
      ``p0 + u * (p1 - p0) + v * (p2 - p0)`` for ``u, v`` in [0, 1].

    Parameters
    ----------
    model: Model
        The function; raw outputs (before any softmax) are shown.
    anchor: Optional[array_like] = None
        Anchor point of the axis-pair variant.
    dims: tuple[int, int] = (0, 1)
        Varying input coordinates of the axis-pair variant. Must differ.
    points: Optional[array_like] = None
        Three anchor points of the affine-plane variant.
    resolution: int = 200
        Grid points per axis.
    output_dim: int = 0
        Output dimension shown.

    Returns
    -------
    slice: Slice2d
        The grid values and their normalized copy.
    """
    if resolution < 2:
        raise ConfigError("Error in input_slice_2d: resolution must be >= 2")
    if (anchor is None) == (points is None):
        raise ConfigError("Error in input_slice_2d: give either anchor or points")
    if anchor is not None:
        m, n = dims
        if m == n:
            raise ConfigError(f"Error in input_slice_2d: dims must differ, got {dims}")
        anchor = np.asarray(anchor, dtype=np.float64).reshape(-1)
        u = np.linspace(-1.0, 1.0, resolution)
        v = np.linspace(-1.0, 1.0, resolution)
        U, V = np.meshgrid(u, v, indexing="ij")
        X = np.tile(anchor, (resolution * resolution, 1))
        X[:, m] = U.ravel()
        X[:, n] = V.ravel()
    else:
        p = np.asarray(points, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != 3:
            raise ConfigError("Error in input_slice_2d: points must be 3 input points")
        d1, d2 = p[1] - p[0], p[2] - p[0]
        if np.linalg.matrix_rank(np.vstack([d1, d2])) < 2:
            raise ConfigError("Error in input_slice_2d: degenerate plane")
        u = np.linspace(0.0, 1.0, resolution)
        v = np.linspace(0.0, 1.0, resolution)
        U, V = np.meshgrid(u, v, indexing="ij")
        X = p[0] + U.reshape(-1, 1) * d1 + V.reshape(-1, 1) * d2
    out = np.asarray(model(X), dtype=np.float64)
    values = out[:, output_dim].reshape(resolution, resolution)
    return Slice2d(
        u=u,
        v=v,
        values=values,
        normalized=minmax_normalize(values),
        output_dim=output_dim,
    )
