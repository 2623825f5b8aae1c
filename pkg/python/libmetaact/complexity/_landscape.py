import dataclasses
import logging
from typing import Optional, Union

import numpy as np
import numpy.typing as npt
import pandas as pd
from sklearn.decomposition import PCA

from libmetaact.complexity._tv import tv_complexity
from libmetaact.metaglobal import TOL, ConfigError
from libmetaact.nets import MlpModel, MlpSpec, ParamSet, params_from_vector
from libmetaact.tasks import Dataset
from libmetaact.training import Trajectory, evaluate

logger = logging.getLogger(__name__)

LANDSCAPE_RESOLUTION = 50
LANDSCAPE_KINDS = ("loss", "tv")
PCA_EXTENT_FACTOR = 1.2
RANDOM_PLANE_RADIUS = 0.1


@dataclasses.dataclass(frozen=True)
class Plane:
    """A 2d plane in parameter space

    Attributes
    ----------
    center: np.ndarray
        Flattened parameters at the plane origin.
    e1, e2: np.ndarray
        Orthonormal directions.
    kind: str = "pca"
        "pca" or "random".
    """

    center: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    kind: str = "pca"

    def __post_init__(self):
        B = np.vstack([self.e1, self.e2])
        if B.shape[1] != np.asarray(self.center).size:
            raise ConfigError("Error in Plane: directions and center differ in size")
        if not np.allclose(B @ B.T, np.eye(2), atol=TOL):
            raise ConfigError("Error in Plane: directions must be orthonormal")

    def point(self, u: float, v: float) -> np.ndarray:
        return self.center + u * self.e1 + v * self.e2

    def project(self, vectors: npt.ArrayLike) -> np.ndarray:
        """Plane coordinates of parameter vectors, shape ``(n, 2)``"""
        D = np.atleast_2d(np.asarray(vectors, dtype=np.float64)) - self.center
        return D @ np.vstack([self.e1, self.e2]).T


@dataclasses.dataclass
class TrajectoryPca:
    """Principal directions of a trajectory

    Attributes
    ----------
    mean: np.ndarray
        Mean snapshot.
    directions: np.ndarray
        The top two principal directions as rows, orthonormal.
    coords: np.ndarray
        Projections of the centered snapshots, shape ``(n_snapshots, 2)``.
    explained_variance: np.ndarray
        Variance along each direction.
    """

    mean: np.ndarray
    directions: np.ndarray
    coords: np.ndarray
    explained_variance: np.ndarray


def trajectory_pca(trajectory: Union[Trajectory, npt.ArrayLike]) -> TrajectoryPca:
    """Top two principal directions of centered, flattened snapshots

    Parameters
    ----------
    trajectory: Union[Trajectory, array_like]
        A trajectory, or a matrix with one flattened snapshot per row. At least
        3 snapshots, at least 2 of them distinct.
    """
    if isinstance(trajectory, Trajectory):
        S = trajectory.snapshot_matrix()
    else:
        S = np.asarray(trajectory, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] < 3:
        raise ConfigError("Error in trajectory_pca: need at least 3 snapshots")
    if S.shape[1] < 2:
        raise ConfigError("Error in trajectory_pca: need at least 2 parameters")
    if np.unique(S, axis=0).shape[0] < 2:
        raise ConfigError("Error in trajectory_pca: rank-deficient trajectory")
    pca = PCA(n_components=2, svd_solver="full")
    coords = pca.fit_transform(S)
    return TrajectoryPca(
        mean=pca.mean_,
        directions=pca.components_,
        coords=coords,
        explained_variance=pca.explained_variance_,
    )


def pca_plane(trajectory: Trajectory, center: Optional[ParamSet] = None) -> Plane:
    """The plane of the top two principal directions of a trajectory,
    through `center` (default: the last snapshot)"""
    pca = trajectory_pca(trajectory)
    c = trajectory.snapshots[-1] if center is None else center.to_vector()
    return Plane(center=c, e1=pca.directions[0], e2=pca.directions[1], kind="pca")


def random_plane(center: ParamSet, seed: int = 0) -> Plane:
    """A plane through `center` spanned by two random orthonormal directions"""
    c = center.to_vector()
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((c.size, 2)))
    return Plane(center=c, e1=Q[:, 0], e2=Q[:, 1], kind="random")


def pca_extents(
    plane: Plane,
    trajectory: Trajectory,
    factor: float = PCA_EXTENT_FACTOR,
) -> tuple[float, float, float, float]:
    """Bounding box of the projected trajectory and the plane center, scaled
    about its middle by `factor`: ``(u_min, u_max, v_min, v_max)``"""
    coords = plane.project(trajectory.snapshot_matrix())
    lo = np.minimum(coords.min(axis=0), 0.0)
    hi = np.maximum(coords.max(axis=0), 0.0)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo) * factor
    return (mid[0] - half[0], mid[0] + half[0], mid[1] - half[1], mid[1] + half[1])


def random_extents(
    plane: Plane, radius: float = RANDOM_PLANE_RADIUS
) -> tuple[float, float, float, float]:
    """Square of half-width ``radius * |center|`` around the plane center"""
    r = radius * float(np.linalg.norm(plane.center))
    return (-r, r, -r, r)


@dataclasses.dataclass
class Landscape:
    """Loss or complexity over a 2d plane of parameter space

    Attributes
    ----------
    plane: Plane
        The plane.
    u, v: np.ndarray
        Grid coordinates along ``plane.e1`` and ``plane.e2``.
    values: np.ndarray
        Value at ``plane.point(u[i], v[j])`` in ``values[i, j]``.
    kind: str
        "loss" or "tv".
    """

    plane: Plane
    u: np.ndarray
    v: np.ndarray
    values: np.ndarray
    kind: str

    def to_frame(self) -> pd.DataFrame:
        """Table with columns u, v, value, in row-major grid order"""
        U, V = np.meshgrid(self.u, self.v, indexing="ij")
        return pd.DataFrame(
            {"u": U.ravel(), "v": V.ravel(), "value": self.values.ravel()}
        )


def landscape(
    spec: MlpSpec,
    plane: Plane,
    extents: tuple[float, float, float, float],
    dataset: Dataset,
    kind: str = "loss",
    resolution: int = LANDSCAPE_RESOLUTION,
    rows: Optional[npt.ArrayLike] = None,
    n_paths: int = 200,
    n_points: int = 100,
    seed: int = 0,
) -> Landscape:
    """Evaluate training loss or TV complexity over a parameter plane

    Parameters
    ----------
    spec: MlpSpec
        The architecture, with its activation functions.
    plane: Plane
        The plane; its center is the model of interest.
    extents: tuple[float, float, float, float]
        ``(u_min, u_max, v_min, v_max)``.
    dataset: Dataset
        Data for the loss or the TV paths.
    kind: str = "loss"
        "loss": mean training loss; "tv": mean TV complexity with the same
        paths in every cell.
    resolution: int = 50
        Grid points per axis.
    rows: Optional[array_like] = None
        Rows for the loss, or TV endpoints. Default is the training split, or
        all rows.
    n_paths, n_points, seed:
        TV settings, see :func:`libmetaact.complexity.tv_complexity`.
    """
    if kind not in LANDSCAPE_KINDS:
        raise ConfigError(f"Error in landscape: invalid kind '{kind}'")
    if rows is None:
        rows = dataset.split.train if dataset.split is not None else None
    u = np.linspace(extents[0], extents[1], resolution)
    v = np.linspace(extents[2], extents[3], resolution)
    values = np.zeros((resolution, resolution))
    for i, ui in enumerate(u):
        for j, vj in enumerate(v):
            params = params_from_vector(spec, plane.point(ui, vj))
            if kind == "loss":
                values[i, j] = evaluate(spec, params, dataset, rows)[0]
            else:
                model = MlpModel(spec, params)
                report = tv_complexity(model, dataset, n_paths, n_points, seed, rows)
                values[i, j] = report.mean
    logger.info(
        "%s landscape on a %s plane: min %.6g, max %.6g",
        kind,
        plane.kind,
        values.min(),
        values.max(),
    )
    return Landscape(plane=plane, u=u, v=v, values=values, kind=kind)
