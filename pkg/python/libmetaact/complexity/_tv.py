import dataclasses
import logging
from typing import Callable, Optional

import numpy as np
import numpy.typing as npt
import pandas as pd

from libmetaact.complexity._Path import Path
from libmetaact.metaglobal import ConfigError
from libmetaact.nets import MlpModel
from libmetaact.tasks import Dataset

logger = logging.getLogger(__name__)

Model = Callable[[np.ndarray], np.ndarray]
"""A function mapping an input batch ``(n, dim)`` to outputs ``(n, k)``"""

REGRESSION_PAIR_SAMPLES = 2000


def path_tv(values: npt.ArrayLike) -> float:
    """Total variation of sampled path values after baseline removal

    The straight line connecting the first and last values is subtracted, and
    the absolute differences of consecutive residuals are summed. The result is
    zero for values that are affine along the path.

    Parameters
    ----------
    values: array_like
        Model outputs at regularly spaced points of a path, shape ``(n,)``,
        ``n >= 2``.
    """
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if values.size < 2:
        raise ConfigError("Error in path_tv: need at least 2 values")
    lam = np.linspace(0.0, 1.0, values.size)
    residual = values - ((1.0 - lam) * values[0] + lam * values[-1])
    return float(np.sum(np.abs(np.diff(residual))))


@dataclasses.dataclass
class TvReport:
    """Total variation complexity estimate

    Attributes
    ----------
    values: np.ndarray
        TV of each path.
    output_dims: np.ndarray
        Output dimension evaluated on each path.
    n_points: int
        Points per path.
    seed: int
        The sampling seed.
    """

    values: np.ndarray
    output_dims: np.ndarray
    n_points: int
    seed: int

    @property
    def n_paths(self) -> int:
        return int(self.values.size)

    @property
    def mean(self) -> float:
        """float: Mean TV over paths"""
        return float(np.mean(self.values))

    def to_frame(self) -> pd.DataFrame:
        """Table with columns path, output_dim, tv"""
        return pd.DataFrame(
            {
                "path": np.arange(self.n_paths),
                "output_dim": self.output_dims,
                "tv": self.values,
            }
        )


def _default_rows(dataset: Dataset) -> np.ndarray:
    if dataset.split is not None:
        return dataset.split.train
    return np.arange(dataset.n_rows)


def sample_endpoints(
    dataset: Dataset,
    n_paths: int,
    rng: np.random.Generator,
    rows: Optional[npt.ArrayLike] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Row pairs anchoring the paths

    Classification: pairs of rows with different labels. Regression without
    class labels: pairs whose targets differ by at least the median absolute
    target difference (estimated on random pairs).

    Returns
    -------
    (first, second): tuple[np.ndarray, np.ndarray]
        Row indices of the two endpoints of each path.
    """
    rows = _default_rows(dataset) if rows is None else np.asarray(rows, np.int64)
    labels = dataset.class_labels()
    first = np.zeros(n_paths, dtype=np.int64)
    second = np.zeros(n_paths, dtype=np.int64)
    if labels is not None:
        labels = labels[rows]
        if np.unique(labels).size < 2:
            raise ConfigError("Error in tv_complexity: need at least 2 distinct labels")
        for p in range(n_paths):
            i = rng.integers(rows.size)
            others = np.flatnonzero(labels != labels[i])
            while others.size == 0:
                i = rng.integers(rows.size)
                others = np.flatnonzero(labels != labels[i])
            first[p] = rows[i]
            second[p] = rows[others[rng.integers(others.size)]]
        return (first, second)

    if rows.size < 2:
        raise ConfigError("Error in tv_complexity: need at least 2 rows")
    y = dataset.y[rows]
    a = rng.integers(rows.size, size=REGRESSION_PAIR_SAMPLES)
    b = rng.integers(rows.size, size=REGRESSION_PAIR_SAMPLES)
    gap = np.median(np.abs(y[a] - y[b]))
    for p in range(n_paths):
        i = rng.integers(rows.size)
        others = np.flatnonzero(np.abs(y - y[i]) >= gap)
        others = others[others != i]
        while others.size == 0:
            i = rng.integers(rows.size)
            others = np.flatnonzero(np.abs(y - y[i]) >= gap)
            others = others[others != i]
        first[p] = rows[i]
        second[p] = rows[others[rng.integers(others.size)]]
    return (first, second)


def tv_complexity(
    model: Model,
    dataset: Dataset,
    n_paths: int = 200,
    n_points: int = 100,
    seed: int = 0,
    rows: Optional[npt.ArrayLike] = None,
) -> TvReport:
    """Estimate the total variation complexity of a model

    Each path connects two training points (with different labels for
    classification). The model is evaluated at `n_points` regularly spaced
    points; one output dimension, drawn uniformly per path, is used. The TV of
    each path is computed with :func:`path_tv`.

    Parameters
    ----------
    model: Model
        The function, for example a :class:`libmetaact.nets.MlpModel`. Raw
        outputs (before any softmax) are used.
    dataset: Dataset
        Data anchoring the paths.
    n_paths: int = 200
        Number of paths.
    n_points: int = 100
        Points per path.
    seed: int = 0
        Seed of the endpoint and output dimension draws.
    rows: Optional[array_like] = None
        Rows eligible as endpoints. Default is the training split, or all rows.

    Returns
    -------
    report: TvReport
        Per-path TV values and their mean.
    """
    if n_paths < 1:
        raise ConfigError("Error in tv_complexity: n_paths must be >= 1")
    rng = np.random.default_rng(seed)
    first, second = sample_endpoints(dataset, n_paths, rng, rows)
    paths = [Path(dataset.X[i], dataset.X[j], n_points) for i, j in zip(first, second)]
    points = np.vstack([path.points() for path in paths])
    out = np.asarray(model(points), dtype=np.float64)
    out = out.reshape(n_paths, n_points, -1)
    dims = rng.integers(out.shape[2], size=n_paths)
    values = np.array([path_tv(out[p, :, dims[p]]) for p in range(n_paths)])
    logger.debug("tv_complexity: mean %.6g over %d paths", values.mean(), n_paths)
    return TvReport(values=values, output_dims=dims, n_points=n_points, seed=seed)


def tv_along_training(
    trajectory,
    dataset: Dataset,
    n_paths: int = 200,
    n_points: int = 100,
    seed: int = 0,
    every: int = 1,
) -> pd.DataFrame:
    """Mean TV of the snapshots of a training trajectory

    Parameters
    ----------
    trajectory: libmetaact.training.Trajectory
        The snapshots.
    dataset: Dataset
        Data anchoring the paths; the same paths are used for every snapshot.
    n_paths, n_points, seed:
        See :func:`tv_complexity`.
    every: int = 1
        Use every `every`-th snapshot; the last one is always included.

    Returns
    -------
    table: pandas.DataFrame
        Columns step, mean_tv.
    """
    if len(trajectory) == 0:
        raise ConfigError("Error in tv_along_training: empty trajectory")
    indices = list(range(0, len(trajectory), every))
    if indices[-1] != len(trajectory) - 1:
        indices.append(len(trajectory) - 1)
    records = []
    for i in indices:
        model = MlpModel(trajectory.spec, trajectory.params(i))
        report = tv_complexity(model, dataset, n_paths, n_points, seed)
        records.append({"step": trajectory.steps[i], "mean_tv": report.mean})
    return pd.DataFrame.from_records(records, columns=["step", "mean_tv"])
