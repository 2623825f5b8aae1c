import logging
import pathlib
from typing import Optional, Union

import numpy as np
import pandas as pd

import libmetaact.complexity as complexity
from libmetaact.experiments._knn import knn_baseline
from libmetaact.experiments._methods import write_metadata
from libmetaact.experiments._tasks import build_dataset
from libmetaact.metaglobal import ConfigError
from libmetaact.nets import MlpModel, load_checkpoint
from libmetaact.tasks import Dataset
from libmetaact.training import evaluate, load_trajectory

logger = logging.getLogger(__name__)

ANALYSES = ("tv", "slice2d", "landscape-pca", "landscape-random", "knn")

KNN_COLUMNS = ["method", "k", "metric", "train_acc", "val_acc", "test_acc"]


def cmd_analyze(
    checkpoint: Union[str, pathlib.Path],
    dataset: Union[dict, Dataset],
    what: str,
    out_dir: Union[str, pathlib.Path],
    seed: int = 0,
    kind: str = "loss",
    resolution: Optional[int] = None,
    n_paths: int = 200,
    n_points: int = 100,
) -> pathlib.Path:
    """Export a complexity analysis of a checkpoint as CSV

    Parameters
    ----------
    checkpoint: Union[str, pathlib.Path]
        A checkpoint JSON file. "landscape-pca" also reads ``trajectory.npz``
        from the same directory.
    dataset: Union[dict, Dataset]
        The data, or a task dict to build it.
    what: str
        One of :data:`ANALYSES`:

        - "tv": per-path TV values, ``tv.csv``
        - "slice2d": outputs on the first two input coordinates around the
          first training row, ``slice2d.csv``
        - "landscape-pca": `kind` over the plane of the top two principal
          directions of the trajectory, ``landscape_pca.csv``
        - "landscape-random": `kind` over a random plane, ``landscape_random.csv``
        - "knn": accuracies of the checkpoint and of the best k-nearest-neighbors
          classifier on the same split, ``knn.csv``

    out_dir: Union[str, pathlib.Path]
        Output directory; also receives ``metadata.json`` with the seed.
    seed: int = 0
        Seed of path sampling and random planes.
    kind: str = "loss"
        Landscape values, "loss" or "tv".
    resolution: Optional[int] = None
        Grid points per axis. Default is 200 for slices and 50 for landscapes.
    n_paths, n_points: int
        TV settings.

    Returns
    -------
    path: pathlib.Path
        The CSV file written.
    """
    if what not in ANALYSES:
        raise ConfigError(
            f"Error in cmd_analyze: invalid analysis '{what}', expected one of "
            f"{ANALYSES}"
        )
    checkpoint = pathlib.Path(checkpoint)
    if not checkpoint.exists():
        raise ConfigError(f"Error in cmd_analyze: missing checkpoint {checkpoint}")
    model = load_checkpoint(checkpoint)
    if isinstance(dataset, dict):
        dataset = build_dataset(dataset)
    out = pathlib.Path(out_dir)

    if what == "tv":
        report = complexity.tv_complexity(
            model, dataset, n_paths=n_paths, n_points=n_points, seed=seed
        )
        logger.info("mean TV %.6g over %d paths", report.mean, report.n_paths)
        path = complexity.write_tv_csv(out / "tv.csv", report)
    elif what == "slice2d":
        if dataset.input_dim < 2:
            raise ConfigError("Error in cmd_analyze: slice2d needs 2 input dimensions")
        row = dataset.split.train[0] if dataset.split is not None else 0
        grid = complexity.input_slice_2d(
            model,
            anchor=dataset.X[row],
            resolution=resolution or complexity.SLICE_RESOLUTION,
        )
        path = complexity.write_grid_csv(out / "slice2d.csv", grid)
    elif what == "knn":
        path = _write_knn_csv(out / "knn.csv", model, dataset)
    else:
        if what == "landscape-pca":
            trajectory_path = checkpoint.parent / "trajectory.npz"
            if not trajectory_path.exists():
                raise ConfigError(
                    f"Error in cmd_analyze: landscape-pca needs {trajectory_path}"
                )
            trajectory = load_trajectory(trajectory_path)
            plane = complexity.pca_plane(trajectory, model.params)
            extents = complexity.pca_extents(plane, trajectory)
        else:
            plane = complexity.random_plane(model.params, seed=seed)
            extents = complexity.random_extents(plane)
        land = complexity.landscape(
            model.spec,
            plane,
            extents,
            dataset,
            kind=kind,
            resolution=resolution or complexity.LANDSCAPE_RESOLUTION,
            n_paths=n_paths,
            n_points=n_points,
            seed=seed,
        )
        name = what.replace("-", "_")
        path = complexity.write_grid_csv(out / f"{name}.csv", land)
    write_metadata(
        out,
        "analyze",
        [seed],
        {"what": what, "kind": kind, "checkpoint": str(checkpoint)},
    )
    return path


def _write_knn_csv(
    path: pathlib.Path, model: MlpModel, dataset: Dataset
) -> pathlib.Path:
    knn = knn_baseline(dataset)
    s = dataset.split
    accs = [
        evaluate(model.spec, model.params, dataset, rows)[1]
        for rows in (s.train, s.val, s.test)
    ]
    table = pd.DataFrame.from_records(
        [
            ["checkpoint", np.nan, "", *accs],
            ["knn", knn.k, knn.metric, knn.train_acc, knn.val_acc, knn.test_acc],
        ],
        columns=KNN_COLUMNS,
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format="%.17g")
    logger.info("test accuracy: checkpoint %.4f, k-NN %.4f", accs[2], knn.test_acc)
    return path
