"""Trajectory and metrics files"""
import json
import pathlib
from typing import Union

import numpy as np
import pandas as pd

from libmetaact.metaglobal import ConfigError
from libmetaact.nets import MlpSpec
from libmetaact.training._methods import METRICS_COLUMNS
from libmetaact.training._Trajectory import Trajectory


def save_trajectory(
    path: Union[str, pathlib.Path], trajectory: Trajectory
) -> pathlib.Path:
    """Save a trajectory as ``.npz``

    Arrays: "steps", "snapshots", "train_loss", "val_acc", and "spec" (the
    architecture as a JSON string).
    """
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        np.savez(
            f,
            steps=np.array(trajectory.steps, dtype=np.int64),
            snapshots=trajectory.snapshot_matrix(),
            train_loss=np.array(trajectory.train_loss),
            val_acc=np.array(trajectory.val_acc),
            spec=np.array(json.dumps(trajectory.spec.to_dict())),
        )
    return path


def load_trajectory(path: Union[str, pathlib.Path]) -> Trajectory:
    """Load a trajectory saved by :func:`save_trajectory`"""
    with np.load(path, allow_pickle=False) as data:
        return Trajectory.from_arrays(
            spec=MlpSpec.from_dict(json.loads(str(data["spec"]))),
            steps=data["steps"],
            snapshots=data["snapshots"],
            train_loss=data["train_loss"],
            val_acc=data["val_acc"],
        )


def write_metrics_csv(
    path: Union[str, pathlib.Path], metrics: pd.DataFrame
) -> pathlib.Path:
    """Write a metrics table (columns step, train_loss, train_acc, val_acc,
    test_acc)"""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    metrics[METRICS_COLUMNS].to_csv(path, index=False, float_format="%.17g")
    return path


def read_metrics_csv(path: Union[str, pathlib.Path]) -> pd.DataFrame:
    metrics = pd.read_csv(path)
    if list(metrics.columns) != METRICS_COLUMNS:
        raise ConfigError(
            f"Error in read_metrics_csv: expected columns {METRICS_COLUMNS}, "
            f"got {list(metrics.columns)}"
        )
    return metrics
