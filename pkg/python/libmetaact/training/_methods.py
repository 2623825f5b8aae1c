from typing import Optional, Union

import numpy as np
import numpy.typing as npt
import pandas as pd

import libmetaact.autograd as ag
import libmetaact.autograd.ops as ops
from libmetaact.metaglobal import ConfigError, ShapeError
from libmetaact.nets import MlpSpec, ParamSet, forward, params_from_vector
from libmetaact.tasks import Dataset
from libmetaact.training._Trajectory import Trajectory

METRICS_COLUMNS = ["step", "train_loss", "train_acc", "val_acc", "test_acc"]
"""Columns of the per-run metrics table, in order"""


def loss_targets(spec: MlpSpec, dataset: Dataset, rows: npt.ArrayLike) -> np.ndarray:
    """Target matrix for the network output on `rows`

    One-hot rows of width ``spec.output_dim`` for the logits head, a column of
    target values for the regression head.
    """
    rows = np.asarray(rows, dtype=np.int64)
    if spec.head == "logits":
        if dataset.kind != "classification":
            raise ConfigError(
                "Error in loss_targets: the logits head needs a classification dataset"
            )
        if dataset.class_count > spec.output_dim:
            raise ConfigError(
                f"Error in loss_targets: {dataset.class_count} classes but "
                f"output_dim={spec.output_dim}"
            )
        targets = np.zeros((rows.size, spec.output_dim))
        targets[np.arange(rows.size), dataset.y[rows]] = 1.0
        return targets
    if dataset.kind != "regression":
        raise ConfigError(
            "Error in loss_targets: the regression head needs a regression dataset"
        )
    return dataset.y[rows].reshape(-1, 1)


def build_loss(
    predictions: ag.Var,
    targets: Union[ag.Var, np.ndarray],
    kind: str,
) -> ag.Var:
    """Record a loss on the trace of `predictions`

    Parameters
    ----------
    predictions: libmetaact.autograd.Var
        Network outputs, shape ``(n, output_dim)``.
    targets: Union[libmetaact.autograd.Var, np.ndarray]
        Targets from :func:`loss_targets`.
    kind: str
        "ce" or "mse".
    """
    if kind == "ce":
        return ops.softmax_ce(predictions, targets)
    if kind == "mse":
        return ops.mse(predictions, targets)
    raise ConfigError(f"Error in build_loss: invalid loss '{kind}'")


def loss(
    head: str,
    predictions: npt.ArrayLike,
    targets: npt.ArrayLike,
    kind: Optional[str] = None,
) -> float:
    """Loss of predictions against targets

    Parameters
    ----------
    head: str
        "logits" or "regression".
    predictions: array_like
        Network outputs, shape ``(n, output_dim)``, or ``(n,)`` for a single
        output.
    targets: array_like
        Class indices (``(n,)`` integers) or a target matrix of the shape of
        `predictions`.
    kind: Optional[str] = None
        "ce" (mean of ``-log softmax`` of the target class) or "mse" (mean
        squared error). Default is "ce" for the logits head and "mse" for the
        regression head.

    Returns
    -------
    value: float
        The mean loss.
    """
    kind = kind or ("ce" if head == "logits" else "mse")
    P = np.asarray(predictions, dtype=np.float64)
    if P.ndim == 1:
        P = P.reshape(-1, 1)
    T = np.asarray(targets)
    if T.ndim == 1 and head == "logits":
        onehot = np.zeros(P.shape)
        onehot[np.arange(P.shape[0]), T.astype(np.int64)] = 1.0
        T = onehot
    T = np.asarray(T, dtype=np.float64).reshape(P.shape)
    trace = ag.Trace()
    return float(build_loss(trace.constant(P), T, kind).value)


def accuracy(
    head: str,
    predictions: npt.ArrayLike,
    labels: npt.ArrayLike,
    class_values: Optional[npt.ArrayLike] = None,
) -> float:
    """Fraction of rows predicted as their class

    The logits head predicts the argmax output; the regression head predicts
    the class whose anchor in `class_values` is nearest. Ties go to the lower
    class index in both cases.

    Parameters
    ----------
    head: str
        "logits" or "regression".
    predictions: array_like
        Network outputs, shape ``(n, output_dim)``.
    labels: array_like
        Class index per row.
    class_values: Optional[array_like] = None
        Regression anchor of each class. Required for the regression head.
    """
    P = np.asarray(predictions, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if P.ndim == 1:
        P = P.reshape(-1, 1)
    if P.shape[0] != labels.shape[0]:
        raise ShapeError("accuracy", [P.shape, labels.shape])
    if labels.size == 0:
        return float("nan")
    if head == "logits":
        predicted = np.argmax(P, axis=1)
    elif head == "regression":
        if class_values is None:
            raise ConfigError(
                "Error in accuracy: the regression head requires class_values"
            )
        anchors = np.asarray(class_values, dtype=np.float64)
        predicted = np.argmin(np.abs(P[:, :1] - anchors[None, :]), axis=1)
    else:
        raise ConfigError(f"Error in accuracy: invalid head '{head}'")
    return float(np.mean(predicted == labels))


def evaluate(
    spec: MlpSpec,
    params: ParamSet,
    dataset: Dataset,
    rows: Optional[npt.ArrayLike] = None,
    kind: Optional[str] = None,
) -> tuple[float, float]:
    """Loss and accuracy of a network on dataset rows

    Parameters
    ----------
    spec: MlpSpec
        The architecture, with its activation functions.
    params: ParamSet
        The parameters.
    dataset: Dataset
        The data.
    rows: Optional[array_like] = None
        Rows to evaluate. Default is all rows.
    kind: Optional[str] = None
        The loss, see :func:`loss`.

    Returns
    -------
    (loss, accuracy): tuple[float, float]
        NaN for an empty row set. The accuracy is NaN for regression datasets
        without class anchors.
    """
    rows = np.arange(dataset.n_rows) if rows is None else np.asarray(rows, np.int64)
    if rows.size == 0:
        return (float("nan"), float("nan"))
    kind = kind or ("ce" if spec.head == "logits" else "mse")
    P = forward(spec, params, dataset.X[rows])
    T = loss_targets(spec, dataset, rows)
    value = float(build_loss(ag.Trace().constant(P), T, kind).value)
    labels = dataset.class_labels()
    class_values = dataset.class_values()
    if labels is None or (spec.head == "regression" and class_values is None):
        return (value, float("nan"))
    return (value, accuracy(spec.head, P, labels[rows], class_values))


def mean_params(spec: MlpSpec, vectors: list[np.ndarray]) -> ParamSet:
    """Elementwise mean of flattened parameter vectors"""
    return params_from_vector(spec, np.mean(np.vstack(vectors), axis=0))


def swa_average(trajectory: Trajectory, window: int) -> ParamSet:
    """Stochastic weight average of the last snapshots of a trajectory

    Parameters
    ----------
    trajectory: Trajectory
        The recorded snapshots.
    window: int
        Number of trailing snapshots to average, >= 1. Shorter trajectories
        average all their snapshots.

    Returns
    -------
    params: ParamSet
        The elementwise mean of the last ``min(window, len(trajectory))``
        snapshots.
    """
    if len(trajectory) == 0:
        raise ConfigError("Error in swa_average: empty trajectory")
    if window < 1:
        raise ConfigError(f"Error in swa_average: window must be >= 1, got {window}")
    return mean_params(trajectory.spec, trajectory.snapshots[-window:])


def steps_to_accuracy(
    metrics: pd.DataFrame,
    column: str = "test_acc",
    threshold: float = 0.95,
) -> Optional[int]:
    """First recorded step at which `column` reaches `threshold`, or None"""
    if column not in metrics.columns:
        raise ConfigError(f"Error in steps_to_accuracy: no column '{column}'")
    reached = metrics.loc[metrics[column] >= threshold, "step"]
    if reached.empty:
        return None
    return int(reached.iloc[0])


def grokking_delay(
    metrics: pd.DataFrame,
    train_threshold: float = 0.99,
    test_threshold: float = 0.95,
) -> Optional[float]:
    """Ratio of the steps to reach test accuracy `test_threshold` to the steps
    to reach train accuracy `train_threshold`

    Returns None if either threshold is never reached. A train step of 0 counts
    as 1.
    """
    train_step = steps_to_accuracy(metrics, "train_acc", train_threshold)
    test_step = steps_to_accuracy(metrics, "test_acc", test_threshold)
    if train_step is None or test_step is None:
        return None
    return test_step / max(train_step, 1)
