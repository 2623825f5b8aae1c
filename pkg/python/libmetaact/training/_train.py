import collections
import dataclasses
import logging
from typing import Optional

import numpy as np
import pandas as pd

import libmetaact.autograd as ag
from libmetaact.metaglobal import ConfigError, DivergenceError
from libmetaact.nets import (
    ActivationParams,
    MlpSpec,
    ParamSet,
    build_forward,
    init_params,
    with_activation_params,
)
from libmetaact.tasks import Dataset
from libmetaact.training._methods import (
    METRICS_COLUMNS,
    build_loss,
    evaluate,
    loss_targets,
    mean_params,
)
from libmetaact.training._TrainConfig import (
    RMSPROP_DECAY,
    RMSPROP_EPS,
    TrainConfig,
    snapshot_interval,
)
from libmetaact.training._Trajectory import Trajectory

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class TrainResult:
    """Outcome of :func:`train`

    Attributes
    ----------
    final: ParamSet
        Evaluation-time parameters after the last step (stochastic weight
        average if enabled).
    best: ParamSet
        Evaluation-time parameters at the recorded step with the best
        validation accuracy (lowest validation loss for datasets without class
        anchors). Earliest step on ties. Without validation rows, equal to
        `final`.
    trajectory: Trajectory
        Raw parameter iterates at the recorded steps.
    metrics: pandas.DataFrame
        One row per recorded step, columns :data:`METRICS_COLUMNS`.
    best_step: int
        The step of `best`.
    best_score: float
        The selection score of `best`: validation accuracy, or minus the
        validation loss for datasets without class anchors. NaN without
        validation rows.
    spec: MlpSpec
        The architecture trained, with the fixed activation functions.
    """

    final: ParamSet
    best: ParamSet
    trajectory: Trajectory
    metrics: pd.DataFrame
    best_step: int
    best_score: float
    spec: MlpSpec

    @property
    def best_val_acc(self) -> float:
        row = self.metrics.loc[self.metrics["step"] == self.best_step]
        return float(row["val_acc"].iloc[0])


def loss_and_grad(
    spec: MlpSpec,
    params: ParamSet,
    X: np.ndarray,
    targets: np.ndarray,
    kind: str,
) -> tuple[float, list[np.ndarray]]:
    """Loss on a batch and its gradient, in :func:`ParamSet.names` order"""
    trace = ag.Trace()
    theta = {name: trace.leaf(value, name) for name, value in params.as_dict().items()}
    out = build_forward(trace, spec, theta, trace.constant(X))
    value = build_loss(out, targets, kind)
    names = list(params.names())
    grads = ag.grad(value, [theta[n] for n in names])
    return (float(value.value), grads)


class _BatchSampler:
    """Rows of consecutive minibatches; reshuffled every epoch"""

    def __init__(self, rows: np.ndarray, batch_size: int, seed: int):
        self.rows = rows
        self.batch_size = batch_size
        self.full_batch = batch_size >= rows.size
        self._rng = np.random.default_rng((seed, 1))
        self._order = np.zeros(0, dtype=np.int64)
        self._pos = 0

    def next(self) -> np.ndarray:
        if self.full_batch:
            return self.rows
        if self._pos + self.batch_size > self._order.size:
            self._order = self.rows[self._rng.permutation(self.rows.size)]
            self._pos = 0
        batch = self._order[self._pos : self._pos + self.batch_size]
        self._pos += self.batch_size
        return batch


def train(
    spec: MlpSpec,
    dataset: Dataset,
    config: TrainConfig,
    psi: Optional[ActivationParams] = None,
    params: Optional[ParamSet] = None,
) -> TrainResult:
    """Train network weights with fixed activation functions

    Parameters
    ----------
    spec: MlpSpec
        The architecture, with its activation functions.
    dataset: Dataset
        The data, with a split. Training uses ``split.train``; the best
        checkpoint is selected on ``split.val``; ``split.test`` is only
        reported.
    config: TrainConfig
        Optimizer settings.
    psi: Optional[ActivationParams] = None
        Spline control values replacing those of `spec`. They are not changed by
        training.
    params: Optional[ParamSet] = None
        Initial parameters. Default is :func:`libmetaact.nets.init_params` with
        ``config.seed``.

    Returns
    -------
    result: TrainResult
        Final and best parameters, the trajectory, and the metrics table.

    Raises
    ------
    libmetaact.metaglobal.DivergenceError
        If the training loss or its gradient becomes non-finite.
    """
    if dataset.split is None:
        raise ConfigError("Error in train: dataset has no split")
    if psi is not None:
        spec = with_activation_params(spec, psi)
    split = dataset.split
    if split.train.size == 0:
        raise ConfigError("Error in train: empty training split")
    kind = config.loss_kind(spec.head)
    if kind == "ce" and spec.head != "logits":
        raise ConfigError("Error in train: cross-entropy requires the logits head")

    current = params if params is not None else init_params(spec, config.seed)
    theta = [np.array(x) for x in current.as_dict().values()]
    names = list(current.names())
    square_avg = [np.zeros_like(x) for x in theta]
    sampler = _BatchSampler(split.train, config.batch_size, config.seed)
    batch_targets = None
    if sampler.full_batch:
        batch_targets = loss_targets(spec, dataset, split.train)

    interval = snapshot_interval(config.max_steps)
    swa = collections.deque(maxlen=max(config.swa_window, 1))
    trajectory = Trajectory(spec)
    records = []
    evaluated = []
    use_loss = dataset.class_values() is None and dataset.kind == "regression"

    def record(step: int, raw: ParamSet) -> None:
        eval_params = mean_params(spec, list(swa)) if config.swa_window else raw
        train_loss, train_acc = evaluate(spec, eval_params, dataset, split.train, kind)
        val_loss, val_acc = evaluate(spec, eval_params, dataset, split.val, kind)
        _, test_acc = evaluate(spec, eval_params, dataset, split.test, kind)
        if not np.isfinite(train_loss):
            raise DivergenceError("Error in train: non-finite training loss", step)
        trajectory.append(step, raw, train_loss, val_acc)
        records.append(
            {
                "step": step,
                "train_loss": train_loss,
                "train_acc": train_acc,
                "val_acc": val_acc,
                "test_acc": test_acc,
            }
        )
        score = -val_loss if use_loss else val_acc
        evaluated.append((step, score, eval_params))
        logger.debug(
            "step %d: train_loss=%.6g train_acc=%.4f val_acc=%.4f test_acc=%.4f",
            step,
            train_loss,
            train_acc,
            val_acc,
            test_acc,
        )

    swa.append(current.to_vector())
    record(0, current)
    for step in range(1, config.max_steps + 1):
        rows = sampler.next()
        targets = batch_targets
        if targets is None:
            targets = loss_targets(spec, dataset, rows)
        value, grads = loss_and_grad(spec, current, dataset.X[rows], targets, kind)
        if not np.isfinite(value) or not all(np.all(np.isfinite(g)) for g in grads):
            raise DivergenceError("Error in train: non-finite loss or gradient", step)
        for i, g in enumerate(grads):
            if config.optimizer == "rmsprop":
                square_avg[i] = RMSPROP_DECAY * square_avg[i] + (
                    1.0 - RMSPROP_DECAY
                ) * (g * g)
                step_size = np.sqrt(square_avg[i]) + RMSPROP_EPS
                theta[i] = theta[i] - config.lr * g / step_size
            else:
                theta[i] = theta[i] - config.lr * g
        current = ParamSet.from_arrays(dict(zip(names, theta)))
        swa.append(current.to_vector())
        if step % interval == 0 or step == config.max_steps:
            record(step, current)

    final_step, _, final = evaluated[-1]
    best_step, best_score, best = final_step, float("nan"), final
    if split.val.size:
        best_step, best_score, best = evaluated[0]
        for step, score, eval_params in evaluated[1:]:
            if score > best_score:
                best_step, best_score, best = step, score, eval_params
    metrics = pd.DataFrame.from_records(records, columns=METRICS_COLUMNS)
    logger.info(
        "trained %d steps: final train_loss=%.6g, best step %d",
        config.max_steps,
        records[-1]["train_loss"],
        best_step,
    )
    return TrainResult(
        final=final,
        best=best,
        trajectory=trajectory,
        metrics=metrics,
        best_step=best_step,
        best_score=float(best_score),
        spec=spec,
    )


def retrain_score(
    spec: MlpSpec,
    dataset: Dataset,
    config: TrainConfig,
    psi: Optional[ActivationParams] = None,
) -> float:
    """Selection score of the best checkpoint of a fresh training run, see
    :class:`TrainResult`"""
    return train(spec, dataset, config, psi=psi).best_score
