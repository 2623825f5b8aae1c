"""Transfer of activation functions across tasks"""
import dataclasses
import logging
import pathlib
import re

import numpy as np
import pandas as pd

import libmetaact.training as training
from libmetaact.experiments._ExperimentConfig import ExperimentConfig
from libmetaact.experiments._methods import write_metadata
from libmetaact.experiments._parallel import run_parallel
from libmetaact.experiments._RunInfo import RunInfo
from libmetaact.experiments._tasks import build_dataset, fit_spec
from libmetaact.metaglobal import ConfigError, read_json
from libmetaact.splines import (
    ActivationBinding,
    activation_set_from_dict,
    relu_binding,
)
from libmetaact.tasks import AlgTaskSpec

logger = logging.getLogger(__name__)

SCORE_KINDS = ("normalized-convergence", "normalized-accuracy")

TRANSFER_THRESHOLD = 0.95


def task_name(task: dict) -> str:
    """A readable name of a task dict ("a+b mod 27" for algorithmic tasks)"""
    if "name" in task:
        return str(task["name"])
    if task["type"] == "algorithmic":
        return AlgTaskSpec.from_dict(task).name
    if task["type"] == "multitask_algorithmic":
        return "all tasks"
    return task["type"]


def slug(name: str) -> str:
    """A file name for a task name"""
    return re.sub(r"[^A-Za-z0-9+*-]+", "_", name).strip("_")


def normalize_transfer_row(
    steps: np.ndarray, accuracy: np.ndarray
) -> tuple[np.ndarray, str]:
    """Scores in [0, 1] for one task, with their kind

    If any activation reaches the accuracy threshold, scores are
    ``best_steps / steps`` (steps counted as at least 1), and 0 for
    activations that never reach it ("normalized-convergence"). Otherwise
    scores are ``accuracy / best_accuracy`` ("normalized-accuracy"). The best
    cell always scores exactly 1.

    Parameters
    ----------
    steps: np.ndarray
        Steps to reach the threshold per activation, NaN if never reached.
    accuracy: np.ndarray
        Best test accuracy per activation.
    """
    steps = np.asarray(steps, dtype=np.float64)
    accuracy = np.asarray(accuracy, dtype=np.float64)
    solved = ~np.isnan(steps)
    if np.any(solved):
        counted = np.maximum(np.where(solved, steps, np.inf), 1.0)
        best = np.min(counted)
        return (np.where(solved, best / counted, 0.0), SCORE_KINDS[0])
    best_acc = np.nanmax(accuracy) if np.any(~np.isnan(accuracy)) else 0.0
    if best_acc <= 0.0:
        return (np.ones_like(accuracy), SCORE_KINDS[1])
    return (np.nan_to_num(accuracy / best_acc), SCORE_KINDS[1])


@dataclasses.dataclass
class TransferMatrix:
    """Task by activation function scores

    Attributes
    ----------
    tasks: list[str]
        Row names.
    columns: list[str]
        Activation names. A column named like a row holds that task's own
        meta-learned activation.
    scores: np.ndarray
        Normalized scores in [0, 1], shape ``(len(tasks), len(columns))``.
        The maximum of each row is 1.
    kinds: list[str]
        Score kind of each row, one of :data:`SCORE_KINDS`.
    steps: np.ndarray
        Steps to reach the accuracy threshold, NaN where never reached.
    accuracy: np.ndarray
        Best test accuracy.
    """

    tasks: list
    columns: list
    scores: np.ndarray
    kinds: list
    steps: np.ndarray
    accuracy: np.ndarray

    @staticmethod
    def from_results(
        tasks: list[str], columns: list[str], steps: np.ndarray, accuracy: np.ndarray
    ) -> "TransferMatrix":
        steps = np.asarray(steps, dtype=np.float64)
        accuracy = np.asarray(accuracy, dtype=np.float64)
        if steps.shape != (len(tasks), len(columns)) or accuracy.shape != steps.shape:
            raise ConfigError("Error in TransferMatrix: grid shape mismatch")
        rows = [normalize_transfer_row(s, a) for s, a in zip(steps, accuracy)]
        return TransferMatrix(
            tasks=list(tasks),
            columns=list(columns),
            scores=np.array([r[0] for r in rows]).reshape(steps.shape),
            kinds=[r[1] for r in rows],
            steps=steps,
            accuracy=accuracy,
        )

    def column_means(self) -> pd.Series:
        """Mean score of each activation over tasks"""
        return pd.Series(self.scores.mean(axis=0), index=self.columns)

    def density(self, reference: str = "relu") -> float:
        """Fraction of off-diagonal cells scoring above the `reference` column
        of their row

        Off-diagonal cells are those whose activation was learned on another
        task: the `reference` column and each row's own column are excluded.
        """
        if reference not in self.columns:
            raise ConfigError(f"Error in TransferMatrix.density: no '{reference}'")
        ref = self.columns.index(reference)
        better, total = 0, 0
        for i, task in enumerate(self.tasks):
            for j, column in enumerate(self.columns):
                if j == ref or column == task:
                    continue
                total += 1
                better += int(self.scores[i, j] > self.scores[i, ref])
        return better / total if total else float("nan")

    def to_frame(self) -> pd.DataFrame:
        """Columns task, kind, then one score column per activation"""
        df = pd.DataFrame(self.scores, columns=self.columns)
        df.insert(0, "kind", self.kinds)
        df.insert(0, "task", self.tasks)
        return df


def load_activations(config: ExperimentConfig) -> dict[str, ActivationBinding]:
    """The columns of a transfer matrix

    ``config.activations`` maps names to activation-set JSON files; a None
    path means ReLU. A "relu" column is appended if not listed.
    """
    bindings = {}
    for name, path in config.activations.items():
        if path is None:
            bindings[name] = relu_binding()
            continue
        path = pathlib.Path(path)
        if not path.exists():
            raise ConfigError(f"Error in load_activations: missing file {path}")
        hidden, _ = activation_set_from_dict(read_json(path))
        bindings[name] = hidden
    if "relu" not in bindings:
        bindings["relu"] = relu_binding()
    return bindings


def _transfer_cell(item: tuple) -> tuple[float, float]:
    config, task, binding, threshold = item
    dataset = build_dataset(task)
    spec = fit_spec(config.model, dataset, activation=binding)
    steps, accuracy = [], []
    for seed in config.seeds:
        result = training.train(spec, dataset, config.train.replace(seed=seed))
        step = training.steps_to_accuracy(result.metrics, "test_acc", threshold)
        steps.append(np.nan if step is None else float(step))
        accuracy.append(float(result.metrics["test_acc"].max()))
    return (float(np.mean(steps)), float(np.mean(accuracy)))


def cmd_transfer_matrix(
    config: ExperimentConfig, threshold: float = TRANSFER_THRESHOLD
) -> TransferMatrix:
    """Train every task with every activation function and score the pairs

    Rows are ``config.transfer_tasks``; columns are the activations of
    :func:`load_activations`. Each cell trains ``config.model`` with the
    activation held fixed, for every seed, and records the steps until test
    accuracy reaches `threshold` (NaN if any seed never does) and the best
    test accuracy, averaged over seeds. Scores follow
    :func:`normalize_transfer_row`.

    Writes ``transfer.csv`` (scores), ``transfer_steps.csv``,
    ``transfer_accuracy.csv`` and ``metadata.json`` into the output directory.
    """
    if len(config.transfer_tasks) == 0:
        raise ConfigError("Error in cmd_transfer_matrix: no transfer_tasks")
    bindings = load_activations(config)
    columns = list(bindings)
    names = [task_name(task) for task in config.transfer_tasks]
    items = [
        (config, task, bindings[column], threshold)
        for task in config.transfer_tasks
        for column in columns
    ]
    cells = run_parallel(_transfer_cell, items, config.n_workers)
    shape = (len(names), len(columns))
    steps = np.array([c[0] for c in cells]).reshape(shape)
    accuracy = np.array([c[1] for c in cells]).reshape(shape)
    matrix = TransferMatrix.from_results(names, columns, steps, accuracy)

    info = RunInfo("transfer")
    for i, name in enumerate(names):
        info.begin(name)
        info.finish(
            {"kind": matrix.kinds[i], **dict(zip(columns, matrix.scores[i].round(4)))}
        )
    info.close()

    out = pathlib.Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    matrix.to_frame().to_csv(out / "transfer.csv", index=False, float_format="%.17g")
    for label, grid in (("steps", steps), ("accuracy", accuracy)):
        df = pd.DataFrame(grid, columns=columns)
        df.insert(0, "task", names)
        df.to_csv(out / f"transfer_{label}.csv", index=False, float_format="%.17g")
    write_metadata(
        out,
        "transfer",
        config.seeds,
        {
            "threshold": threshold,
            "score": {
                SCORE_KINDS[0]: "best_steps / steps to the threshold, 0 if never",
                SCORE_KINDS[1]: "accuracy / best accuracy, if no cell reaches it",
            },
            "column_means": matrix.column_means().to_dict(),
        },
    )
    return matrix
