import datetime
import importlib.metadata
import logging
import pathlib
from typing import Iterable, Optional, Union

import numpy as np
import pandas as pd

import libmetaact.metalearn as metalearn
import libmetaact.training as training
from libmetaact.experiments._ExperimentConfig import ExperimentConfig
from libmetaact.experiments._parallel import ParallelMap, run_parallel
from libmetaact.experiments._RunInfo import RunInfo
from libmetaact.experiments._tasks import build_dataset, fit_spec
from libmetaact.metaglobal import ConfigError, write_json
from libmetaact.nets import MlpModel, MlpSpec, save_checkpoint
from libmetaact.splines import (
    activation_set_to_dict,
    init_spline,
    spline_binding,
    tanh_binding,
)
from libmetaact.tasks import dataset_to_csv

logger = logging.getLogger(__name__)

TRAIN_SUMMARY_COLUMNS = [
    "hidden",
    "seed",
    "best_step",
    "best_val_acc",
    "best_test_acc",
    "final_test_acc",
]

SWEEP_COLUMNS = ["alpha", "effective_lr", "val_acc", "test_acc"]


def package_version() -> str:
    try:
        return importlib.metadata.version("libmetaact")
    except importlib.metadata.PackageNotFoundError:
        return "unknown"


def write_metadata(
    out_dir: Union[str, pathlib.Path],
    command: str,
    seeds: Iterable[int],
    extra: Optional[dict] = None,
) -> pathlib.Path:
    """Write ``metadata.json``: the command, seeds, creation time and package
    versions

    Timestamps are kept here so that CSV outputs are identical across reruns.
    """
    data = {
        "command": command,
        "seeds": [int(s) for s in seeds],
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "versions": {
            "libmetaact": package_version(),
            "numpy": np.__version__,
            "pandas": pd.__version__,
        },
    }
    if extra:
        data.update(extra)
    return write_json(pathlib.Path(out_dir) / "metadata.json", data)


def metric_at(metrics: pd.DataFrame, step: int, column: str) -> float:
    """Value of a metrics column at a recorded step"""
    values = metrics.loc[metrics["step"] == step, column]
    return float(values.iloc[0]) if not values.empty else float("nan")


def save_train_run(
    run_dir: Union[str, pathlib.Path], result: training.TrainResult
) -> pathlib.Path:
    """Write the files of a training run

    ``metrics.csv``, ``checkpoint.json`` (final parameters),
    ``best_checkpoint.json``, ``trajectory.npz``, and ``spline.json`` for
    architectures with spline activations.
    """
    run_dir = pathlib.Path(run_dir)
    spec = result.spec
    training.write_metrics_csv(run_dir / "metrics.csv", result.metrics)
    save_checkpoint(run_dir / "checkpoint.json", MlpModel(spec, result.final))
    save_checkpoint(run_dir / "best_checkpoint.json", MlpModel(spec, result.best))
    training.save_trajectory(run_dir / "trajectory.npz", result.trajectory)
    if spec.activation.kind == "spline" or spec.iaf is not None:
        write_json(
            run_dir / "spline.json", activation_set_to_dict(spec.activation, spec.iaf)
        )
    return run_dir


def _hidden_name(hidden: tuple) -> str:
    return "h" + "x".join(str(w) for w in hidden) if hidden else "linear"


def run_dir_of(config: ExperimentConfig, hidden: tuple, seed: int) -> pathlib.Path:
    """Output directory of one training run"""
    out = pathlib.Path(config.output_dir)
    if config.hidden_sweep:
        out = out / _hidden_name(hidden)
    return out / f"seed_{seed}"


def _train_run(item: tuple) -> dict:
    config, hidden, seed = item
    dataset = build_dataset(config.task)
    spec = fit_spec(config.model, dataset, hidden=hidden)
    result = training.train(spec, dataset, config.train.replace(seed=seed))
    run_dir = run_dir_of(config, hidden, seed)
    write_json(
        run_dir / "config.json", config.replace(model=spec, seeds=(seed,)).to_dict()
    )
    save_train_run(run_dir, result)
    last = int(result.metrics["step"].iloc[-1])
    return {
        "hidden": _hidden_name(hidden),
        "seed": seed,
        "best_step": result.best_step,
        "best_val_acc": result.best_val_acc,
        "best_test_acc": metric_at(result.metrics, result.best_step, "test_acc"),
        "final_test_acc": metric_at(result.metrics, last, "test_acc"),
    }


def cmd_train(config: ExperimentConfig) -> pd.DataFrame:
    """Train networks for every seed (and hidden layout of the sweep)

    Each run writes ``config.json`` and the files of :func:`save_train_run`
    into :func:`run_dir_of`. The output directory also receives
    ``summary.csv`` (columns :data:`TRAIN_SUMMARY_COLUMNS`) and
    ``metadata.json``.

    Returns
    -------
    summary: pandas.DataFrame
        One row per run, in (hidden, seed) order.
    """
    hiddens = config.hidden_sweep or (config.model.hidden,)
    items = [(config, hidden, seed) for hidden in hiddens for seed in config.seeds]
    records = run_parallel(_train_run, items, config.n_workers)

    info = RunInfo("train")
    for (_, hidden, seed), record in zip(items, records):
        info.begin(
            f"{_hidden_name(hidden)} seed {seed}",
            {"task": config.task, "train": config.train.to_dict()},
        )
        info.finish({k: record[k] for k in TRAIN_SUMMARY_COLUMNS[2:]})
    info.close()

    summary = pd.DataFrame.from_records(records, columns=TRAIN_SUMMARY_COLUMNS)
    out = pathlib.Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary.to_csv(out / "summary.csv", index=False, float_format="%.17g")
    write_metadata(out, "train", config.seeds)
    return summary


def learnable_spec(spec: MlpSpec, meta: metalearn.MetaConfig) -> MlpSpec:
    """Give an architecture a shared spline hidden activation, if it has none
    and `meta` learns hidden activations

    The spline is initialized with ``meta.init`` (default "relu"), ``meta.n_c``
    control points (default 50) and ``meta.mode`` (default "linear").
    """
    if spec.activation.kind == "spline" or not meta.learn_hidden:
        return spec
    s = init_spline(
        meta.init or "relu",
        n_c=meta.n_c or 50,
        mode=meta.mode or "linear",
    )
    return spec.replace(activation=spline_binding([s], scope="shared"))


def cmd_meta(config: ExperimentConfig) -> metalearn.RestartResult:
    """Meta-learn activation functions with restarts

    Runs :func:`libmetaact.metalearn.restart_search` over ``config.restarts``
    (default: one restart per seed with the ``config.meta`` settings) and
    writes ``spline.json`` (the best activation set), ``meta_log.csv`` (the
    log of the best restart), ``restart_log.csv``, ``config.json`` and
    ``metadata.json`` into the output directory.
    """
    meta = config.meta
    if meta is None:
        raise ConfigError("Error in cmd_meta: the config has no meta settings")
    grid = config.restarts
    if grid is None:
        grid = metalearn.RestartGrid(
            seeds=config.seeds,
            outer_lrs=(meta.outer_lr,),
            n_cs=(meta.n_c,),
            ts=(meta.t,),
            inits=(meta.init,),
        )
    if not grid.within_bounds():
        logger.warning("restart grid leaves the recommended ranges")
    dataset = build_dataset(config.task)
    spec = fit_spec(learnable_spec(config.model, meta), dataset)
    result = metalearn.restart_search(
        dataset, spec, grid, base=meta, mapper=ParallelMap(config.n_workers)
    )

    info = RunInfo("meta")
    for row in result.log.to_dict(orient="records"):
        info.begin(f"restart {row['restart']}")
        info.finish({k: row[k] for k in ("seed", "outer_lr", "n_c", "t", "score")})
    info.close()

    out = pathlib.Path(config.output_dir)
    metalearn.save_meta_result(out / "spline.json", result.best)
    metalearn.write_meta_log(out / "meta_log.csv", result.best.log)
    metalearn.write_restart_log(out / "restart_log.csv", result.log)
    write_json(out / "config.json", config.to_dict())
    write_metadata(
        out,
        "meta",
        grid.seeds,
        {
            "best_restart": result.best_index,
            "mean_restart_score": metalearn.mean_restart_score(result),
        },
    )
    return result


def _sweep_run(item: tuple) -> dict:
    config, alpha, seed = item
    dataset = build_dataset(config.task)
    spec = fit_spec(config.model, dataset, activation=tanh_binding(alpha))
    effective_lr = config.train.lr / alpha
    logger.info("alpha %g: effective lr %g", alpha, effective_lr)
    result = training.train(
        spec, dataset, config.train.replace(lr=effective_lr, seed=seed)
    )
    return {
        "alpha": alpha,
        "effective_lr": effective_lr,
        "val_acc": result.best_val_acc,
        "test_acc": metric_at(result.metrics, result.best_step, "test_acc"),
    }


class PrefactorSweep:
    """Outcome of :func:`cmd_prefactor_sweep`"""

    def __init__(self, table: pd.DataFrame):
        self.table = table
        """pandas.DataFrame: Columns :data:`SWEEP_COLUMNS`, one row per alpha
        in increasing order, accuracies averaged over seeds"""

    @property
    def best_alpha(self) -> float:
        """float: The alpha with the best validation accuracy, the smallest
        on ties

        Raises
        ------
        libmetaact.metaglobal.ConfigError
            If no alpha has a finite validation accuracy.
        """
        finite = self.table.dropna(subset=["val_acc"])
        if finite.empty:
            raise ConfigError("Error in best_alpha: no finite validation accuracy")
        return float(finite.loc[finite["val_acc"].idxmax(), "alpha"])


def cmd_prefactor_sweep(
    config: ExperimentConfig, alphas: Optional[Iterable[float]] = None
) -> PrefactorSweep:
    """Tune the prefactor of ``tanh(alpha * x)`` hidden activations

    Each alpha trains with learning rate ``config.train.lr / alpha``, with one
    alpha shared by all hidden layers. Writes ``sweep.csv`` and
    ``metadata.json`` into the output directory.

    Parameters
    ----------
    config: ExperimentConfig
        Task, architecture, and training settings.
    alphas: Optional[Iterable[float]] = None
        Positive prefactors. Default is ``config.alphas``.
    """
    alphas = sorted(float(a) for a in (config.alphas if alphas is None else alphas))
    if len(alphas) == 0:
        raise ConfigError("Error in cmd_prefactor_sweep: no alpha values")
    if any(a <= 0.0 for a in alphas):
        raise ConfigError("Error in cmd_prefactor_sweep: alphas must be positive")
    items = [(config, alpha, seed) for alpha in alphas for seed in config.seeds]
    records = run_parallel(_sweep_run, items, config.n_workers)
    table = (
        pd.DataFrame.from_records(records, columns=SWEEP_COLUMNS)
        .groupby("alpha", as_index=False, sort=True)
        .mean()
    )
    sweep = PrefactorSweep(table[SWEEP_COLUMNS])

    out = pathlib.Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    sweep.table.to_csv(out / "sweep.csv", index=False, float_format="%.17g")
    try:
        best = sweep.best_alpha
    except ConfigError as e:
        logger.warning("prefactor sweep: %s", e)
        best = None
    else:
        logger.info("prefactor sweep: best alpha %g", best)
    write_metadata(out, "sweep", config.seeds, {"best_alpha": best})
    return sweep


def cmd_gen_data(task: dict, out_dir: Union[str, pathlib.Path]) -> pathlib.Path:
    """Write the dataset of a task dict as ``data.csv`` (the tabular CSV
    schema), with ``split.json`` and ``task.json``"""
    dataset = build_dataset(task)
    out = pathlib.Path(out_dir)
    path = dataset_to_csv(dataset, out / "data.csv")
    write_json(out / "split.json", dataset.split.to_dict())
    write_json(out / "task.json", task)
    logger.info("wrote %d rows to %s", dataset.n_rows, path)
    return path
