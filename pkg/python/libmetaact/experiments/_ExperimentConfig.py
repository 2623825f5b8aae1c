import dataclasses
import pathlib
from typing import Optional, Union

from libmetaact.metaglobal import ConfigError, read_json
from libmetaact.metalearn import MetaConfig, RestartGrid
from libmetaact.nets import MlpSpec
from libmetaact.training import TrainConfig

TASK_TYPES = (
    "algorithmic",
    "multitask_algorithmic",
    "staircase",
    "tabular_csv",
    "idx_images",
    "collage",
    "abs_regression",
    "blobs",
)
"""Values of the "type" key of task dicts"""


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce an experiment

    Attributes
    ----------
    task: dict
        A tagged task dict, ``{"type": <one of TASK_TYPES>, ...}``, see
        :func:`~libmetaact.experiments.build_dataset`.
    model: MlpSpec
        The architecture. Its `input_dim` and `output_dim` are replaced by the
        dataset's when the task is built.
    train: TrainConfig = TrainConfig()
        Settings of plain training runs; the run seed replaces ``train.seed``.
    meta: Optional[MetaConfig] = None
        Settings of meta-learning runs.
    restarts: Optional[RestartGrid] = None
        Restart grid of meta-learning runs. Default is one restart per seed.
    output_dir: str = "results"
        Run outputs are written below this directory.
    seeds: tuple[int, ...] = (0,)
        Weight initialization seeds. At least one.
    n_workers: int = 1
        Worker processes for independent runs; 1 runs serially.
    hidden_sweep: tuple[tuple[int, ...], ...] = ()
        Hidden-layer widths to sweep in training runs. Default trains
        ``model.hidden`` only.
    alphas: tuple[float, ...] = ()
        ``tanh(alpha * x)`` prefactors for prefactor sweeps.
    transfer_tasks: tuple[dict, ...] = ()
        Task dicts forming the rows of a transfer matrix.
    activations: dict[str, str] = {}
        Named activation-set JSON files forming the columns of a transfer
        matrix, besides ReLU.
    """

    task: dict
    model: MlpSpec
    train: TrainConfig = dataclasses.field(default_factory=TrainConfig)
    meta: Optional[MetaConfig] = None
    restarts: Optional[RestartGrid] = None
    output_dir: str = "results"
    seeds: tuple = (0,)
    n_workers: int = 1
    hidden_sweep: tuple = ()
    alphas: tuple = ()
    transfer_tasks: tuple = ()
    activations: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(
            self, "hidden_sweep", tuple(tuple(h) for h in self.hidden_sweep)
        )
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "transfer_tasks", tuple(self.transfer_tasks))
        if len(self.seeds) == 0:
            raise ConfigError("Error in ExperimentConfig: seeds must be non-empty")
        if self.n_workers < 1:
            raise ConfigError("Error in ExperimentConfig: n_workers must be >= 1")
        for task in (self.task,) + self.transfer_tasks:
            check_task(task)
        if any(a <= 0.0 for a in self.alphas):
            raise ConfigError("Error in ExperimentConfig: alphas must be positive")

    def replace(self, **kwargs) -> "ExperimentConfig":
        return dataclasses.replace(self, **kwargs)

    def with_overrides(
        self,
        seed: Optional[int] = None,
        out: Optional[str] = None,
        workers: Optional[int] = None,
    ) -> "ExperimentConfig":
        """Apply command line overrides: a single seed, the output directory,
        and the number of workers"""
        config = self
        if seed is not None:
            config = config.replace(seeds=(seed,))
        if out is not None:
            config = config.replace(output_dir=str(out))
        if workers is not None:
            config = config.replace(n_workers=workers)
        return config

    def to_dict(self) -> dict:
        """Represent the ExperimentConfig as a Python dict"""
        return {
            "task": self.task,
            "model": self.model.to_dict(),
            "train": self.train.to_dict(),
            "meta": None if self.meta is None else self.meta.to_dict(),
            "restarts": None if self.restarts is None else self.restarts.to_dict(),
            "output_dir": self.output_dir,
            "seeds": list(self.seeds),
            "n_workers": self.n_workers,
            "hidden_sweep": [list(h) for h in self.hidden_sweep],
            "alphas": list(self.alphas),
            "transfer_tasks": list(self.transfer_tasks),
            "activations": dict(self.activations),
        }

    @staticmethod
    def from_dict(data: dict) -> "ExperimentConfig":
        """Construct an ExperimentConfig from a Python dict"""
        fields = {f.name for f in dataclasses.fields(ExperimentConfig)}
        unknown = set(data) - fields
        if unknown:
            raise ConfigError(
                f"Error in ExperimentConfig.from_dict: unknown fields {sorted(unknown)}"
            )
        for required in ("task", "model"):
            if required not in data:
                raise ConfigError(
                    f"Error in ExperimentConfig.from_dict: missing '{required}'"
                )
        meta = data.get("meta")
        restarts = data.get("restarts")
        return ExperimentConfig(
            task=data["task"],
            model=MlpSpec.from_dict(data["model"]),
            train=TrainConfig.from_dict(data.get("train", {})),
            meta=None if meta is None else MetaConfig.from_dict(meta),
            restarts=None if restarts is None else RestartGrid.from_dict(restarts),
            output_dir=data.get("output_dir", "results"),
            seeds=tuple(data.get("seeds", [0])),
            n_workers=data.get("n_workers", 1),
            hidden_sweep=tuple(tuple(h) for h in data.get("hidden_sweep", [])),
            alphas=tuple(data.get("alphas", [])),
            transfer_tasks=tuple(data.get("transfer_tasks", [])),
            activations=dict(data.get("activations", {})),
        )


def check_task(task: dict) -> None:
    """Raise ConfigError unless `task` is a tagged task dict"""
    if not isinstance(task, dict) or task.get("type") not in TASK_TYPES:
        raise ConfigError(
            f"Error in ExperimentConfig: task type must be one of {TASK_TYPES}, "
            f"got {task.get('type') if isinstance(task, dict) else task!r}"
        )


def read_experiment_config(path: Union[str, pathlib.Path]) -> ExperimentConfig:
    """Read an ExperimentConfig JSON file"""
    return ExperimentConfig.from_dict(read_json(path))
