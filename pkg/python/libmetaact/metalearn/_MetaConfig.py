import dataclasses
import itertools
from typing import Optional

from libmetaact.metaglobal import ConfigError
from libmetaact.splines import INIT_KINDS, MODES
from libmetaact.training import TrainConfig

OBJECTIVES = ("validation", "train", "test-cheat")
EPISODE_TAGS = ("in-distribution", "ood")

MAX_EPISODE_TRAIN = 4096
MAX_EPISODE_VAL = 1024

RESTART_BOUNDS = {
    "outer_lr": (0.01, 0.2),
    "n_c": (50, 400),
    "t": (1, 50),
}
"""Recommended ranges of the restart grid hyperparameters"""


@dataclasses.dataclass(frozen=True)
class EpisodeSampler:
    """Episode sizes and validation source

    Attributes
    ----------
    train_size: Optional[int] = None
        Rows in the episode training subset. Default is 80% of the training
        pool, at most 4096.
    val_size: Optional[int] = None
        Rows in the episode validation subset. Default is 20% of the pool it
        is drawn from, at most 1024.
    tag: str = "in-distribution"
        "in-distribution": the validation subset comes from the training pool.
        "ood": it comes from the dataset pool "ood".
    """

    train_size: Optional[int] = None
    val_size: Optional[int] = None
    tag: str = "in-distribution"

    def __post_init__(self):
        if self.tag not in EPISODE_TAGS:
            raise ConfigError(
                f"Error in EpisodeSampler: invalid tag '{self.tag}', "
                f"expected one of {EPISODE_TAGS}"
            )
        for name in ("train_size", "val_size"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError(f"Error in EpisodeSampler: {name} must be >= 1")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @staticmethod
    def from_dict(data: dict) -> "EpisodeSampler":
        return EpisodeSampler(**data)


@dataclasses.dataclass(frozen=True)
class MetaConfig:
    """Settings of the bi-level optimization of activation functions

    Attributes
    ----------
    n_tr_max: int = 100
        Maximum number of outer iterations. Outer iteration ``k`` trains for
        ``min(k, inner_ceiling)`` inner steps.
    outer_lr: float = 0.05
        Step size of the activation parameter updates, >= 0.
    t: int = 5
        Truncation window: number of final inner steps differentiated through.
    inner_lr: float = 0.1
        Plain gradient descent learning rate of the inner loop.
    inner_ceiling: int = 500
        Maximum number of inner steps.
    init: Optional[str] = None
        Re-initialize hidden-layer splines as "zeros", "relu", or "identity".
        Default keeps the splines of the architecture.
    n_c: Optional[int] = None
        Control points of re-initialized hidden-layer splines.
    mode: Optional[str] = None
        Interpolation mode of the hidden-layer splines.
    objective: str = "validation"
        Outer loss data: "validation" (episode validation subset), "train"
        (episode training subset), or "test-cheat" (test split; ablation only).
    allow_test_cheat: bool = False
        Must be True to use ``objective="test-cheat"``.
    sampler: EpisodeSampler = EpisodeSampler()
        Episode sizes and validation source.
    learn_hidden: bool = True
        Update hidden-layer splines.
    learn_iaf: bool = True
        Update input activation functions.
    patience: int = 10
        Stop after this many consecutive scored outer iterations without a
        better retraining score. 0 disables early stopping.
    eval_every: int = 1
        Score the activation by retraining every `eval_every` outer iterations.
    retrain: TrainConfig = TrainConfig(max_steps=200)
        Training used to score activations from scratch.
    seed: int = 0
        Episode seed stream.
    """

    n_tr_max: int = 100
    outer_lr: float = 0.05
    t: int = 5
    inner_lr: float = 0.1
    inner_ceiling: int = 500
    init: Optional[str] = None
    n_c: Optional[int] = None
    mode: Optional[str] = None
    objective: str = "validation"
    allow_test_cheat: bool = False
    sampler: EpisodeSampler = dataclasses.field(default_factory=EpisodeSampler)
    learn_hidden: bool = True
    learn_iaf: bool = True
    patience: int = 10
    eval_every: int = 1
    retrain: TrainConfig = dataclasses.field(
        default_factory=lambda: TrainConfig(max_steps=200)
    )
    seed: int = 0

    def __post_init__(self):
        if self.n_tr_max < 1:
            raise ConfigError("Error in MetaConfig: n_tr_max must be >= 1")
        if self.t < 1:
            raise ConfigError(f"Error in MetaConfig: t must be >= 1, got {self.t}")
        if not self.outer_lr >= 0.0:
            raise ConfigError("Error in MetaConfig: outer_lr must be >= 0")
        if not self.inner_lr >= 0.0:
            raise ConfigError("Error in MetaConfig: inner_lr must be >= 0")
        if self.inner_ceiling < 1 or self.eval_every < 1 or self.patience < 0:
            raise ConfigError(
                "Error in MetaConfig: inner_ceiling and eval_every must be >= 1, "
                "patience >= 0"
            )
        if self.init is not None and self.init not in INIT_KINDS:
            raise ConfigError(f"Error in MetaConfig: invalid init '{self.init}'")
        if self.mode is not None and self.mode not in MODES:
            raise ConfigError(f"Error in MetaConfig: invalid mode '{self.mode}'")
        if self.n_c is not None and self.n_c < 2:
            raise ConfigError("Error in MetaConfig: n_c must be >= 2")
        if self.objective not in OBJECTIVES:
            raise ConfigError(
                f"Error in MetaConfig: invalid objective '{self.objective}', "
                f"expected one of {OBJECTIVES}"
            )

    def replace(self, **kwargs) -> "MetaConfig":
        return dataclasses.replace(self, **kwargs)

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["sampler"] = self.sampler.to_dict()
        data["retrain"] = self.retrain.to_dict()
        return data

    @staticmethod
    def from_dict(data: dict) -> "MetaConfig":
        data = dict(data)
        if "sampler" in data:
            data["sampler"] = EpisodeSampler.from_dict(data["sampler"])
        if "retrain" in data:
            data["retrain"] = TrainConfig.from_dict(data["retrain"])
        fields = {f.name for f in dataclasses.fields(MetaConfig)}
        unknown = set(data) - fields
        if unknown:
            raise ConfigError(
                f"Error in MetaConfig.from_dict: unknown fields {sorted(unknown)}"
            )
        return MetaConfig(**data)


@dataclasses.dataclass(frozen=True)
class RestartGrid:
    """Hyperparameters of restarted meta-learning runs

    The grid is the product of all value lists, iterated with `seeds` varying
    slowest and `inits` fastest. A None in `n_cs` or `inits` keeps the
    splines of the architecture, as in :class:`MetaConfig`.
    """

    seeds: tuple = (0,)
    outer_lrs: tuple = (0.05,)
    n_cs: tuple = (50,)
    ts: tuple = (5,)
    inits: tuple = ("zeros",)

    def __post_init__(self):
        for name in ("seeds", "outer_lrs", "n_cs", "ts", "inits"):
            values = tuple(getattr(self, name))
            if len(values) == 0:
                raise ConfigError(f"Error in RestartGrid: {name} is empty")
            object.__setattr__(self, name, values)
        for init in self.inits:
            if init is not None and init not in INIT_KINDS:
                raise ConfigError(f"Error in RestartGrid: invalid init '{init}'")

    def __len__(self) -> int:
        return (
            len(self.seeds)
            * len(self.outer_lrs)
            * len(self.n_cs)
            * len(self.ts)
            * len(self.inits)
        )

    def points(self, base: MetaConfig) -> list[MetaConfig]:
        """The meta-learning configuration of every grid point, in grid order"""
        return [
            base.replace(seed=seed, outer_lr=lr, n_c=n_c, t=t, init=init)
            for seed, lr, n_c, t, init in itertools.product(
                self.seeds, self.outer_lrs, self.n_cs, self.ts, self.inits
            )
        ]

    def within_bounds(self) -> bool:
        """True if all values are inside :data:`RESTART_BOUNDS`"""
        checks = [
            (self.outer_lrs, RESTART_BOUNDS["outer_lr"]),
            (self.n_cs, RESTART_BOUNDS["n_c"]),
            (self.ts, RESTART_BOUNDS["t"]),
        ]
        return all(
            lo <= x <= hi
            for values, (lo, hi) in checks
            for x in values
            if x is not None
        )

    def to_dict(self) -> dict:
        return {k: list(v) for k, v in dataclasses.asdict(self).items()}

    @staticmethod
    def from_dict(data: dict) -> "RestartGrid":
        return RestartGrid(**{k: tuple(v) for k, v in data.items()})
