import dataclasses
import math
from typing import Optional

from libmetaact.metaglobal import ConfigError

OPTIMIZERS = ("gd", "rmsprop")
LOSSES = ("ce", "mse")

RMSPROP_DECAY = 0.99
RMSPROP_EPS = 1e-8

MAX_SNAPSHOTS = 5000
"""Runs longer than this record every ``ceil(max_steps / MAX_SNAPSHOTS)``-th
step"""


def snapshot_interval(max_steps: int) -> int:
    """Step interval between recorded snapshots and evaluations"""
    if max_steps <= MAX_SNAPSHOTS:
        return 1
    return math.ceil(max_steps / MAX_SNAPSHOTS)


@dataclasses.dataclass(frozen=True)
class TrainConfig:
    """Inner-loop training settings

    Attributes
    ----------
    optimizer: str = "gd"
        "gd" (plain gradient descent) or "rmsprop" (decay 0.99, eps 1e-8).
    lr: float = 0.1
        Learning rate, >= 0. With 0 the parameters never change.
    batch_size: int = 4096
        Minibatch size. Batches at least as large as the training split are
        full-batch steps, in a fixed row order.
    max_steps: int = 1000
        Number of optimizer steps, >= 1.
    swa_window: int = 50
        Stochastic weight averaging: evaluation uses the mean of the last
        `swa_window` parameter iterates. 0 disables averaging.
    seed: int = 0
        Weight initialization seed; minibatch shuffling uses a stream derived
        from it.
    loss: Optional[str] = None
        "ce" (softmax cross-entropy) or "mse". Default is "ce" for the logits
        head and "mse" for the regression head.
    """

    optimizer: str = "gd"
    lr: float = 0.1
    batch_size: int = 4096
    max_steps: int = 1000
    swa_window: int = 50
    seed: int = 0
    loss: Optional[str] = None

    def __post_init__(self):
        if self.optimizer not in OPTIMIZERS:
            raise ConfigError(
                f"Error in TrainConfig: invalid optimizer '{self.optimizer}', "
                f"expected one of {OPTIMIZERS}"
            )
        if not self.lr >= 0.0:
            raise ConfigError(f"Error in TrainConfig: lr must be >= 0, got {self.lr}")
        if self.max_steps < 1:
            raise ConfigError(
                f"Error in TrainConfig: max_steps must be >= 1, got {self.max_steps}"
            )
        if self.batch_size < 1:
            raise ConfigError("Error in TrainConfig: batch_size must be >= 1")
        if self.swa_window < 0:
            raise ConfigError("Error in TrainConfig: swa_window must be >= 0")
        if self.loss is not None and self.loss not in LOSSES:
            raise ConfigError(
                f"Error in TrainConfig: invalid loss '{self.loss}', "
                f"expected one of {LOSSES}"
            )

    def loss_kind(self, head: str) -> str:
        """The loss used with the output head `head`"""
        if self.loss is not None:
            return self.loss
        return "ce" if head == "logits" else "mse"

    def replace(self, **kwargs) -> "TrainConfig":
        return dataclasses.replace(self, **kwargs)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @staticmethod
    def from_dict(data: dict) -> "TrainConfig":
        fields = {f.name for f in dataclasses.fields(TrainConfig)}
        unknown = set(data) - fields
        if unknown:
            raise ConfigError(
                f"Error in TrainConfig.from_dict: unknown fields {sorted(unknown)}"
            )
        return TrainConfig(**data)
