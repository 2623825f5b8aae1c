import dataclasses
from typing import Optional

import numpy as np
import numpy.typing as npt

from libmetaact.metaglobal import ConfigError
from libmetaact.metalearn._MetaConfig import (
    EPISODE_TAGS,
    MAX_EPISODE_TRAIN,
    MAX_EPISODE_VAL,
    EpisodeSampler,
)
from libmetaact.tasks import Dataset


@dataclasses.dataclass(frozen=True)
class Episode:
    """One outer-loop trial: weight initialization and data subsets

    Attributes
    ----------
    weight_seed: int
        Seed of the episode's initial weights.
    train_rows: np.ndarray[np.int64]
        Rows of the inner-loop training subset.
    val_rows: np.ndarray[np.int64]
        Rows of the outer-loss validation subset, disjoint from `train_rows`.
    tag: str = "in-distribution"
        "in-distribution" or "ood".
    """

    weight_seed: int
    train_rows: np.ndarray
    val_rows: np.ndarray
    tag: str = "in-distribution"

    def __post_init__(self):
        object.__setattr__(self, "train_rows", np.asarray(self.train_rows, np.int64))
        object.__setattr__(self, "val_rows", np.asarray(self.val_rows, np.int64))
        if self.tag not in EPISODE_TAGS:
            raise ConfigError(f"Error in Episode: invalid tag '{self.tag}'")
        if np.intersect1d(self.train_rows, self.val_rows).size:
            raise ConfigError("Error in Episode: train and validation rows overlap")


def training_pool(dataset: Dataset) -> np.ndarray:
    """Rows available for meta-learning episodes

    The training split if the dataset has one (restricted to the pool "train"
    if present), else the pool "train", else all rows. Rows of the pool "ood"
    are excluded.
    """
    if dataset.split is not None:
        rows = dataset.split.train
        if "train" in dataset.pools:
            rows = np.intersect1d(rows, dataset.pools["train"])
    elif "train" in dataset.pools:
        rows = np.asarray(dataset.pools["train"], dtype=np.int64)
    else:
        rows = np.arange(dataset.n_rows)
    if "ood" in dataset.pools:
        rows = np.setdiff1d(rows, dataset.pools["ood"])
    return np.sort(rows)


def _default_size(requested: Optional[int], pool: int, share: float, cap: int) -> int:
    if requested is not None:
        return requested
    return max(1, min(cap, int(share * pool)))


def sample_episode(
    dataset: Dataset,
    sampler: EpisodeSampler,
    seed: int,
    pool: Optional[npt.ArrayLike] = None,
) -> Episode:
    """Draw the weight seed and data subsets of an episode

    Parameters
    ----------
    dataset: Dataset
        The data.
    sampler: EpisodeSampler
        Subset sizes and validation source.
    seed: int
        Seed of this outer step; different seeds give different episodes.
    pool: Optional[array_like] = None
        Training pool. Default is :func:`training_pool`.

    Returns
    -------
    episode: Episode
        Subsets drawn without replacement, sorted.
    """
    rng = np.random.default_rng(seed)
    pool = training_pool(dataset) if pool is None else np.asarray(pool, np.int64)
    n_train = _default_size(sampler.train_size, pool.size, 0.8, MAX_EPISODE_TRAIN)
    if sampler.tag == "ood":
        if "ood" not in dataset.pools:
            raise ConfigError("Error in sample_episode: dataset has no 'ood' pool")
        val_pool = np.asarray(dataset.pools["ood"], dtype=np.int64)
        n_val = _default_size(sampler.val_size, val_pool.size, 0.2, MAX_EPISODE_VAL)
        if n_train > pool.size or n_val > val_pool.size:
            raise ConfigError(
                f"Error in sample_episode: requested {n_train} + {n_val} rows from "
                f"pools of {pool.size} and {val_pool.size}"
            )
        train_rows = rng.choice(pool, size=n_train, replace=False)
        val_rows = rng.choice(val_pool, size=n_val, replace=False)
    else:
        n_val = _default_size(sampler.val_size, pool.size, 0.2, MAX_EPISODE_VAL)
        if n_train + n_val > pool.size:
            raise ConfigError(
                f"Error in sample_episode: requested {n_train} + {n_val} rows from "
                f"a pool of {pool.size}"
            )
        chosen = rng.choice(pool, size=n_train + n_val, replace=False)
        train_rows, val_rows = chosen[:n_train], chosen[n_train:]
    weight_seed = int(rng.integers(0, 2**31 - 1))
    return Episode(
        weight_seed=weight_seed,
        train_rows=np.sort(train_rows),
        val_rows=np.sort(val_rows),
        tag=sampler.tag,
    )
