from typing import Optional

import numpy as np
import numpy.typing as npt

from libmetaact.metaglobal import ConfigError
from libmetaact.tasks._Dataset import Dataset, SplitSpec


def regression_targets(classes: npt.ArrayLike, class_count: int) -> np.ndarray:
    """Map class indices to values spread regularly over [-1, 1]

    Class ``i`` maps to ``-1 + 2 * i / (class_count - 1)``.
    """
    if class_count < 2:
        raise ConfigError(
            f"Error in regression_targets: class_count must be >= 2, got {class_count}"
        )
    classes = np.asarray(classes, dtype=np.float64)
    return -1.0 + 2.0 * classes / (class_count - 1)


def to_regression(dataset: Dataset) -> Dataset:
    """Turn a classification dataset into a regression on class anchors"""
    if dataset.kind != "classification":
        raise ConfigError("Error in to_regression: dataset is not classification")
    metadata = dict(dataset.metadata)
    metadata["targets"] = "class anchors in [-1, 1]"
    return dataset.replace(
        y=regression_targets(dataset.y, dataset.class_count),
        kind="regression",
        labels=dataset.y,
        metadata=metadata,
    )


def split(
    dataset: Dataset,
    fraction: float = 0.8,
    seed: int = 0,
    validation: bool = False,
    rows: Optional[npt.ArrayLike] = None,
) -> SplitSpec:
    """Randomly split rows into train / (validation) / test

    Parameters
    ----------
    dataset: Dataset
        The dataset.
    fraction: float = 0.8
        Fraction of rows for training (including validation), in (0, 1).
    seed: int = 0
        Shuffling seed.
    validation: bool = False
        If True, hold out validation rows from the training part, as many as
        there are test rows.
    rows: Optional[array_like] = None
        Restrict the split to these rows. Default is all rows.

    Returns
    -------
    split: SplitSpec
        Disjoint index sets covering `rows`.
    """
    if not 0.0 < fraction < 1.0:
        raise ConfigError(f"Error in split: fraction must be in (0, 1), got {fraction}")
    rows = np.arange(dataset.n_rows) if rows is None else np.asarray(rows, np.int64)
    perm = rows[np.random.default_rng(seed).permutation(rows.size)]
    n_train = int(round(fraction * rows.size))
    n_test = rows.size - n_train
    train, test = perm[:n_train], perm[n_train:]
    val = np.zeros(0, dtype=np.int64)
    if validation:
        if n_test >= n_train:
            raise ConfigError("Error in split: too few training rows for validation")
        train, val = train[: n_train - n_test], train[n_train - n_test :]
    return SplitSpec(
        train=np.sort(train),
        val=np.sort(val),
        test=np.sort(test),
        fraction=fraction,
        seed=seed,
    )
