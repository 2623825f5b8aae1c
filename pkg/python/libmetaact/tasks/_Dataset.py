import dataclasses
from typing import Optional

import numpy as np
import numpy.typing as npt

from libmetaact.metaglobal import ConfigError, DatasetError

DATASET_KINDS = ("classification", "regression")


@dataclasses.dataclass(frozen=True)
class SplitSpec:
    """Train / validation / test row indices

    Attributes
    ----------
    train: np.ndarray[np.int64]
        Training rows.
    val: np.ndarray[np.int64]
        Validation rows (may be empty).
    test: np.ndarray[np.int64]
        Test rows.
    fraction: float
        The fraction of rows assigned to train + validation.
    seed: int
        The shuffling seed.
    """

    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        for name in ("train", "val", "test"):
            object.__setattr__(
                self, name, np.asarray(getattr(self, name), dtype=np.int64)
            )
        parts = [self.train, self.val, self.test]
        total = sum(p.size for p in parts)
        if np.unique(np.concatenate(parts)).size != total:
            raise ConfigError("Error in SplitSpec: index sets must be disjoint")

    def to_dict(self) -> dict:
        return {
            "train": self.train.tolist(),
            "val": self.val.tolist(),
            "test": self.test.tolist(),
            "fraction": self.fraction,
            "seed": self.seed,
        }

    @staticmethod
    def from_dict(data: dict) -> "SplitSpec":
        return SplitSpec(
            train=data["train"],
            val=data.get("val", []),
            test=data["test"],
            fraction=data.get("fraction", 0.8),
            seed=data.get("seed", 0),
        )


@dataclasses.dataclass(frozen=True)
class Dataset:
    """Feature matrix, targets, and provenance

    Attributes
    ----------
    X: np.ndarray[np.float64[n_rows, n_dims]]
        Features.
    y: np.ndarray
        Targets: class indices (int64) for classification, values (float64)
        for regression.
    kind: str
        "classification" or "regression".
    class_count: int = 0
        Number of classes. For regression datasets built from classes (targets
        spread over [-1, 1], see :func:`regression_targets`), the number of
        class anchors; 0 for plain regression.
    labels: Optional[np.ndarray] = None
        Class index per row, for regression datasets built from classes.
    metadata: dict = {}
        Provenance (source, normalization applied, ...). JSON-serializable.
    pools: dict[str, np.ndarray] = {}
        Named row-index pools, e.g. "ood" for out-of-distribution validation
        rows.
    row_info: dict[str, np.ndarray] = {}
        Extra per-row columns, e.g. the source labels of collage tiles.
    split: Optional[SplitSpec] = None
        Train / validation / test split, if assigned.
    """

    X: np.ndarray
    y: np.ndarray
    kind: str = "classification"
    class_count: int = 0
    labels: Optional[np.ndarray] = None
    metadata: dict = dataclasses.field(default_factory=dict)
    pools: dict = dataclasses.field(default_factory=dict)
    row_info: dict = dataclasses.field(default_factory=dict)
    split: Optional[SplitSpec] = None

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        if X.ndim != 2:
            raise DatasetError("Error in Dataset: X must be 2d")
        object.__setattr__(self, "X", X)
        if self.kind not in DATASET_KINDS:
            raise ConfigError(f"Error in Dataset: invalid kind '{self.kind}'")
        if self.kind == "classification":
            y = np.asarray(self.y, dtype=np.int64)
            if y.size and (y.min() < 0 or y.max() >= self.class_count):
                raise DatasetError(
                    "Error in Dataset: class indices must be in "
                    f"[0, {self.class_count})"
                )
        else:
            y = np.asarray(self.y, dtype=np.float64)
        if y.shape != (X.shape[0],):
            raise DatasetError(
                f"Error in Dataset: {X.shape[0]} rows but targets of shape {y.shape}"
            )
        object.__setattr__(self, "y", y)
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != y.shape:
                raise DatasetError("Error in Dataset: labels and targets differ")
            object.__setattr__(self, "labels", labels)

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def input_dim(self) -> int:
        return self.X.shape[1]

    def class_labels(self) -> Optional[np.ndarray]:
        """Class index per row, or None for plain regression"""
        if self.kind == "classification":
            return self.y
        return self.labels

    def class_values(self) -> Optional[np.ndarray]:
        """Regression anchor value of each class, or None

        Anchors are spread regularly over [-1, 1], see
        :func:`regression_targets`.
        """
        if self.kind != "regression" or self.class_count < 2:
            return None
        k = self.class_count
        return -1.0 + 2.0 * np.arange(k) / (k - 1)

    def subset(self, rows: npt.ArrayLike) -> "Dataset":
        """The rows `rows`, in order, without pools or split"""
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(
            X=self.X[rows],
            y=self.y[rows],
            kind=self.kind,
            class_count=self.class_count,
            labels=None if self.labels is None else self.labels[rows],
            metadata=dict(self.metadata),
            row_info={k: v[rows] for k, v in self.row_info.items()},
        )

    def with_split(self, split: SplitSpec) -> "Dataset":
        n = self.n_rows
        for part in (split.train, split.val, split.test):
            if part.size and (part.min() < 0 or part.max() >= n):
                raise ConfigError("Error in Dataset.with_split: index out of range")
        return dataclasses.replace(self, split=split)

    def replace(self, **kwargs) -> "Dataset":
        return dataclasses.replace(self, **kwargs)

    def part(self, name: str) -> "Dataset":
        """The "train", "val", or "test" rows of the split"""
        if self.split is None:
            raise ConfigError("Error in Dataset.part: dataset has no split")
        return self.subset(getattr(self.split, name))
