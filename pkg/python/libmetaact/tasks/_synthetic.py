"""Synthetic datasets"""
import numpy as np
from sklearn.datasets import make_blobs

from libmetaact.metaglobal import ConfigError
from libmetaact.tasks._Dataset import Dataset


def make_staircase(
    n_rows: int = 2000,
    dims: int = 2,
    n_thresholds: int = 3,
    seed: int = 0,
) -> Dataset:
    """Binary classification with labels flipping at axis-aligned thresholds

    Features are uniform in [-1, 1]. Each dimension has `n_thresholds` random
    thresholds; the label is the parity of the number of thresholds a row
    exceeds, summed over dimensions. Decision boundaries are therefore
    axis-aligned steps.
    """
    if dims < 1 or n_thresholds < 1:
        raise ConfigError("Error in make_staircase: dims and n_thresholds must be >= 1")
    rng = np.random.default_rng(seed)
    thresholds = np.sort(rng.uniform(-0.9, 0.9, size=(dims, n_thresholds)), axis=1)
    X = rng.uniform(-1.0, 1.0, size=(n_rows, dims))
    passed = (X[:, :, None] > thresholds[None, :, :]).sum(axis=(1, 2))
    return Dataset(
        X=X,
        y=passed % 2,
        kind="classification",
        class_count=2,
        metadata={
            "source": "staircase",
            "thresholds": thresholds.tolist(),
            "seed": seed,
        },
    )


def make_two_blobs(
    n_per_class: int = 100,
    dims: int = 2,
    margin: float = 2.0,
    std: float = 0.5,
    seed: int = 0,
) -> Dataset:
    """Two Gaussian blobs separated along the first axis by at least `margin`

    Centers are at ``-(margin / 2 + 1)`` and ``+(margin / 2 + 1)`` on the first
    axis; first coordinates are clamped so that no point falls inside the margin.
    """
    c = margin / 2.0 + 1.0
    centers = np.zeros((2, dims))
    centers[0, 0] = -c
    centers[1, 0] = c
    X, y = make_blobs(
        n_samples=[n_per_class, n_per_class],
        n_features=dims,
        centers=centers,
        cluster_std=std,
        shuffle=True,
        random_state=seed,
    )
    X[y == 0, 0] = np.minimum(X[y == 0, 0], -margin / 2.0)
    X[y == 1, 0] = np.maximum(X[y == 1, 0], margin / 2.0)
    return Dataset(
        X=X,
        y=y,
        kind="classification",
        class_count=2,
        metadata={"source": "blobs", "margin": margin, "seed": seed},
    )


def make_abs_regression(
    n_rows: int = 400,
    low: float = -2.0,
    high: float = 2.0,
    seed: int = 0,
) -> Dataset:
    """1d regression of ``y = |x|`` with ``x`` uniform in [low, high]"""
    rng = np.random.default_rng(seed)
    X = rng.uniform(low, high, size=(n_rows, 1))
    return Dataset(
        X=X,
        y=np.abs(X[:, 0]),
        kind="regression",
        metadata={"source": "abs_regression", "seed": seed},
    )
