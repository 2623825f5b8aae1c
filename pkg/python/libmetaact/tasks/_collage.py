"""Collages: rows combining one tile from each of two datasets"""
import numpy as np

from libmetaact.metaglobal import ConfigError, DatasetError
from libmetaact.tasks._Dataset import Dataset

COLLAGE_MODES = ("ambiguous-train", "testA", "testB")


def _rows_by_class(ds: Dataset) -> dict[int, np.ndarray]:
    return {int(c): np.flatnonzero(ds.y == c) for c in np.unique(ds.y)}


def make_collage(
    dsA: Dataset,
    dsB: Dataset,
    mode: str,
    seed: int = 0,
    n_rows: int = None,
) -> Dataset:
    """Combine tiles of two classification datasets

    Each row concatenates a row of `dsA` (tile A) and a row of `dsB` (tile B).

    - "ambiguous-train": tile A and tile B have the same class, which is the
      row label, so both tiles are predictive
    - "testA": the row label is tile A's class; tile B comes from a uniformly
      random class present in `dsB`
    - "testB": the row label is tile B's class; tile A comes from a uniformly
      random class present in `dsA`

    Parameters
    ----------
    dsA, dsB: Dataset
        Classification datasets with the same `class_count`.
    mode: str
        One of :data:`COLLAGE_MODES`.
    seed: int = 0
        Random seed.
    n_rows: int = None
        Number of rows. Default is the number of rows of the labeling source
        (`dsB` for "testB", else `dsA`).

    Returns
    -------
    dataset: Dataset
        ``row_info["tile_a_labels"]`` and ``row_info["tile_b_labels"]`` hold the
        source classes of the tiles.
    """
    if mode not in COLLAGE_MODES:
        raise ConfigError(
            f"Error in make_collage: invalid mode '{mode}', expected one of "
            f"{COLLAGE_MODES}"
        )
    if dsA.kind != "classification" or dsB.kind != "classification":
        raise ConfigError("Error in make_collage: sources must be classification")
    if dsA.class_count != dsB.class_count:
        raise ConfigError(
            f"Error in make_collage: class_count mismatch, {dsA.class_count} "
            f"vs {dsB.class_count}"
        )
    rng = np.random.default_rng(seed)
    lead, other = (dsB, dsA) if mode == "testB" else (dsA, dsB)
    n = lead.n_rows if n_rows is None else n_rows
    lead_rows = rng.choice(lead.n_rows, size=n, replace=n > lead.n_rows)
    labels = lead.y[lead_rows]

    by_class = _rows_by_class(other)
    present = np.array(sorted(by_class))
    if mode == "ambiguous-train":
        missing = set(np.unique(labels).tolist()) - set(present.tolist())
        if missing:
            raise DatasetError(
                f"Error in make_collage: classes {sorted(missing)} missing from dsB"
            )
        other_classes = labels
    else:
        other_classes = present[rng.integers(0, present.size, size=n)]
    other_rows = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(other_classes):
        pool = by_class[int(c)]
        other_rows[i] = pool[rng.integers(0, pool.size)]

    if mode == "testB":
        a_rows, b_rows = other_rows, lead_rows
    else:
        a_rows, b_rows = lead_rows, other_rows
    return Dataset(
        X=np.hstack([dsA.X[a_rows], dsB.X[b_rows]]),
        y=labels,
        kind="classification",
        class_count=dsA.class_count,
        metadata={
            "source": "collage",
            "mode": mode,
            "tiles": [dsA.input_dim, dsB.input_dim],
        },
        row_info={
            "tile_a_labels": dsA.y[a_rows],
            "tile_b_labels": dsB.y[b_rows],
        },
    )


def make_collage_meta_dataset(
    dsA: Dataset,
    dsB: Dataset,
    target: str = "A",
    seed: int = 0,
    n_train: int = None,
    n_ood: int = None,
) -> Dataset:
    """Ambiguous collage rows plus a pool of tile-specific rows

    The first rows are "ambiguous-train" collages; the following rows are
    "testA" (``target="A"``) or "testB" collages and form the pool "ood". Meta
    learning with out-of-distribution episodes draws validation rows from that
    pool, so the learned activation favours the target tile.

    The pool "train" holds the ambiguous rows.
    """
    if target not in ("A", "B"):
        raise ConfigError(
            f"Error in make_collage_meta_dataset: invalid target '{target}'"
        )
    train = make_collage(dsA, dsB, "ambiguous-train", seed=seed, n_rows=n_train)
    ood = make_collage(dsA, dsB, f"test{target}", seed=seed + 1, n_rows=n_ood)
    n1, n2 = train.n_rows, ood.n_rows
    return Dataset(
        X=np.vstack([train.X, ood.X]),
        y=np.concatenate([train.y, ood.y]),
        kind="classification",
        class_count=train.class_count,
        metadata={
            "source": "collage_meta",
            "target": target,
            "tiles": train.metadata["tiles"],
        },
        pools={"train": np.arange(n1), "ood": np.arange(n1, n1 + n2)},
        row_info={
            k: np.concatenate([train.row_info[k], ood.row_info[k]])
            for k in train.row_info
        },
    )
