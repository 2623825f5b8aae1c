import dataclasses
import logging
from typing import Iterable

import numpy as np
from sklearn.neighbors import KNeighborsClassifier

from libmetaact.metaglobal import ConfigError
from libmetaact.tasks import Dataset

logger = logging.getLogger(__name__)

KNN_METRICS = {"l2": 2, "l1": 1}
"""k-NN distance names and their Minkowski ``p``, in tie-breaking order"""


@dataclasses.dataclass
class KnnResult:
    """Best k-nearest-neighbors classifier of a grid search

    Attributes
    ----------
    k: int
        Number of neighbors.
    metric: str
        "l2" or "l1".
    val_acc: float
        Selection accuracy (validation rows, or training rows without them).
    test_acc: float
        Test accuracy, NaN without test rows.
    train_acc: float
        Accuracy on the training rows themselves.
    """

    k: int
    metric: str
    val_acc: float
    test_acc: float
    train_acc: float


def _accuracy(model, X: np.ndarray, labels: np.ndarray) -> float:
    if labels.size == 0:
        return float("nan")
    return float(np.mean(model.predict(X) == labels))


def knn_baseline(
    dataset: Dataset,
    ks: Iterable[int] = range(1, 33),
    metrics: Iterable[str] = ("l2", "l1"),
) -> KnnResult:
    """Grid search a k-nearest-neighbors classifier

    Every ``(k, metric)`` pair is fitted on the training rows and scored on the
    validation rows (training rows if there are none). Ties go to the smaller
    k, then to "l2". Values of k above the number of training rows are
    skipped.

    Parameters
    ----------
    dataset: Dataset
        Data with a split and class labels (classification, or regression on
        class anchors).
    ks: Iterable[int] = range(1, 33)
        Neighbor counts.
    metrics: Iterable[str] = ("l2", "l1")
        Distances, keys of :data:`KNN_METRICS`.
    """
    if dataset.split is None or dataset.split.train.size == 0:
        raise ConfigError("Error in knn_baseline: need a non-empty train split")
    labels = dataset.class_labels()
    if labels is None:
        raise ConfigError("Error in knn_baseline: dataset has no class labels")
    metrics = list(metrics)
    for m in metrics:
        if m not in KNN_METRICS:
            raise ConfigError(f"Error in knn_baseline: invalid metric '{m}'")
    metrics = sorted(metrics, key=list(KNN_METRICS).index)
    s = dataset.split
    select = s.val if s.val.size else s.train
    X_tr, y_tr = dataset.X[s.train], labels[s.train]

    best = None
    for k in sorted(set(int(k) for k in ks)):
        if k < 1 or k > s.train.size:
            continue
        for m in metrics:
            model = KNeighborsClassifier(n_neighbors=k, p=KNN_METRICS[m])
            model.fit(X_tr, y_tr)
            acc = _accuracy(model, dataset.X[select], labels[select])
            logger.debug("k-NN k=%d %s: %.4f", k, m, acc)
            if best is None or acc > best[0]:
                best = (acc, k, m, model)
    if best is None:
        raise ConfigError("Error in knn_baseline: no valid k")
    acc, k, m, model = best
    result = KnnResult(
        k=k,
        metric=m,
        val_acc=acc,
        test_acc=_accuracy(model, dataset.X[s.test], labels[s.test]),
        train_acc=_accuracy(model, X_tr, y_tr),
    )
    logger.info("k-NN baseline: k=%d %s, test accuracy %.4f", k, m, result.test_acc)
    return result
