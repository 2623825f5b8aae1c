"""Tabular CSV datasets"""
import dataclasses
import pathlib
from typing import Optional, Union

import numpy as np
import numpy.typing as npt
import pandas as pd
from sklearn.preprocessing import MinMaxScaler

from libmetaact.metaglobal import ConfigError, DatasetError
from libmetaact.tasks._Dataset import Dataset
from libmetaact.tasks._methods import split


class RangeNormalizer:
    """Affine map of each column onto [-1, 1]

    Fitted column minima map to -1 and maxima to +1. Columns that are constant
    on the fitting rows map to 0.
    """

    def __init__(self):
        self._scaler = MinMaxScaler(feature_range=(-1.0, 1.0))
        self.constant: Optional[np.ndarray] = None

    def fit(self, X: npt.ArrayLike) -> "RangeNormalizer":
        X = np.asarray(X, dtype=np.float64)
        self._scaler.fit(X)
        self.constant = self._scaler.data_range_ == 0.0
        return self

    @property
    def data_min(self) -> np.ndarray:
        return self._scaler.data_min_

    @property
    def data_max(self) -> np.ndarray:
        return self._scaler.data_max_

    def transform(self, X: npt.ArrayLike) -> np.ndarray:
        out = self._scaler.transform(np.asarray(X, dtype=np.float64))
        out[:, self.constant] = 0.0
        return out

    def inverse_transform(self, Z: npt.ArrayLike) -> np.ndarray:
        out = self._scaler.inverse_transform(np.asarray(Z, dtype=np.float64))
        out[:, self.constant] = self.data_min[self.constant]
        return out

    def to_dict(self) -> dict:
        return {"min": self.data_min.tolist(), "max": self.data_max.tolist()}


def _numeric_frame(df: pd.DataFrame) -> pd.DataFrame:
    out = df.apply(pd.to_numeric, errors="coerce")
    bad = out.isna()
    if bad.values.any():
        row, col = np.argwhere(bad.values)[0]
        raise DatasetError(
            f"Error in load_tabular_csv: non-numeric or missing cell "
            f"'{df.iat[row, col]}'",
            row=int(row),
            column=str(df.columns[col]),
        )
    return out


def load_tabular_csv(
    path: Union[str, pathlib.Path],
    label_column: Optional[str] = None,
    kind: str = "classification",
    fraction: float = 0.8,
    seed: int = 0,
    validation: bool = True,
    normalize: bool = True,
) -> Dataset:
    """Load a CSV table as a dataset with a train / validation / test split

    Feature columns are mapped onto [-1, 1] with a :class:`RangeNormalizer`
    fitted on the training rows only and applied to every row.

    Parameters
    ----------
    path: Union[str, pathlib.Path]
        CSV file with a header row and numeric cells.
    label_column: Optional[str] = None
        Name of the target column. Default is the last column.
    kind: str = "classification"
        "classification": distinct label values become class indices in sorted
        order. "regression": labels are used as values.
    fraction: float = 0.8
        Fraction of rows used for train + validation.
    seed: int = 0
        Split seed.
    validation: bool = True
        Hold out validation rows of the same size as the test split.
    normalize: bool = True
        Apply the [-1, 1] normalization.

    Returns
    -------
    dataset: Dataset
        The dataset with `split` set. ``metadata["normalization"]`` holds the
        fitted column ranges.
    """
    path = pathlib.Path(path)
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError) as e:
        raise DatasetError(f"Error in load_tabular_csv: cannot read {path}: {e}")
    if df.shape[1] < 2:
        raise DatasetError(
            "Error in load_tabular_csv: need a feature and a label column"
        )
    if label_column is None:
        label_column = str(df.columns[-1])
    if label_column not in df.columns:
        raise DatasetError(
            f"Error in load_tabular_csv: missing label column '{label_column}'",
            column=label_column,
        )
    features = _numeric_frame(df.drop(columns=[label_column]))
    X = features.to_numpy(dtype=np.float64)
    metadata = {
        "source": "tabular_csv",
        "path": str(path),
        "label_column": label_column,
        "feature_columns": [str(c) for c in features.columns],
    }
    if kind == "classification":
        raw = df[label_column]
        numeric = pd.to_numeric(raw, errors="coerce")
        # numeric labels are ordered by value, others as strings
        column = numeric if not numeric.isna().any() else raw
        values, y = np.unique(column.to_numpy(), return_inverse=True)
        class_count = len(values)
        first = np.unique(y, return_index=True)[1]
        metadata["classes"] = [str(v) for v in raw.iloc[first]]
    elif kind == "regression":
        y = _numeric_frame(df[[label_column]]).to_numpy()[:, 0]
        class_count = 0
    else:
        raise ConfigError(f"Error in load_tabular_csv: invalid kind '{kind}'")

    dataset = Dataset(X=X, y=y, kind=kind, class_count=class_count, metadata=metadata)
    s = split(dataset, fraction=fraction, seed=seed, validation=validation)
    if normalize:
        normalizer = RangeNormalizer().fit(X[s.train])
        metadata["normalization"] = normalizer.to_dict()
        dataset = dataset.replace(X=normalizer.transform(X), metadata=metadata)
    return dataset.with_split(s)


@dataclasses.dataclass(frozen=True)
class TabularSource:
    """Where to find a benchmark table

    Attributes
    ----------
    name: str
        Dataset name.
    file_name: str
        CSV file name, looked up in a local data directory.
    label_column: Optional[str] = None
        Target column; None means the last column.
    kind: str = "classification"
    """

    name: str
    file_name: str
    label_column: Optional[str] = None
    kind: str = "classification"

    def load(self, data_dir: Union[str, pathlib.Path], **kwargs) -> Dataset:
        """Load from `data_dir` with :func:`load_tabular_csv`"""
        return load_tabular_csv(
            pathlib.Path(data_dir) / self.file_name,
            label_column=self.label_column,
            kind=self.kind,
            **kwargs,
        )


TABULAR_DATASETS: dict[str, TabularSource] = {
    name: TabularSource(name=name, file_name=f"{name}.csv")
    for name in [
        "credit",
        "electricity",
        "covertype",
        "pol",
        "house_16H",
        "MagicTelescope",
        "bank-marketing",
        "MiniBooNE",
        "Higgs",
        "eye_movements",
        "Diabetes130US",
        "jannis",
        "default-of-credit-card-clients",
        "Bioresponse",
        "california",
        "heloc",
    ]
}
"""The 16 tabular classification benchmarks, as loader configs (no data)"""


def dataset_to_csv(
    dataset: Dataset,
    path: Union[str, pathlib.Path],
    label_column: str = "label",
) -> pathlib.Path:
    """Write a dataset in the CSV schema read by :func:`load_tabular_csv`

    Feature columns are named ``x0, x1, ...``; the target is the last column.
    """
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df = pd.DataFrame(dataset.X, columns=[f"x{i}" for i in range(dataset.input_dim)])
    df[label_column] = dataset.y
    df.to_csv(path, index=False, float_format="%.17g")
    return path
