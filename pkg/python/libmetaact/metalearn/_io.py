"""Meta-learning result files"""
import pathlib
from typing import Union

import pandas as pd

from libmetaact.metaglobal import write_json
from libmetaact.metalearn._methods import (
    META_LOG_COLUMNS,
    RESTART_LOG_COLUMNS,
    MetaResult,
)
from libmetaact.splines import activation_set_to_dict


def _write_csv(path, df: pd.DataFrame, columns: list[str]) -> pathlib.Path:
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df[columns].to_csv(path, index=False, float_format="%.17g")
    return path


def write_meta_log(path: Union[str, pathlib.Path], log: pd.DataFrame) -> pathlib.Path:
    """Write a meta-learning log (columns outer_step, n_tr, episode_seed,
    outer_loss, retrain_val_acc)"""
    return _write_csv(path, log, META_LOG_COLUMNS)


def write_restart_log(
    path: Union[str, pathlib.Path], log: pd.DataFrame
) -> pathlib.Path:
    return _write_csv(path, log, RESTART_LOG_COLUMNS)


def save_meta_result(
    path: Union[str, pathlib.Path], result: MetaResult
) -> pathlib.Path:
    """Save the learned activations in the activation-set JSON format"""
    return write_json(path, activation_set_to_dict(result.hidden, result.iaf))
