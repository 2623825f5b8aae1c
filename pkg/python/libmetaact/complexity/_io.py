"""CSV exports of complexity results"""
import pathlib
from typing import Union

from libmetaact.complexity._landscape import Landscape
from libmetaact.complexity._slices import Slice2d
from libmetaact.complexity._tv import TvReport


def write_grid_csv(
    path: Union[str, pathlib.Path], grid: Union[Landscape, Slice2d]
) -> pathlib.Path:
    """Write a landscape or input slice as CSV with columns u, v, value"""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    grid.to_frame().to_csv(path, index=False, float_format="%.17g")
    return path


def write_tv_csv(path: Union[str, pathlib.Path], report: TvReport) -> pathlib.Path:
    """Write per-path TV values with columns path, output_dim, tv"""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    report.to_frame().to_csv(path, index=False, float_format="%.17g")
    return path
