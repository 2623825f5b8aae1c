"""Function complexity measures

The :py:mod:`libmetaact.complexity` module provides:

- :func:`tv_complexity`: total variation of a model along straight paths
  between training points, after removing the line through the endpoint values
- :func:`input_slice_2d`: model outputs on 2d slices of the input space
- :func:`trajectory_pca` and :func:`landscape`: loss or complexity over planes
  of parameter space, spanned by the principal directions of a training
  trajectory or by random directions

"""
from ._io import (
    write_grid_csv,
    write_tv_csv,
)
from ._landscape import (
    LANDSCAPE_KINDS,
    LANDSCAPE_RESOLUTION,
    Landscape,
    Plane,
    TrajectoryPca,
    landscape,
    pca_extents,
    pca_plane,
    random_extents,
    random_plane,
    trajectory_pca,
)
from ._Path import (
    Path,
)
from ._slices import (
    SLICE_RESOLUTION,
    Slice2d,
    input_slice_2d,
    minmax_normalize,
)
from ._tv import (
    Model,
    TvReport,
    path_tv,
    sample_endpoints,
    tv_along_training,
    tv_complexity,
)
