"""Shared constants, exception types, and JSON helpers

The :py:mod:`libmetaact.metaglobal` module is used by every other
:py:mod:`libmetaact` subpackage. It provides:

- :data:`TOL`, the default absolute tolerance for floating point comparisons
- :func:`pretty_json`, used to write configuration, spline, and checkpoint files
- The exception types raised across the package:
  :class:`ShapeError`, :class:`ConfigError`, :class:`DatasetError`, and
  :class:`DivergenceError`

"""
from ._errors import (
    ConfigError,
    DatasetError,
    DivergenceError,
    ShapeError,
)
from ._json import (
    pretty_json,
    read_json,
    write_json,
)

TOL = 1e-10
"""float: Default absolute tolerance"""
