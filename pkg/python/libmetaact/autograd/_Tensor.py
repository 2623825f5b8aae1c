from typing import Union

import numpy as np
import numpy.typing as npt


class Tensor:
    """An immutable dense array of 64-bit floating point values

    The values are stored row-major (C order) in a read-only numpy array, so a
    Tensor can be shared between workers without copying.
    """

    __slots__ = ("_data",)

    def __init__(self, data: Union["Tensor", npt.ArrayLike]):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        data: array_like
            The values. Copied and converted to float64.
        """
        if isinstance(data, Tensor):
            arr = data._data
        else:
            arr = np.array(data, dtype=np.float64, order="C")
            arr.setflags(write=False)
        self._data = arr

    @property
    def data(self) -> np.ndarray:
        """np.ndarray: The values (read-only)"""
        return self._data

    @property
    def shape(self) -> tuple[int, ...]:
        """tuple[int, ...]: The dimension sizes"""
        return self._data.shape

    @property
    def size(self) -> int:
        """int: The number of values, ``product(shape)``"""
        return self._data.size

    def tolist(self):
        """The values as nested Python lists"""
        return self._data.tolist()

    def numpy(self) -> np.ndarray:
        """A writable copy of the values"""
        return np.array(self._data)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, data={self._data.tolist()})"
