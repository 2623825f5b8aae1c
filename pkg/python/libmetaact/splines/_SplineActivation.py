from typing import Union

import numpy as np
import numpy.typing as npt

from libmetaact.metaglobal import ConfigError
from libmetaact.splines._kernel import MODES, spline_values


class SplineActivation:
    """A learnable scalar activation function on a regular control-point grid

    The activation interpolates the control values `psi` at the grid points
    ``a + i * (b - a) / (n_c - 1)``, ``i = 0, ..., n_c - 1``, and extrapolates
    ``psi[0]`` below `a` and ``psi[n_c - 1]`` above `b`.

    Interpolation modes:

    - "linear": piecewise linear segments between control points (default)
    - "cubic": natural cubic spline (second derivative zero at `a` and `b`)
    - "nearest": value of the nearest control point; samples exactly halfway
      between two control points take the lower one

    SplineActivation is immutable: `psi` is stored as a read-only copy, and
    :func:`with_psi` returns a new object.
    """

    def __init__(
        self,
        psi: npt.ArrayLike,
        a: float = -5.0,
        b: float = 5.0,
        mode: str = "linear",
    ):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        psi: array_like
            The control values, of length `n_c` (``n_c >= 2``).
        a: float = -5.0
            Lower interval endpoint.
        b: float = 5.0
            Upper interval endpoint. Must be greater than `a`.
        mode: str = "linear"
            Interpolation mode, one of "nearest", "linear", "cubic".
        """
        psi = np.array(psi, dtype=np.float64)
        if psi.ndim != 1 or psi.shape[0] < 2:
            raise ConfigError(
                "Error in SplineActivation: psi must be 1d with at least 2 values"
            )
        if not a < b:
            raise ConfigError(f"Error in SplineActivation: require a < b, got {a}, {b}")
        if mode not in MODES:
            raise ConfigError(f"Error in SplineActivation: unknown mode '{mode}'")
        psi.setflags(write=False)
        self._psi = psi
        self._a = float(a)
        self._b = float(b)
        self._mode = mode

    @property
    def psi(self) -> np.ndarray:
        """np.ndarray: The control values (read-only)"""
        return self._psi

    @property
    def n_c(self) -> int:
        """int: Number of control points"""
        return self._psi.shape[0]

    @property
    def a(self) -> float:
        """float: Lower interval endpoint"""
        return self._a

    @property
    def b(self) -> float:
        """float: Upper interval endpoint"""
        return self._b

    @property
    def mode(self) -> str:
        """str: Interpolation mode"""
        return self._mode

    @property
    def grid(self) -> np.ndarray:
        """np.ndarray: The control point locations"""
        return self._a + np.arange(self.n_c) * ((self._b - self._a) / (self.n_c - 1))

    def with_psi(self, psi: npt.ArrayLike) -> "SplineActivation":
        """Return a copy with new control values on the same grid"""
        psi = np.asarray(psi, dtype=np.float64)
        if psi.shape != self._psi.shape:
            raise ConfigError(
                "Error in SplineActivation.with_psi: "
                f"expected shape {self._psi.shape}, got {psi.shape}"
            )
        return SplineActivation(psi, a=self._a, b=self._b, mode=self._mode)

    def same_grid(self, other: "SplineActivation") -> bool:
        """True if `other` has the same n_c, a, b, and mode"""
        return (
            self.n_c == other.n_c
            and self._a == other._a
            and self._b == other._b
            and self._mode == other._mode
        )

    def __call__(self, x: Union[float, npt.ArrayLike]) -> Union[float, np.ndarray]:
        """Evaluate the activation, see :func:`spline_eval`"""
        values = spline_values(x, self._psi, self._a, self._b, self._mode)
        if np.ndim(x) == 0:
            return float(values)
        return values

    def derivative(
        self, x: Union[float, npt.ArrayLike], order: int = 1
    ) -> Union[float, np.ndarray]:
        """Evaluate a derivative of the activation

        Derivatives are zero outside [a, b]. On a grid point the derivative of the
        cell to the right is used (the cell to the left at `b`).
        """
        values = spline_values(x, self._psi, self._a, self._b, self._mode, order)
        if np.ndim(x) == 0:
            return float(values)
        return values

    def to_dict(self) -> dict:
        """Represent the SplineActivation as a Python dict

        Format: ``{"n_c": int, "a": float, "b": float, "mode": str,
        "psi": list[float]}``
        """
        return {
            "n_c": self.n_c,
            "a": self._a,
            "b": self._b,
            "mode": self._mode,
            "psi": self._psi.tolist(),
        }

    @staticmethod
    def from_dict(data: dict) -> "SplineActivation":
        """Construct a SplineActivation from a Python dict"""
        psi = data["psi"]
        if "n_c" in data and len(psi) != data["n_c"]:
            raise ConfigError(
                "Error in SplineActivation.from_dict: "
                f"n_c={data['n_c']} does not match len(psi)={len(psi)}"
            )
        return SplineActivation(
            psi=psi,
            a=data["a"],
            b=data["b"],
            mode=data.get("mode", "linear"),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, SplineActivation):
            return NotImplemented
        return self.same_grid(other) and np.array_equal(self._psi, other._psi)

    def __repr__(self) -> str:
        return (
            f"SplineActivation(n_c={self.n_c}, a={self._a}, b={self._b}, "
            f"mode='{self._mode}')"
        )
