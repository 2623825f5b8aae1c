import dataclasses

import numpy as np

from libmetaact.metaglobal import ConfigError


@dataclasses.dataclass(frozen=True)
class Path:
    """A straight path between two input points

    Points are ``(1 - lam) * x1 + lam * x2`` for `n_points` values of ``lam``
    regularly spaced in [0, 1].
    """

    x1: np.ndarray
    x2: np.ndarray
    n_points: int = 100

    def __post_init__(self):
        x1 = np.asarray(self.x1, dtype=np.float64).reshape(-1)
        x2 = np.asarray(self.x2, dtype=np.float64).reshape(-1)
        if x1.shape != x2.shape:
            raise ConfigError("Error in Path: endpoints differ in dimension")
        if self.n_points < 2:
            raise ConfigError(
                f"Error in Path: n_points must be >= 2, got {self.n_points}"
            )
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)

    @property
    def lam(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_points)

    def points(self) -> np.ndarray:
        """The path points, shape ``(n_points, dim)``"""
        lam = self.lam[:, None]
        return (1.0 - lam) * self.x1[None, :] + lam * self.x2[None, :]
