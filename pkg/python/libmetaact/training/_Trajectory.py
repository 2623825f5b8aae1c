from typing import Optional

import numpy as np
import numpy.typing as npt

from libmetaact.metaglobal import ConfigError
from libmetaact.nets import MlpSpec, ParamSet, params_from_vector


class Trajectory:
    """Parameter snapshots recorded during training

    Each record holds a step index, the flattened parameters after that many
    optimizer steps (see :func:`libmetaact.nets.param_vector`), the training
    loss, and the validation accuracy. Step indices are strictly increasing.
    """

    def __init__(self, spec: MlpSpec):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        spec: MlpSpec
            The architecture of the snapshots.
        """
        self.spec = spec
        self.steps: list[int] = []
        self.snapshots: list[np.ndarray] = []
        self.train_loss: list[float] = []
        self.val_acc: list[float] = []

    def __len__(self) -> int:
        return len(self.steps)

    def append(
        self,
        step: int,
        params: ParamSet,
        train_loss: float,
        val_acc: float,
    ) -> None:
        if self.steps and step <= self.steps[-1]:
            raise ConfigError(
                f"Error in Trajectory.append: step {step} after {self.steps[-1]}"
            )
        self.steps.append(int(step))
        self.snapshots.append(params.to_vector())
        self.train_loss.append(float(train_loss))
        self.val_acc.append(float(val_acc))

    def params(self, i: int) -> ParamSet:
        """The parameters of record `i` (negative indices allowed)"""
        return params_from_vector(self.spec, self.snapshots[i])

    def snapshot_matrix(self, rows: Optional[npt.ArrayLike] = None) -> np.ndarray:
        """Snapshots as rows of a matrix, shape ``(len(self), n_params)``"""
        if len(self) == 0:
            raise ConfigError("Error in Trajectory.snapshot_matrix: empty trajectory")
        matrix = np.vstack(self.snapshots)
        return matrix if rows is None else matrix[np.asarray(rows)]

    @staticmethod
    def from_arrays(
        spec: MlpSpec,
        steps: npt.ArrayLike,
        snapshots: npt.ArrayLike,
        train_loss: npt.ArrayLike,
        val_acc: npt.ArrayLike,
    ) -> "Trajectory":
        trajectory = Trajectory(spec)
        snapshots = np.asarray(snapshots, dtype=np.float64)
        for step, x, loss, acc in zip(steps, snapshots, train_loss, val_acc):
            trajectory.append(int(step), params_from_vector(spec, x), loss, acc)
        return trajectory
