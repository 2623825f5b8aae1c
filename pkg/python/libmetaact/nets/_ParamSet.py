from typing import Iterator

import numpy as np

from libmetaact.metaglobal import ConfigError


class ParamSet:
    """Weights and biases of a fully-connected network

    Layer ``l`` computes ``h @ weights[l] + biases[l]``, with ``weights[l]`` of
    shape ``(fan_in, fan_out)``. The arrays are owned by the ParamSet; methods
    that change parameters return new ParamSet.
    """

    def __init__(self, weights: list[np.ndarray], biases: list[np.ndarray]):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        weights: list[np.ndarray]
            Weight matrices, input layer first.
        biases: list[np.ndarray]
            Bias vectors, one per weight matrix.
        """
        if len(weights) != len(biases):
            raise ConfigError("Error in ParamSet: weights and biases differ in length")
        self.weights = [np.array(W, dtype=np.float64) for W in weights]
        self.biases = [np.array(b, dtype=np.float64) for b in biases]
        for W, b in zip(self.weights, self.biases):
            if W.ndim != 2 or b.shape != (W.shape[1],):
                raise ConfigError(
                    f"Error in ParamSet: inconsistent layer shapes {W.shape}, {b.shape}"
                )

    def __len__(self) -> int:
        return len(self.weights)

    def names(self) -> Iterator[str]:
        """Parameter names in flattening order: "W0", "b0", "W1", ..."""
        for i in range(len(self.weights)):
            yield f"W{i}"
            yield f"b{i}"

    def as_dict(self) -> dict[str, np.ndarray]:
        """Parameters by name, see :func:`names`"""
        data = {}
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            data[f"W{i}"] = W
            data[f"b{i}"] = b
        return data

    @staticmethod
    def from_arrays(data: dict[str, np.ndarray]) -> "ParamSet":
        """Construct from the named arrays returned by :func:`as_dict`"""
        n = len(data) // 2
        return ParamSet(
            weights=[data[f"W{i}"] for i in range(n)],
            biases=[data[f"b{i}"] for i in range(n)],
        )

    @property
    def size(self) -> int:
        """int: Total number of parameters"""
        return int(sum(W.size + b.size for W, b in zip(self.weights, self.biases)))

    def to_vector(self) -> np.ndarray:
        """Concatenate all parameters, in the order of :func:`names`"""
        parts = []
        for W, b in zip(self.weights, self.biases):
            parts.append(W.ravel())
            parts.append(b)
        return np.concatenate(parts)

    def copy(self) -> "ParamSet":
        return ParamSet(self.weights, self.biases)

    def allclose(self, other: "ParamSet", atol: float = 0.0) -> bool:
        """True if all parameters agree within `atol`"""
        if len(self) != len(other):
            return False
        return all(
            a.shape == b.shape and np.allclose(a, b, rtol=0.0, atol=atol)
            for a, b in zip(
                self.weights + self.biases, other.weights + other.biases
            )
        )
