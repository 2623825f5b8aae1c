"""Modular arithmetic and permutation group tasks"""
import dataclasses
import functools
import itertools
from typing import Callable, Optional

import numpy as np

from libmetaact.metaglobal import ConfigError
from libmetaact.tasks._Dataset import Dataset

EXPRESSIONS: dict[str, Callable[[int, int], int]] = {
    "a+b": lambda a, b: a + b,
    "a-b": lambda a, b: a - b,
    "a*b": lambda a, b: a * b,
    "a*b if b odd else a+b": lambda a, b: a * b if b % 2 == 1 else a + b,
    "a^2+b^2": lambda a, b: a * a + b * b,
    "a^2+ab+b^2": lambda a, b: a * a + a * b + b * b,
    "a^2+ab+b^2+a": lambda a, b: a * a + a * b + b * b + a,
    "a^3+ab": lambda a, b: a * a * a + a * b,
}
"""Modular expressions, evaluated with Python integers then reduced mod p"""

GROUP_OPS = ("a.b", "a.b.a", "a.b.a^-1")
"""Operations in a symmetric group"""

GROUPS = {"S4": 4, "S5": 5}
"""Symmetric groups, by name: number of permuted points"""


@functools.lru_cache(maxsize=None)
def permutations(n: int) -> tuple[tuple[int, ...], ...]:
    """All permutations of ``range(n)``, in lexicographic order

    The position of a permutation in this tuple is its class index.
    """
    return tuple(itertools.permutations(range(n)))


def compose(a: tuple, b: tuple) -> tuple:
    """The permutation ``(a.b)(i) = a(b(i))``"""
    return tuple(a[i] for i in b)


def inverse(a: tuple) -> tuple:
    inv = [0] * len(a)
    for i, ai in enumerate(a):
        inv[ai] = i
    return tuple(inv)


@dataclasses.dataclass(frozen=True)
class AlgTaskSpec:
    """An algorithmic task on pairs of operands

    Attributes
    ----------
    expression: str
        A key of :data:`EXPRESSIONS` (with `modulus`) or of :data:`GROUP_OPS`
        (with `group`).
    modulus: Optional[int] = None
        Modulus p >= 2 for modular expressions.
    group: Optional[str] = None
        "S4" or "S5" for group operations.
    """

    expression: str
    modulus: Optional[int] = None
    group: Optional[str] = None

    def __post_init__(self):
        if self.expression in EXPRESSIONS:
            if self.modulus is None or self.modulus < 2 or self.group is not None:
                raise ConfigError(
                    f"Error in AlgTaskSpec: '{self.expression}' requires a "
                    "modulus >= 2 and no group"
                )
        elif self.expression in GROUP_OPS:
            if self.group not in GROUPS or self.modulus is not None:
                raise ConfigError(
                    f"Error in AlgTaskSpec: '{self.expression}' requires group "
                    f"in {list(GROUPS)} and no modulus"
                )
        else:
            raise ConfigError(
                f"Error in AlgTaskSpec: unknown expression '{self.expression}'"
            )

    @property
    def domain_size(self) -> int:
        """int: Number of distinct operand values (p, or the group order)"""
        if self.modulus is not None:
            return self.modulus
        return len(permutations(GROUPS[self.group]))

    @property
    def name(self) -> str:
        if self.modulus is not None:
            return f"{self.expression} mod {self.modulus}"
        return f"{self.expression} in {self.group}"

    def to_dict(self) -> dict:
        data = {"expression": self.expression}
        if self.modulus is not None:
            data["modulus"] = self.modulus
        if self.group is not None:
            data["group"] = self.group
        return data

    @staticmethod
    def from_dict(data: dict) -> "AlgTaskSpec":
        return AlgTaskSpec(
            expression=data["expression"],
            modulus=data.get("modulus"),
            group=data.get("group"),
        )


def operation_table(spec: AlgTaskSpec) -> np.ndarray:
    """Result class index for every operand pair, shape ``(m, m)``"""
    m = spec.domain_size
    if spec.modulus is not None:
        f = EXPRESSIONS[spec.expression]
        p = spec.modulus
        return np.array(
            [[f(a, b) % p for b in range(m)] for a in range(m)], dtype=np.int64
        )
    perms = permutations(GROUPS[spec.group])
    index = {perm: i for i, perm in enumerate(perms)}
    table = np.zeros((m, m), dtype=np.int64)
    for i, a in enumerate(perms):
        for j, b in enumerate(perms):
            if spec.expression == "a.b":
                r = compose(a, b)
            elif spec.expression == "a.b.a":
                r = compose(compose(a, b), a)
            else:
                r = compose(compose(a, b), inverse(a))
            table[i, j] = index[r]
    return table


def _one_hot_pairs(m: int, width: int) -> np.ndarray:
    a, b = np.divmod(np.arange(m * m), m)
    X = np.zeros((m * m, 2 * width))
    X[np.arange(m * m), a] = 1.0
    X[np.arange(m * m), width + b] = 1.0
    return X


def gen_algorithmic(spec: AlgTaskSpec) -> Dataset:
    """Generate every operand pair of an algorithmic task

    Rows are ordered by ``(a, b)``, ``a`` major. ``X`` concatenates the one-hot
    encodings of ``a`` and ``b``; the target is the class index of the result
    (the residue mod p, or the lexicographic index of the resulting permutation).

    Parameters
    ----------
    spec: AlgTaskSpec
        The task.

    Returns
    -------
    dataset: Dataset
        ``m**2`` rows, ``2 * m`` input dimensions, ``m`` classes, with
        ``m = spec.domain_size``.
    """
    m = spec.domain_size
    table = operation_table(spec)
    return Dataset(
        X=_one_hot_pairs(m, m),
        y=table.ravel(),
        kind="classification",
        class_count=m,
        metadata={"source": "algorithmic", "task": spec.to_dict(), "name": spec.name},
    )


def decode_operands(X: np.ndarray, width: int) -> tuple[np.ndarray, np.ndarray]:
    """Operand indices from concatenated one-hot rows"""
    return (np.argmax(X[:, :width], axis=1), np.argmax(X[:, width : 2 * width], axis=1))


def make_multitask_algorithmic(
    specs: list[AlgTaskSpec],
    task_id: bool = False,
) -> Dataset:
    """All rows of several algorithmic tasks in one dataset

    Operand one-hots are padded to the largest domain size ``M``, so every task
    has input width ``2 * M`` (plus ``len(specs)`` with `task_id`) and ``M``
    classes. Rows of task ``i`` are in the pool ``"task:<name>"``.

    Parameters
    ----------
    specs: list[AlgTaskSpec]
        The tasks, at least one.
    task_id: bool = False
        Append a one-hot encoding of the task index to every row.
    """
    if len(specs) == 0:
        raise ConfigError("Error in make_multitask_algorithmic: no tasks")
    M = max(s.domain_size for s in specs)
    blocks_X, blocks_y, pools = [], [], {}
    offset = 0
    for i, spec in enumerate(specs):
        m = spec.domain_size
        X = np.zeros((m * m, 2 * M))
        a, b = np.divmod(np.arange(m * m), m)
        X[np.arange(m * m), a] = 1.0
        X[np.arange(m * m), M + b] = 1.0
        if task_id:
            tid = np.zeros((m * m, len(specs)))
            tid[:, i] = 1.0
            X = np.hstack([X, tid])
        blocks_X.append(X)
        blocks_y.append(operation_table(spec).ravel())
        pools[f"task:{spec.name}"] = np.arange(offset, offset + m * m)
        offset += m * m
    return Dataset(
        X=np.vstack(blocks_X),
        y=np.concatenate(blocks_y),
        kind="classification",
        class_count=M,
        metadata={
            "source": "multitask_algorithmic",
            "tasks": [s.to_dict() for s in specs],
            "task_id": task_id,
        },
        pools=pools,
    )


ALGORITHMIC_TASKS: list[AlgTaskSpec] = [
    AlgTaskSpec(expression=e, modulus=p) for e in EXPRESSIONS for p in (27, 53)
] + [AlgTaskSpec(expression=op, group=g) for op in GROUP_OPS for g in ("S4", "S5")]
"""The 22-task suite: 8 modular expressions mod 27 and 53, and 3 group
operations in S4 and S5"""
