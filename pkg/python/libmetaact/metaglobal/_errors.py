from typing import Optional


class ShapeError(ValueError):
    """Raised when operand shapes do not conform for an operation

    Parameters
    ----------
    op: str
        The name of the operation.
    shapes: list[tuple[int, ...]]
        The shapes of the operands.
    detail: str = ""
        Optional additional explanation.
    """

    def __init__(self, op: str, shapes: list, detail: str = ""):
        self.op = op
        self.shapes = [tuple(s) for s in shapes]
        msg = f"Error in {op}: shape mismatch, operand shapes {self.shapes}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ConfigError(ValueError):
    """Raised for invalid configurations, unknown identifiers, and violated
    preconditions"""

    pass


class DatasetError(ValueError):
    """Raised for malformed dataset files

    Parameters
    ----------
    msg: str
        The error message.
    row: Optional[int] = None
        The (0-based, data) row where the problem was found, if known.
    column: Optional[str] = None
        The column where the problem was found, if known.
    """

    def __init__(
        self,
        msg: str,
        row: Optional[int] = None,
        column: Optional[str] = None,
    ):
        self.row = row
        self.column = column
        if row is not None or column is not None:
            msg += f" (row={row}, column={column})"
        super().__init__(msg)


class DivergenceError(ArithmeticError):
    """Raised when a training loss becomes non-finite

    Parameters
    ----------
    msg: str
        The error message.
    step: int
        The training step at which the non-finite value was found.
    """

    def __init__(self, msg: str, step: int):
        self.step = step
        super().__init__(f"{msg} (step={step})")
