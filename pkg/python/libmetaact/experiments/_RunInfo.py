import sys
from typing import Any, Optional

from libmetaact.metaglobal import pretty_json


class RunInfo:
    """Helper for printing information about a sequence of runs

    .. rubric:: Example usage

    .. code-block:: Python

        info = RunInfo("train")
        for seed in seeds:
            info.begin(f"seed {seed}", {"hidden": [256], "lr": 1.0})
            result = run(seed)
            info.finish({"best_step": result.best_step})
        info.close()

    Example output:

    ::

        ~~~~~~
        train: seed 0
         {
          "hidden": [256],
          "lr": 1.0
        }
        best_step: 1200

        2 train runs

    """

    def __init__(self, command: str, stream: Optional[Any] = None):
        """
        .. rubric:: Constructor

        Parameters
        ----------
        command: str
            The command name, printed with every run.
        stream: Optional[Any] = None
            Output stream. Default is ``sys.stdout``.
        """
        self.command = command
        """str: The command name"""

        self.stream = stream
        """Optional[Any]: Output stream, None for ``sys.stdout``"""

        self.n_runs = 0
        """int: Number of finished runs"""

    def _out(self):
        return sys.stdout if self.stream is None else self.stream

    def begin(self, name: str, summary: Optional[dict] = None) -> None:
        """Call before each run"""
        out = self._out()
        print("~~~~~~", file=out)
        print(f"{self.command}: {name}", file=out)
        if summary:
            print("", pretty_json(summary), end="", file=out)
        out.flush()

    def finish(self, results: Optional[dict] = None) -> None:
        """Call after each run"""
        out = self._out()
        for key, value in (results or {}).items():
            print(f"{key}: {value}", file=out)
        print(file=out)
        out.flush()
        self.n_runs += 1

    def close(self) -> None:
        """Call when all runs are complete"""
        out = self._out()
        print(f"{self.n_runs} {self.command} runs", file=out)
        out.flush()
