import concurrent.futures
import logging
from typing import Any, Callable, Iterable

logger = logging.getLogger(__name__)


def run_parallel(fn: Callable, items: Iterable, n_workers: int = 1) -> list[Any]:
    """Map `fn` over `items`, in worker processes if ``n_workers > 1``

    Results are returned in the order of `items`. With worker processes, `fn`
    and the items must be picklable (module-level functions and plain data).
    """
    items = list(items)
    if n_workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    n = min(n_workers, len(items))
    logger.info("running %d jobs on %d worker processes", len(items), n)
    with concurrent.futures.ProcessPoolExecutor(max_workers=n) as executor:
        return list(executor.map(fn, items))


class ParallelMap:
    """A picklable ``mapper(fn, items)`` running :func:`run_parallel`"""

    def __init__(self, n_workers: int = 1):
        self.n_workers = n_workers

    def __call__(self, fn: Callable, items: Iterable) -> list[Any]:
        return run_parallel(fn, items, self.n_workers)
