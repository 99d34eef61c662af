import logging
import multiprocessing as mp
import signal
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from typing import Callable, List, Optional, Sequence, TypeVar

from core.interfaces.trial_runner import SequentialTrialRunner, TrialRunnerInterface

T = TypeVar('T')
R = TypeVar('R')

logger = logging.getLogger(__name__)


def process_worker_initializer():
    signal.signal(signal.SIGINT, signal.SIG_IGN)


class ProcessPool:
    def __init__(self, max_workers: Optional[int] = None, initializer=process_worker_initializer,
                 initargs=()):
        self.max_workers = max_workers or mp.cpu_count()
        self.initializer = initializer
        self.initargs = initargs
        self._executor: Optional[ProcessPoolExecutor] = None

    def __enter__(self):
        self._executor = ProcessPoolExecutor(
            max_workers=self.max_workers,
            initializer=self.initializer,
            initargs=self.initargs
        )
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self._executor:
            self._executor.shutdown(wait=True, cancel_futures=exc_type is not None)
            self._executor = None

    def map(self, fn, iterable, timeout=None, chunksize=1):
        if not self._executor:
            raise RuntimeError("ProcessPool not initialized. Use with context manager.")
        return self._executor.map(fn, iterable, timeout=timeout, chunksize=chunksize)


class ProcessPoolTrialRunner(TrialRunnerInterface):
    """Runs trials across worker processes, in input order.

    If the pool cannot be started or breaks, the remaining work is redone
    sequentially in this process.
    """

    def __init__(self, max_workers: Optional[int] = None, chunksize: Optional[int] = None):
        self.max_workers = max_workers or mp.cpu_count()
        self.chunksize = chunksize
        self._fallback = SequentialTrialRunner()

    def _chunksize(self, count: int) -> int:
        if self.chunksize:
            return self.chunksize
        return max(1, count // (self.max_workers * 4))

    def map(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        items = list(items)
        if self.max_workers <= 1 or len(items) <= 1:
            return self._fallback.map(fn, items)
        try:
            with ProcessPool(self.max_workers) as pool:
                return list(pool.map(fn, items, chunksize=self._chunksize(len(items))))
        except (BrokenProcessPool, OSError, RuntimeError) as e:
            logger.warning("Process pool failed, falling back to sequential trials: %s", e)
            return self._fallback.map(fn, items)


def create_trial_runner(use_multiprocess: bool, max_workers: Optional[int] = None) -> TrialRunnerInterface:
    if use_multiprocess and (max_workers or mp.cpu_count()) > 1:
        return ProcessPoolTrialRunner(max_workers)
    return SequentialTrialRunner()
