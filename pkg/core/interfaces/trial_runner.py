from abc import ABC, abstractmethod
from typing import Callable, List, Sequence, TypeVar

T = TypeVar('T')
R = TypeVar('R')


class TrialRunnerInterface(ABC):
    @abstractmethod
    def map(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """Apply ``fn`` to every item, returning results in input order."""
        pass


class SequentialTrialRunner(TrialRunnerInterface):
    def map(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        return [fn(item) for item in items]
