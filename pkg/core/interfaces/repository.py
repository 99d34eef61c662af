from abc import ABC, abstractmethod
from typing import Optional

from core.vocabulary import Model, Vocabulary
from core.worldstore import PriorSpec, WorldTable


class TableRepositoryInterface(ABC):
    @abstractmethod
    def load_vocabulary(self, source: str) -> Vocabulary:
        pass

    @abstractmethod
    def load_table(self, source: str, vocab: Vocabulary) -> WorldTable:
        pass

    @abstractmethod
    def load_prior(self, source: Optional[str], vocab: Vocabulary, has_data: bool) -> PriorSpec:
        """Resolve ``mle``, ``uniform`` or a prior file; ``None`` means MLE when data is given."""
        pass

    @abstractmethod
    def append_row(self, source: str, model: Model) -> None:
        pass
