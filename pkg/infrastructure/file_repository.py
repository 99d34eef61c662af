import csv
import io
import json
import logging
from pathlib import Path
from typing import Optional, Type

from core.errors import DataFormatError, GenLogicError, PriorError, VocabularyError
from core.interfaces.repository import TableRepositoryInterface
from core.vocabulary import Model, Vocabulary
from core.worldstore import PriorSpec, WorldTable, ingest_csv, load_prior_json

logger = logging.getLogger(__name__)

PRIOR_MODES = {
    'mle': PriorSpec.mle,
    'uniform': PriorSpec.uniform,
}


def _read_text(source: str, error: Type[GenLogicError]) -> str:
    try:
        return Path(source).read_text(encoding='utf-8')
    except UnicodeDecodeError as e:
        raise error(f"{source} is not UTF-8: {e}") from e


class FileTableRepository(TableRepositoryInterface):
    """Vocabularies and priors as JSON files, data as 0/1 CSV files."""

    def load_vocabulary(self, source: str) -> Vocabulary:
        text = _read_text(source, VocabularyError)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise VocabularyError(f"Vocabulary file {source} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise VocabularyError(f"Vocabulary file {source} must hold a JSON object")
        return Vocabulary.from_dict(data)

    def load_table(self, source: str, vocab: Vocabulary) -> WorldTable:
        with open(source, 'rb') as f:
            try:
                table = ingest_csv(f, vocab)
            except UnicodeDecodeError as e:
                raise DataFormatError(f"Data file {source} is not UTF-8: {e}") from e
        logger.info("Loaded %d data row(s) from %s", table.total, source)
        return table

    def load_prior(self, source: Optional[str], vocab: Vocabulary, has_data: bool) -> PriorSpec:
        if source is None:
            if not has_data:
                raise PriorError("Without --data a prior is required (uniform or a prior file)")
            return PriorSpec.mle()
        if source.lower() in PRIOR_MODES:
            return PRIOR_MODES[source.lower()]()
        return load_prior_json(_read_text(source, PriorError), vocab)

    def append_row(self, source: str, model: Model) -> None:
        path = Path(source)
        text = _read_text(source, DataFormatError)
        line = ",".join(str(b) for b in self._in_header_order(text, model))
        with open(path, 'a', encoding='utf-8', newline='') as f:
            if text and not text.endswith("\n"):
                f.write("\n")
            f.write(line + "\n")

    def _in_header_order(self, text: str, model: Model):
        try:
            header = next(csv.reader(io.StringIO(text.lstrip("\ufeff"))))
        except StopIteration:
            raise DataFormatError("Cannot append to a data file without a header") from None
        vocab = model.vocab
        return [model.value(vocab.atom_named(name)) for name in header]
