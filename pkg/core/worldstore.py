"""World tables: data rows grouped into models, with a prior over models.

Every data row is mapped to the single model it describes; identical rows
aggregate into one entry with count K_n. The prior is either the maximum
likelihood estimate K_n / K, uniform over every model of the vocabulary, or
an explicit list of rational weights. All arithmetic is exact.
"""
import bisect
import csv
import io
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import IO, Any, Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from core.errors import BoundExceededError, DataFormatError, FrozenPriorError, PriorError
from core.vocabulary import Model, Vocabulary, iter_bit_vectors
from shared.config import Config

logger = logging.getLogger(__name__)


class PriorMode(Enum):
    MLE = "mle"
    UNIFORM = "uniform"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class PriorSpec:
    mode: PriorMode
    weights: Tuple[Tuple[Model, Fraction], ...] = ()

    def __post_init__(self):
        if self.mode is not PriorMode.EXPLICIT:
            if self.weights:
                raise PriorError(f"{self.mode.value} priors take no weights")
            return
        weights = tuple((m, Fraction(w)) for m, w in self.weights)
        if not weights:
            raise PriorError("Explicit prior needs at least one weight")
        if any(w < 0 for _, w in weights):
            raise PriorError("Explicit prior weights must be nonnegative")
        if sum(w for _, w in weights) != 1:
            raise PriorError(
                f"Explicit prior weights sum to {sum(w for _, w in weights)}, not 1"
            )
        models = [m for m, _ in weights]
        if len(set(models)) != len(models):
            raise PriorError("Explicit prior lists a model more than once")
        object.__setattr__(self, 'weights', weights)

    @classmethod
    def mle(cls) -> "PriorSpec":
        return cls(PriorMode.MLE)

    @classmethod
    def uniform(cls) -> "PriorSpec":
        return cls(PriorMode.UNIFORM)

    @classmethod
    def explicit(cls, weights: Iterable[Tuple[Model, Union[Fraction, int, str]]]) -> "PriorSpec":
        return cls(PriorMode.EXPLICIT, tuple((m, Fraction(w)) for m, w in weights))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], vocab: Vocabulary) -> "PriorSpec":
        try:
            mode = PriorMode(data["mode"])
        except (KeyError, ValueError) as e:
            raise PriorError(f"Prior JSON needs a mode of mle, uniform or explicit: {e}") from e
        if mode is not PriorMode.EXPLICIT:
            return cls(mode)
        try:
            weights = [
                (Model.from_bitstring(vocab, entry["model"]), _parse_weight(entry["w"]))
                for entry in data["weights"]
            ]
        except (KeyError, TypeError) as e:
            raise PriorError(f"Malformed explicit prior: {e}") from e
        return cls.explicit(weights)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'mode': self.mode.value}
        if self.mode is PriorMode.EXPLICIT:
            data['weights'] = [
                {'model': m.bitstring(), 'w': format_fraction(w)} for m, w in self.weights
            ]
        return data


def _parse_weight(value: Any) -> Fraction:
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise PriorError(f"Invalid prior weight {value!r}") from e


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class WorldRow:
    model: Model
    count: int
    weight: Fraction


class _Added(NamedTuple):
    model: Model
    previous: Optional["_Added"]


@dataclass(frozen=True, eq=False)
class WorldTable:
    """Immutable snapshot of the data multiset and the prior over models.

    ``rows`` lists pairwise distinct models; models not listed have prior 0.
    Data added with ``add_datum`` is chained onto the snapshot it extends and
    folded into ``rows`` on first read.
    """
    vocab: Vocabulary
    base: Tuple[WorldRow, ...]
    mode: PriorMode
    spec: PriorSpec = field(default_factory=PriorSpec.mle)
    added: Optional[_Added] = field(default=None, repr=False)
    total: int = -1

    def __post_init__(self):
        if self.added is not None:
            return
        object.__setattr__(self, 'total', sum(r.count for r in self.base))
        if self.mode is PriorMode.MLE and self.total < 1:
            raise DataFormatError("The maximum likelihood prior needs at least one datum (K = 0)")
        if sum(r.weight for r in self.base) != 1:
            raise PriorError("Prior weights do not sum to 1")
        if len(self._index) != len(self.base):
            raise PriorError("World table lists a model more than once")

    def __eq__(self, other) -> bool:
        if not isinstance(other, WorldTable):
            return NotImplemented
        return (self.vocab, self.mode, self.spec, self.rows) == (
            other.vocab, other.mode, other.spec, other.rows
        )

    __hash__ = None

    @cached_property
    def rows(self) -> Tuple[WorldRow, ...]:
        if self.added is None:
            return self.base
        extra: Counter = Counter()
        node = self.added
        while node is not None:
            extra[node.model] += 1
            node = node.previous
        models = [r.model for r in self.base]
        known = set(models)
        # keep canonical bit order for tables that came from ingest_csv
        for model in sorted(m for m in extra if m not in known):
            models.insert(bisect.bisect_left(models, model), model)
        base = {r.model: r for r in self.base}
        rows = []
        for model in models:
            count = extra[model] + (base[model].count if model in base else 0)
            if self.mode is PriorMode.MLE:
                weight = Fraction(count, self.total)
            else:
                weight = base[model].weight
            rows.append(WorldRow(model, count, weight))
        return tuple(rows)

    @property
    def models(self) -> Tuple[Model, ...]:
        return tuple(r.model for r in self.rows)

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(r.count for r in self.rows)

    @property
    def prior(self) -> Tuple[Fraction, ...]:
        return tuple(r.weight for r in self.rows)

    @cached_property
    def _index(self) -> Dict[Model, int]:
        return {r.model: i for i, r in enumerate(self.rows)}

    @property
    def support(self) -> Tuple[WorldRow, ...]:
        return tuple(r for r in self.rows if r.weight > 0)

    @property
    def all_positive(self) -> bool:
        return len(self.support) == 2 ** self.vocab.atom_count

    def count_of(self, model: Model) -> int:
        position = self._index.get(model)
        return 0 if position is None else self.rows[position].count

    def weight_of(self, model: Model) -> Fraction:
        position = self._index.get(model)
        return Fraction(0) if position is None else self.rows[position].weight

    def data(self) -> Iterable[Model]:
        for r in self.rows:
            for _ in range(r.count):
                yield r.model


def _require_vocab(model: Model, vocab: Vocabulary):
    model.check_vocabulary(vocab)


def _mle_rows(models: Sequence[Model], counts: Sequence[int]) -> Tuple[WorldRow, ...]:
    total = sum(counts)
    return tuple(WorldRow(m, k, Fraction(k, total)) for m, k in zip(models, counts))


def from_counts(vocab: Vocabulary, counts: Mapping[Model, int]) -> WorldTable:
    models = [m for m, k in counts.items() if k > 0]
    for m in models:
        _require_vocab(m, vocab)
    return WorldTable(vocab, _mle_rows(models, [counts[m] for m in models]), PriorMode.MLE)


def ingest_csv(stream: Union[IO[str], IO[bytes], str, bytes], vocab: Vocabulary) -> WorldTable:
    """Read 0/1 data rows whose header names every ground atom exactly once."""
    if isinstance(stream, bytes):
        text = stream.decode("utf-8")
    elif isinstance(stream, str):
        text = stream
    else:
        raw = stream.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    reader = csv.reader(io.StringIO(text.lstrip("\ufeff")))
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError("CSV is empty; a header naming every ground atom is required") from None
    positions = _header_positions(header, vocab)

    counts: Dict[Tuple[int, ...], int] = {}
    order: List[Tuple[int, ...]] = []
    for line_number, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise DataFormatError(
                f"Line {line_number}: expected {len(header)} cells, found {len(row)}"
            )
        bits = [0] * vocab.atom_count
        for column, cell in enumerate(row):
            value = cell.strip()
            if value not in ("0", "1"):
                raise DataFormatError(f"Line {line_number}: cell {value!r} is not 0 or 1")
            bits[positions[column]] = int(value)
        key = tuple(bits)
        if key not in counts:
            counts[key] = 0
            order.append(key)
        counts[key] += 1

    if not order:
        raise DataFormatError("CSV has no data rows (K = 0)")
    order.sort()
    models = [Model(vocab, key) for key in order]
    table = WorldTable(vocab, _mle_rows(models, [counts[k] for k in order]), PriorMode.MLE)
    logger.debug("Ingested %d data rows into %d models", table.total, len(table.rows))
    return table


def _header_positions(header: Sequence[str], vocab: Vocabulary) -> List[int]:
    positions = []
    seen = set()
    for name in header:
        try:
            index = vocab.index_of(vocab.atom_named(name))
        except ValueError:
            raise DataFormatError(f"Unknown column {name.strip()!r}") from None
        if index in seen:
            raise DataFormatError(f"Duplicate column {name.strip()!r}")
        seen.add(index)
        positions.append(index)
    missing = [vocab.atom_names[i] for i in range(vocab.atom_count) if i not in seen]
    if missing:
        raise DataFormatError(f"Missing column(s): {', '.join(missing)}")
    return positions


def to_csv(table: WorldTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.vocab.atom_names)
    for model in table.data():
        writer.writerow(model.bits)
    return buffer.getvalue()


def mle_prior(table: WorldTable) -> Tuple[Fraction, ...]:
    """phi_n = K_n / K for every listed model."""
    total = table.total
    if total < 1:
        raise PriorError("The maximum likelihood prior is undefined for K = 0")
    return tuple(Fraction(r.count, total) for r in table.rows)


def add_datum(table: WorldTable, row: Model) -> WorldTable:
    _require_vocab(row, table.vocab)
    if table.mode is PriorMode.EXPLICIT:
        raise FrozenPriorError("Explicit priors are frozen; data cannot be added")
    return WorldTable(
        table.vocab, table.base, table.mode, table.spec,
        added=_Added(row, table.added), total=table.total + 1,
    )


def enumerate_models(vocab: Vocabulary, bound: Optional[int] = None, override: bool = False) -> List[Model]:
    bound = Config.ENUMERATION_BOUND if bound is None else bound
    if vocab.atom_count > bound and not override:
        raise BoundExceededError(
            f"Vocabulary has {vocab.atom_count} ground atoms; enumeration is limited to {bound}"
        )
    if vocab.atom_count > bound:
        logger.warning("Enumerating 2^%d models past the configured bound", vocab.atom_count)
    return [Model(vocab, bits) for bits in iter_bit_vectors(vocab.atom_count)]


def build_prior(spec: PriorSpec, vocab: Vocabulary, data: Optional[WorldTable] = None,
                bound: Optional[int] = None) -> WorldTable:
    if data is not None and data.vocab != vocab:
        raise PriorError("Data table belongs to a different vocabulary")

    if spec.mode is PriorMode.MLE:
        if data is None:
            raise PriorError("The maximum likelihood prior needs data")
        return WorldTable(vocab, _mle_rows(data.models, data.counts), PriorMode.MLE, spec)

    counts = (lambda m: data.count_of(m)) if data is not None else (lambda m: 0)
    if spec.mode is PriorMode.UNIFORM:
        models = enumerate_models(vocab, bound)
        weight = Fraction(1, len(models))
        rows = tuple(WorldRow(m, counts(m), weight) for m in models)
        logger.info("Uniform prior over %d models", len(models))
        return WorldTable(vocab, rows, PriorMode.UNIFORM, spec)

    for m, _ in spec.weights:
        _require_vocab(m, vocab)
    rows = [WorldRow(m, counts(m), w) for m, w in spec.weights]
    listed = {m for m, _ in spec.weights}
    if data is not None:
        unlisted = [m for m in data.models if m not in listed]
        if unlisted:
            logger.info("%d data model(s) receive prior 0 under the explicit prior", len(unlisted))
        rows.extend(WorldRow(m, data.count_of(m), Fraction(0)) for m in unlisted)
    return WorldTable(vocab, tuple(rows), PriorMode.EXPLICIT, spec)


def load_prior_json(text: str, vocab: Vocabulary) -> PriorSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise PriorError(f"Prior file is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise PriorError("Prior JSON must be an object")
    return PriorSpec.from_dict(data, vocab)


def dump_prior_json(spec: PriorSpec) -> str:
    return json.dumps(spec.to_dict(), sort_keys=True, indent=2)
