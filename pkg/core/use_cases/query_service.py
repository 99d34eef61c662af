import logging
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from core.errors import GenLogicError, OracleMismatchError, PriorError
from core.formula import pretty
from core.inference import conditional, marginal, marginal_by_data, posterior, update_marginal
from core.interfaces.repository import TableRepositoryInterface
from core.interfaces.trial_runner import TrialRunnerInterface
from core.oracle import (
    ModelSet,
    approximate_models,
    consistent,
    entails,
    inclusion_maximal_consistent_subsets,
    max_consistent_subsets,
)
from core.parser import parse, parse_many
from core.semantics import Semantics
from core.use_cases.theorem_check import Engine, TheoremHarness
from core.vocabulary import Model, Vocabulary
from core.worldstore import PriorMode, WorldTable, add_datum, build_prior, format_fraction

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_UNDEFINED = 2
EXIT_CHECK_FAILED = 3

_ASSIGNMENT_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*(?:\([^)]*\))?)\s*=\s*([01])\s*(?:,|$)")


@dataclass(frozen=True)
class QueryRequest:
    vocab_path: str
    query: Optional[str] = None
    given: Tuple[str, ...] = ()
    semantics: str = "strict"
    data_path: Optional[str] = None
    prior: Optional[str] = None


@dataclass
class CommandResult:
    exit_code: int
    payload: Dict[str, Any] = field(default_factory=dict)


def parse_row(text: str, vocab: Vocabulary) -> Model:
    """A datum as a bit string in atom order or as ``atom=0|1`` pairs covering every atom."""
    stripped = text.strip()
    if stripped and set(stripped) <= {"0", "1"}:
        return Model.from_bitstring(vocab, stripped)
    assignment: Dict[str, int] = {}
    position = 0
    while position < len(text):
        match = _ASSIGNMENT_RE.match(text, position)
        if not match or match.end() == position:
            raise GenLogicError(f"Cannot read row {text!r}; use name=0|1 pairs or a bit string")
        name = str(vocab.atom_named(match.group(1)))
        if name in assignment:
            raise GenLogicError(f"Row assigns {name} twice")
        assignment[name] = int(match.group(2))
        position = match.end()
    return Model.from_assignment(vocab, assignment)


class QueryService:
    def __init__(self, repository: TableRepositoryInterface, decimal_places: int = 6,
                 enumeration_bound: Optional[int] = None, subset_bound: Optional[int] = None):
        self.repository = repository
        self.decimal_places = decimal_places
        self.enumeration_bound = enumeration_bound
        self.subset_bound = subset_bound

    def _load(self, request: QueryRequest) -> Tuple[Vocabulary, WorldTable]:
        vocab = self.repository.load_vocabulary(request.vocab_path)
        data = self.repository.load_table(request.data_path, vocab) if request.data_path else None
        spec = self.repository.load_prior(request.prior, vocab, has_data=data is not None)
        table = build_prior(spec, vocab, data, self.enumeration_bound)
        logger.debug("Loaded %s table: K=%d, %d supported model(s)",
                     table.mode.value, table.total, len(table.support))
        return vocab, table

    def _require_query(self, request: QueryRequest) -> str:
        if not request.query:
            raise GenLogicError("A query formula is required")
        return request.query

    def query(self, request: QueryRequest) -> CommandResult:
        sem = Semantics.parse(request.semantics)
        vocab, table = self._load(request)
        alpha = parse(self._require_query(request), vocab)
        delta = parse_many(request.given, vocab)

        result = conditional(alpha, delta, table, sem)
        payload = result.to_dict(self.decimal_places)
        payload.update({
            'semantics': str(sem),
            'K': table.total,
            'N_supported': len(table.support),
        })
        return CommandResult(EXIT_UNDEFINED if result.is_undefined else EXIT_OK, payload)

    def marginal(self, request: QueryRequest) -> CommandResult:
        vocab, table = self._load(request)
        alpha = parse(self._require_query(request), vocab)
        result = marginal(alpha, table)
        payload = result.to_dict(self.decimal_places)
        payload.update({'K': table.total, 'N_supported': len(table.support)})
        if table.mode is PriorMode.MLE:
            by_data = marginal_by_data(alpha, table)
            if by_data != result.value:
                raise OracleMismatchError(
                    f"Marginal over models ({result}) differs from the data average ({by_data})"
                )
            payload['data_sum'] = format_fraction(by_data)
        return CommandResult(EXIT_OK, payload)

    def update(self, request: QueryRequest, row: str, write: bool = False) -> CommandResult:
        if not request.data_path:
            raise GenLogicError("update needs a data file")
        vocab, table = self._load(request)
        if table.mode is not PriorMode.MLE:
            raise PriorError(
                f"update needs the maximum likelihood prior, not {table.mode.value}"
            )
        alpha = parse(self._require_query(request), vocab)
        datum = parse_row(row, vocab)

        p_k = marginal(alpha, table).value
        p_next = update_marginal(p_k, table.total, alpha, datum)
        recomputed = marginal(alpha, add_datum(table, datum)).value
        if p_next != recomputed:
            raise OracleMismatchError(
                f"Incremental update {p_next} differs from recomputation {recomputed}"
            )
        if write:
            self.repository.append_row(request.data_path, datum)
            logger.info("Appended row %s to %s", datum.bitstring(), request.data_path)

        return CommandResult(EXIT_OK, {
            'query': pretty(alpha),
            'row': datum.bitstring(),
            'K': table.total,
            'p_K': format_fraction(p_k),
            'p_K+1': format_fraction(p_next),
            'decimal_K+1': float(round(p_next, self.decimal_places)),
            'written': write,
        })

    def entail(self, request: QueryRequest) -> CommandResult:
        vocab = self.repository.load_vocabulary(request.vocab_path)
        alpha = parse(self._require_query(request), vocab)
        delta = parse_many(request.given, vocab)
        return CommandResult(EXIT_OK, {
            'entails': entails(delta, alpha, vocab, bound=self.enumeration_bound),
            'consistent': consistent(delta, vocab, bound=self.enumeration_bound),
        })

    def mcs(self, request: QueryRequest, by: str = "cardinality") -> CommandResult:
        vocab = self.repository.load_vocabulary(request.vocab_path)
        delta = parse_many(request.given, vocab)
        if by == "cardinality":
            search = max_consistent_subsets
        elif by == "inclusion":
            search = inclusion_maximal_consistent_subsets
        else:
            raise GenLogicError(f"Unknown subset order {by!r}; use cardinality or inclusion")
        subsets = search(delta, vocab, bound=self.enumeration_bound, subset_bound=self.subset_bound)
        payload: Dict[str, Any] = {
            'by': by,
            'subsets': [[pretty(f) for f in sub] for sub in subsets],
        }
        if request.data_path or request.prior:
            _, table = self._load(request)
            support = ModelSet.support_of(table)
            payload['approximate_models'] = approximate_models(
                delta, support, subset_bound=self.subset_bound
            ).bitstrings()
        return CommandResult(EXIT_OK, payload)

    def posterior(self, request: QueryRequest) -> CommandResult:
        sem = Semantics.parse(request.semantics)
        vocab, table = self._load(request)
        delta = parse_many(request.given, vocab)
        entries = posterior(delta, table, sem)
        undefined = any(p.is_undefined for _, p in entries)
        payload: Dict[str, Any] = {
            'semantics': str(sem),
            'atoms': list(vocab.atom_names),
            'posterior': [
                {'model': m.bitstring(), **p.to_dict(self.decimal_places)} for m, p in entries
            ],
        }
        return CommandResult(EXIT_UNDEFINED if undefined else EXIT_OK, payload)

    def check(self, trials: int, seed: int, runner: Optional[TrialRunnerInterface] = None,
              engine: Optional[Engine] = None, **options: Any) -> CommandResult:
        harness = TheoremHarness(runner=runner, engine=engine or conditional, **options)
        report = harness.run(trials, seed)
        return CommandResult(EXIT_OK if report.all_passed else EXIT_CHECK_FAILED, report.to_dict())
