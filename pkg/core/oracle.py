"""Brute-force reference implementations of classical notions."""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from core.errors import BoundExceededError, GenLogicError, OracleMismatchError
from core.formula import Formula, check_formula, evaluate
from core.semantics import ProbResult
from core.vocabulary import Model, Vocabulary
from core.worldstore import PriorMode, WorldTable, enumerate_models
from shared.config import Config

logger = logging.getLogger(__name__)

SubMultiset = Tuple[Formula, ...]


@dataclass(frozen=True)
class ModelSet:
    vocab: Vocabulary
    members: FrozenSet[Model]

    def __post_init__(self):
        object.__setattr__(self, 'members', frozenset(self.members))
        for m in self.members:
            m.check_vocabulary(self.vocab)

    @classmethod
    def everything(cls, vocab: Vocabulary, bound: Optional[int] = None) -> "ModelSet":
        return cls(vocab, frozenset(enumerate_models(vocab, bound)))

    @classmethod
    def support_of(cls, table: WorldTable) -> "ModelSet":
        return cls(table.vocab, frozenset(r.model for r in table.support))

    def __contains__(self, m: Model) -> bool:
        return m in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Model]:
        return iter(sorted(self.members))

    def __and__(self, other: "ModelSet") -> "ModelSet":
        if other.vocab != self.vocab:
            raise GenLogicError("Cannot intersect model sets over different vocabularies")
        return ModelSet(self.vocab, self.members & other.members)

    def __le__(self, other: "ModelSet") -> bool:
        return self.members <= other.members

    def bitstrings(self) -> List[str]:
        return [m.bitstring() for m in self]


def _universe(vocab: Vocabulary, within: Optional[ModelSet], bound: Optional[int]) -> List[Model]:
    if within is None:
        return enumerate_models(vocab, bound)
    return list(within)


def models_of(delta: Iterable[Formula], vocab: Vocabulary, within: Optional[ModelSet] = None,
              bound: Optional[int] = None) -> ModelSet:
    delta = tuple(delta)
    for f in delta:
        check_formula(f, vocab)
    members = [m for m in _universe(vocab, within, bound) if all(evaluate(f, m) for f in delta)]
    return ModelSet(vocab, frozenset(members))


def entails(delta: Iterable[Formula], alpha: Formula, vocab: Vocabulary,
            within: Optional[ModelSet] = None, bound: Optional[int] = None) -> bool:
    return models_of(delta, vocab, within, bound) <= models_of((alpha,), vocab, within, bound)


def consistent(delta: Iterable[Formula], vocab: Vocabulary, within: Optional[ModelSet] = None,
               bound: Optional[int] = None) -> bool:
    return len(models_of(delta, vocab, within, bound)) > 0


def _multiset_key(sub: SubMultiset):
    return frozenset(Counter(sub).items())


def _truth_masks(delta: Sequence[Formula], universe: Sequence[Model]) -> List[int]:
    masks = []
    for f in delta:
        mask = 0
        for position, m in enumerate(universe):
            if evaluate(f, m):
                mask |= 1 << position
        masks.append(mask)
    return masks


def _consistent_indices(indices: Sequence[int], masks: Sequence[int], everything: int) -> bool:
    mask = everything
    for i in indices:
        mask &= masks[i]
    return mask != 0


def _prepare(delta: Sequence[Formula], vocab: Vocabulary, within: Optional[ModelSet],
             bound: Optional[int], subset_bound: Optional[int]):
    subset_bound = Config.SUBSET_BOUND if subset_bound is None else subset_bound
    if len(delta) > subset_bound:
        raise BoundExceededError(
            f"Condition multiset has {len(delta)} members; subset search is limited to {subset_bound}"
        )
    for f in delta:
        check_formula(f, vocab)
    universe = _universe(vocab, within, bound)
    return _truth_masks(delta, universe), (1 << len(universe)) - 1


def _dedupe(subsets: Iterable[SubMultiset]) -> List[SubMultiset]:
    seen = set()
    unique = []
    for sub in subsets:
        key = _multiset_key(sub)
        if key not in seen:
            seen.add(key)
            unique.append(sub)
    return unique


def max_consistent_subsets(delta: Sequence[Formula], vocab: Vocabulary,
                           within: Optional[ModelSet] = None, bound: Optional[int] = None,
                           subset_bound: Optional[int] = None) -> List[SubMultiset]:
    """Consistent sub-multisets of maximum cardinality, or [] when there is no candidate model."""
    delta = tuple(delta)
    masks, everything = _prepare(delta, vocab, within, bound, subset_bound)
    for size in range(len(delta), -1, -1):
        found = [
            tuple(delta[i] for i in combo)
            for combo in itertools.combinations(range(len(delta)), size)
            if _consistent_indices(combo, masks, everything)
        ]
        if found:
            return _dedupe(found)
    return []


def inclusion_maximal_consistent_subsets(delta: Sequence[Formula], vocab: Vocabulary,
                                         within: Optional[ModelSet] = None,
                                         bound: Optional[int] = None,
                                         subset_bound: Optional[int] = None) -> List[SubMultiset]:
    delta = tuple(delta)
    masks, everything = _prepare(delta, vocab, within, bound, subset_bound)
    indices = range(len(delta))
    found = []
    for size in range(len(delta), -1, -1):
        for combo in itertools.combinations(indices, size):
            if not _consistent_indices(combo, masks, everything):
                continue
            extensible = any(
                _consistent_indices(combo + (j,), masks, everything)
                for j in indices if j not in combo
            )
            if not extensible:
                found.append(tuple(delta[i] for i in combo))
    return _dedupe(found)


def approximate_models(delta: Sequence[Formula], support: ModelSet,
                       subset_bound: Optional[int] = None) -> ModelSet:
    """Models of maximum-cardinality consistent subsets of delta, relative to ``support``.

    Computed twice, once from the subsets and once as the support models
    that satisfy the most members of delta; the two must agree.
    """
    delta = tuple(delta)
    vocab = support.vocab
    by_subsets = set()
    for sub in max_consistent_subsets(delta, vocab, within=support, subset_bound=subset_bound):
        by_subsets |= models_of(sub, vocab, within=support).members

    scores: Dict[Model, int] = {m: sum(evaluate(f, m) for f in delta) for m in support}
    best = max(scores.values(), default=0)
    by_score = {m for m, s in scores.items() if s == best}

    if by_subsets != by_score:
        raise OracleMismatchError(
            "Approximate models differ between the subset and the score characterisations"
        )
    return ModelSet(vocab, frozenset(by_score))


def _bernoulli(f: Formula, m: Model, mu: Fraction) -> Fraction:
    return mu if evaluate(f, m) else 1 - mu


def brute_force_conditional(alpha: Formula, delta: Sequence[Formula], table: WorldTable,
                            mu, bound: Optional[int] = None) -> ProbResult:
    """p(alpha | delta) by explicit summation over the full joint distribution.

    With a maximum likelihood table the sum runs over every model and every
    datum, p(m | d_k) being 1 exactly when d_k maps to m and p(d_k) = 1/K.
    Other tables carry no data, so the prior over models is used directly.
    """
    mu = Fraction(mu)
    if not 0 < mu <= 1:
        raise GenLogicError(f"mu must lie in (0, 1], got {mu}")
    delta = tuple(delta)
    for f in (alpha,) + delta:
        check_formula(f, table.vocab)

    models = enumerate_models(table.vocab, bound)
    if table.mode is PriorMode.MLE:
        data = list(table.data())
        p_datum = Fraction(1, len(data))
        joint_weights = [
            (m, sum((p_datum for d in data if d == m), Fraction(0))) for m in models
        ]
    else:
        joint_weights = [(m, table.weight_of(m)) for m in models]

    numerator = Fraction(0)
    denominator = Fraction(0)
    for m, p_m in joint_weights:
        p_delta = Fraction(1)
        for beta in delta:
            p_delta *= _bernoulli(beta, m, mu)
        numerator += _bernoulli(alpha, m, mu) * p_delta * p_m
        denominator += p_delta * p_m

    if denominator == 0:
        return ProbResult.undefined("the full joint assigns the conditions probability 0")
    return ProbResult.of(numerator / denominator)


def check_theorems(trials: int, seed: int, **options):
    from core.use_cases.theorem_check import TheoremHarness
    return TheoremHarness(**options).run(trials, seed)
