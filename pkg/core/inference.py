"""Exact inference over a world table."""
import logging
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from core.errors import GenLogicError, PriorError
from core.formula import Formula, check_formula, count_true, evaluate
from core.semantics import ProbResult, Regime, Semantics
from core.vocabulary import Model
from core.worldstore import PriorMode, WorldRow, WorldTable

logger = logging.getLogger(__name__)

Rational = Union[Fraction, int]

UNDEFINED_STRICT = "no supported model satisfies every condition (division by zero at mu = 1)"


def _check_all(formulas: Iterable[Formula], table: WorldTable):
    for f in formulas:
        check_formula(f, table.vocab)


def likelihood_exponents(delta: Sequence[Formula], m: Model) -> Tuple[int, int]:
    """The monomial mu^a (1 - mu)^b of p(delta | m) as the pair (a, b)."""
    satisfied = count_true(delta, m)
    return satisfied, len(delta) - satisfied


def likelihood(delta: Sequence[Formula], m: Model, mu: Rational) -> Fraction:
    """p(delta | m) = mu^|delta|_m (1 - mu)^(|delta| - |delta|_m), with 0^0 = 1."""
    mu = Fraction(mu)
    if not 0 <= mu <= 1:
        raise GenLogicError(f"mu must lie in [0, 1], got {mu}")
    satisfied, violated = likelihood_exponents(delta, m)
    return mu ** satisfied * (1 - mu) ** violated


def interpretation(alpha: Formula, m: Model, mu: Rational) -> Fraction:
    return likelihood((alpha,), m, mu)


def marginal(alpha: Formula, table: WorldTable) -> ProbResult:
    check_formula(alpha, table.vocab)
    return ProbResult.of(sum(
        (r.weight for r in table.support if evaluate(alpha, r.model)), Fraction(0)
    ))


def marginal_by_data(alpha: Formula, table: WorldTable) -> Fraction:
    if table.mode is not PriorMode.MLE:
        raise PriorError("The data-sum marginal needs a maximum likelihood prior")
    check_formula(alpha, table.vocab)
    hits = sum(r.count * evaluate(alpha, r.model) for r in table.rows)
    return Fraction(hits, table.total)


def update_marginal(p_k: Rational, k: int, alpha: Formula, new_datum: Model) -> Fraction:
    """p_{K+1}(alpha) = (K p_K(alpha) + [alpha]_{new datum}) / (K + 1)."""
    if k < 0:
        raise GenLogicError(f"K must be nonnegative, got {k}")
    return (k * Fraction(p_k) + evaluate(alpha, new_datum)) / (k + 1)


def _weighted_fraction(alpha: Formula, rows: Sequence[WorldRow]) -> Tuple[Fraction, Fraction]:
    numerator = sum((r.weight for r in rows if evaluate(alpha, r.model)), Fraction(0))
    denominator = sum((r.weight for r in rows), Fraction(0))
    return numerator, denominator


def strict_rows(delta: Sequence[Formula], table: WorldTable) -> List[WorldRow]:
    return [r for r in table.support if all(evaluate(b, r.model) for b in delta)]


def limit_rows(delta: Sequence[Formula], table: WorldTable) -> List[WorldRow]:
    """Supported models maximising |delta|_m: the approximate models within the support."""
    scored = [(count_true(delta, r.model), r) for r in table.support]
    best = max(score for score, _ in scored)
    return [r for score, r in scored if score == best]


def conditional(alpha: Formula, delta: Sequence[Formula], table: WorldTable,
                sem: Semantics) -> ProbResult:
    delta = tuple(delta)
    _check_all((alpha,) + delta, table)

    if sem.regime is Regime.FIXED:
        numerator = Fraction(0)
        denominator = Fraction(0)
        for r in table.support:
            weight = r.weight * likelihood(delta, r.model, sem.mu)
            numerator += weight * interpretation(alpha, r.model, sem.mu)
            denominator += weight
        return ProbResult.of(numerator / denominator)

    rows = strict_rows(delta, table) if sem.regime is Regime.STRICT else limit_rows(delta, table)
    numerator, denominator = _weighted_fraction(alpha, rows)
    if denominator == 0:
        logger.info("p(%s | %d condition(s)) is undefined under %s", alpha, len(delta), sem)
        return ProbResult.undefined(UNDEFINED_STRICT)
    return ProbResult.of(numerator / denominator)


def posterior(delta: Sequence[Formula], table: WorldTable,
              sem: Semantics) -> List[Tuple[Model, ProbResult]]:
    delta = tuple(delta)
    _check_all(delta, table)
    support = table.support

    if sem.regime is Regime.FIXED:
        weights = [r.weight * likelihood(delta, r.model, sem.mu) for r in support]
    else:
        kept = strict_rows(delta, table) if sem.regime is Regime.STRICT else limit_rows(delta, table)
        kept_models = {r.model for r in kept}
        weights = [r.weight if r.model in kept_models else Fraction(0) for r in support]

    total = sum(weights, Fraction(0))
    if total == 0:
        return [(r.model, ProbResult.undefined(UNDEFINED_STRICT)) for r in support]
    return [(r.model, ProbResult.of(w / total)) for r, w in zip(support, weights)]
