"""Randomized cross-check of the inference engine against the classical oracle.

Each trial draws an instance (vocabulary, prior, alpha, beta, delta) and
checks five properties that tie the probabilistic semantics to classical
logic:

``strict_entailment``
    with an everywhere-positive prior and a consistent delta, strict
    conditioning gives 1 exactly when delta entails alpha.
``strict_undefined``
    strict conditioning is undefined exactly when delta has no supported
    model, and an inconsistent delta entails everything.
``limit_entailment``
    under the same hypothesis as ``strict_entailment`` the limit agrees
    with strict conditioning and is 1 exactly when delta entails alpha.
``contradiction_neutrality``
    conditioning on a contradiction in the limit returns the marginal.
``limit_max_consistent``
    with an everywhere-positive prior the limit is 1 exactly when every
    maximum-cardinality consistent subset of delta entails alpha.

Instances outside a property's hypothesis count as skipped for it.
"""
import logging
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from core.errors import GenLogicError
from core.formula import And, Formula, Not
from core.generators import Instance, instance_for
from core.inference import conditional, marginal
from core.interfaces.trial_runner import SequentialTrialRunner, TrialRunnerInterface
from core.oracle import ModelSet, approximate_models, consistent, entails, max_consistent_subsets, models_of
from core.semantics import ProbResult, Semantics
from core.worldstore import WorldTable
from shared.config import Config

logger = logging.getLogger(__name__)

Engine = Callable[[Formula, Sequence[Formula], WorldTable, Semantics], ProbResult]

THEOREMS = (
    "strict_entailment",
    "strict_undefined",
    "limit_entailment",
    "contradiction_neutrality",
    "limit_max_consistent",
)
PASS, FAIL, SKIP = "pass", "fail", "skip"

RESTRICTIONS = {
    "strict_entailment": "checked only when every model has positive prior and delta is consistent",
    "limit_entailment": "checked only when every model has positive prior and delta is consistent",
    "limit_max_consistent": "checked only when every model has positive prior",
}

Outcome = Tuple[str, Optional[Dict[str, Any]]]


@dataclass
class TheoremTally:
    trials: int = 0
    passes: int = 0
    skipped: int = 0
    failures: int = 0
    counterexamples: List[Dict[str, Any]] = field(default_factory=list)

    def record(self, status: str, detail: Optional[Dict[str, Any]], keep: int):
        self.trials += 1
        if status == PASS:
            self.passes += 1
        elif status == SKIP:
            self.skipped += 1
        else:
            self.failures += 1
            if len(self.counterexamples) < keep:
                self.counterexamples.append(detail)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'trials': self.trials,
            'passes': self.passes,
            'skipped': self.skipped,
            'failures': self.failures,
            'counterexamples': self.counterexamples,
        }


@dataclass
class TheoremReport:
    seed: int
    trials: int
    tallies: Dict[str, TheoremTally] = field(
        default_factory=lambda: {name: TheoremTally() for name in THEOREMS}
    )
    elapsed: float = 0.0

    @property
    def all_passed(self) -> bool:
        return all(t.failures == 0 for t in self.tallies.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'trials': self.trials,
            'all_passed': self.all_passed,
            'theorems': {name: t.to_dict() for name, t in self.tallies.items()},
            'restrictions': dict(RESTRICTIONS),
        }


def _observed(**values: Any) -> Dict[str, Any]:
    return {k: (str(v) if isinstance(v, ProbResult) else v) for k, v in values.items()}


def evaluate_instance(instance: Instance, engine: Engine = conditional) -> Dict[str, Outcome]:
    """Check every property on one instance; failures carry the instance verbatim."""
    vocab, table = instance.vocab, instance.table
    alpha, beta, delta = instance.alpha, instance.beta, instance.delta

    strict = engine(alpha, delta, table, Semantics.strict())
    limit = engine(alpha, delta, table, Semantics.limit())
    is_consistent = consistent(delta, vocab)
    entailed = entails(delta, alpha, vocab)
    support = ModelSet.support_of(table)
    supported = models_of(delta, vocab, within=support)

    def fail(**observed: Any) -> Outcome:
        return FAIL, {'instance': instance.to_dict(), 'observed': _observed(**observed)}

    outcomes: Dict[str, Outcome] = {}

    if not table.all_positive or not is_consistent:
        outcomes["strict_entailment"] = (SKIP, None)
        outcomes["limit_entailment"] = (SKIP, None)
    else:
        ok = (strict == 1) == entailed
        outcomes["strict_entailment"] = (PASS, None) if ok else fail(strict=strict, entails=entailed)
        ok = (limit == 1) == entailed and limit == strict
        outcomes["limit_entailment"] = (
            (PASS, None) if ok else fail(strict=strict, limit=limit, entails=entailed)
        )

    ok = strict.is_undefined == (len(supported) == 0) and (is_consistent or entailed)
    outcomes["strict_undefined"] = (
        (PASS, None) if ok else
        fail(strict=strict, supported_models=supported.bitstrings(), entails=entailed)
    )

    contradiction = And(beta, Not(beta))
    neutral = engine(alpha, (contradiction,), table, Semantics.limit())
    expected = marginal(alpha, table)
    outcomes["contradiction_neutrality"] = (
        (PASS, None) if neutral == expected else fail(limit=neutral, marginal=expected)
    )

    if not table.all_positive:
        outcomes["limit_max_consistent"] = (SKIP, None)
    else:
        subsets = max_consistent_subsets(delta, vocab)
        expected_one = all(entails(s, alpha, vocab) for s in subsets)
        try:
            approximate_models(delta, support)
            agree = True
        except GenLogicError:
            agree = False
        ok = agree and (limit == 1) == expected_one
        outcomes["limit_max_consistent"] = (
            (PASS, None) if ok else
            fail(limit=limit, all_subsets_entail=expected_one, characterisations_agree=agree)
        )
    return outcomes


def run_trial(index: int, seed: int, max_atoms: int, max_depth: int, max_delta: int,
              engine: Engine = conditional) -> Dict[str, Outcome]:
    instance = instance_for(seed, index, max_atoms, max_depth, max_delta)
    return evaluate_instance(instance, engine)


class TheoremHarness:
    def __init__(self, runner: Optional[TrialRunnerInterface] = None, engine: Engine = conditional,
                 max_atoms: Optional[int] = None, max_depth: Optional[int] = None,
                 max_delta: Optional[int] = None, max_counterexamples: int = 10):
        self.runner = runner or SequentialTrialRunner()
        self.engine = engine
        self.max_atoms = max_atoms or Config.CHECK_MAX_ATOMS
        self.max_depth = max_depth or Config.CHECK_MAX_DEPTH
        self.max_delta = max_delta or Config.CHECK_MAX_DELTA
        self.max_counterexamples = max_counterexamples

    def run(self, trials: int, seed: int) -> TheoremReport:
        if trials < 1:
            raise GenLogicError(f"Trial count must be at least 1, got {trials}")
        start = time.time()
        trial = partial(
            run_trial, seed=seed, max_atoms=self.max_atoms, max_depth=self.max_depth,
            max_delta=self.max_delta, engine=self.engine,
        )
        results = self.runner.map(trial, list(range(trials)))

        report = TheoremReport(seed=seed, trials=trials)
        for outcomes in results:
            for name in THEOREMS:
                status, detail = outcomes[name]
                report.tallies[name].record(status, detail, self.max_counterexamples)
        report.elapsed = time.time() - start

        logger.info("Checked %d trials (seed %d) in %.2fs", trials, seed, report.elapsed)
        for name, tally in report.tallies.items():
            if tally.failures:
                logger.warning("%s failed on %d trial(s)", name, tally.failures)
        return report
