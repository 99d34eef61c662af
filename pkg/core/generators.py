"""Seeded random instances for the theorem harness.

Formulae are closed by construction: a variable is only ever drawn inside
the scope of the quantifier that binds it.
"""
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from core.formula import And, Atom, Const, Exists, Forall, Formula, Iff, Implies, Not, Or, Var, pretty
from core.vocabulary import Model, Predicate, Vocabulary
from core.worldstore import PriorSpec, WorldTable, build_prior, enumerate_models, format_fraction

_CONNECTIVES = (Not, And, Or, Implies, Iff)
PREDICATE_NAME = "p"
CONSTANTS = ("c0", "c1")


@dataclass(frozen=True)
class Instance:
    vocab: Vocabulary
    table: WorldTable
    alpha: Formula
    beta: Formula
    delta: Tuple[Formula, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'vocabulary': self.vocab.to_dict(),
            'prior': {
                r.model.bitstring(): format_fraction(r.weight) for r in self.table.rows
            },
            'alpha': pretty(self.alpha),
            'beta': pretty(self.beta),
            'delta': [pretty(f) for f in self.delta],
        }


@dataclass
class InstanceGenerator:
    rng: random.Random
    max_atoms: int = 4
    max_depth: int = 4
    max_delta: int = 4
    zero_prior_rate: float = 0.2
    _scope: List[str] = field(default_factory=list, init=False, repr=False)

    def vocabulary(self) -> Vocabulary:
        atoms = self.rng.randint(1, self.max_atoms)
        if atoms >= 2 and self.rng.random() < 1 / 3:
            propositions = tuple(f"q{i}" for i in range(atoms - len(CONSTANTS)))
            return Vocabulary(propositions, (Predicate(PREDICATE_NAME, 1),), CONSTANTS)
        return Vocabulary(tuple(f"q{i}" for i in range(atoms)))

    def _leaf(self, vocab: Vocabulary) -> Formula:
        choices: List[Formula] = [Atom(name) for name in vocab.propositions]
        if vocab.predicates:
            choices.extend(Atom(PREDICATE_NAME, (Const(c),)) for c in vocab.constants)
            choices.extend(Atom(PREDICATE_NAME, (Var(v),)) for v in self._scope)
        return self.rng.choice(choices)

    def formula(self, vocab: Vocabulary, depth: Optional[int] = None) -> Formula:
        depth = self.max_depth if depth is None else depth
        if depth <= 0 or self.rng.random() < 0.3:
            return self._leaf(vocab)

        kinds: List[type] = list(_CONNECTIVES)
        if vocab.predicates:
            kinds.extend((Forall, Exists))
        kind = self.rng.choice(kinds)
        if kind is Not:
            return Not(self.formula(vocab, depth - 1))
        if kind in (Forall, Exists):
            var = f"x{len(self._scope)}"
            self._scope.append(var)
            try:
                body = self.formula(vocab, depth - 1)
            finally:
                self._scope.pop()
            return kind(var, body)
        return kind(self.formula(vocab, depth - 1), self.formula(vocab, depth - 1))

    def prior_weights(self, vocab: Vocabulary, allow_zero: bool) -> List[Tuple[Model, Fraction]]:
        models = enumerate_models(vocab)
        raw = [self.rng.randint(1, 9) for _ in models]
        if allow_zero:
            raw = [0 if self.rng.random() < 0.5 else w for w in raw]
            if not any(raw):
                raw[self.rng.randrange(len(raw))] = 1
        total = sum(raw)
        return [(m, Fraction(w, total)) for m, w in zip(models, raw)]

    def table(self, vocab: Vocabulary) -> WorldTable:
        allow_zero = self.rng.random() < self.zero_prior_rate
        spec = PriorSpec.explicit(self.prior_weights(vocab, allow_zero))
        return build_prior(spec, vocab)

    def delta(self, vocab: Vocabulary) -> Tuple[Formula, ...]:
        size = self.rng.randint(1, self.max_delta)
        members = [self.formula(vocab, self.max_depth - 1) for _ in range(size)]
        if self.rng.random() < 0.5:
            negated = Not(self.rng.choice(members))
            if len(members) < self.max_delta:
                members.append(negated)
            else:
                members[-1] = negated
            self.rng.shuffle(members)
        return tuple(members)

    def instance(self) -> Instance:
        vocab = self.vocabulary()
        return Instance(
            vocab=vocab,
            table=self.table(vocab),
            alpha=self.formula(vocab),
            beta=self.formula(vocab),
            delta=self.delta(vocab),
        )


def instance_for(seed: int, index: int, max_atoms: int = 4, max_depth: int = 4,
                 max_delta: int = 4) -> Instance:
    """The index-th instance of a seeded run, independent of how trials are scheduled."""
    rng = random.Random(f"{seed}:{index}")
    return InstanceGenerator(rng, max_atoms, max_depth, max_delta).instance()
