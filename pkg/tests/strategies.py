"""Hypothesis strategies for vocabularies, formulae and world tables."""
from collections import Counter
from fractions import Fraction
from typing import List, Sequence

from hypothesis import strategies as st

from core.formula import And, Atom, Const, Exists, Forall, Formula, Iff, Implies, Not, Or, Var
from core.vocabulary import Model, Predicate, Vocabulary
from core.worldstore import PriorSpec, build_prior, enumerate_models, from_counts

mus = st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=100)


@st.composite
def vocabularies(draw, max_atoms: int = 3, allow_predicates: bool = True) -> Vocabulary:
    atoms = draw(st.integers(min_value=1, max_value=max_atoms))
    if allow_predicates and atoms >= 2 and draw(st.booleans()):
        propositions = tuple(f"q{i}" for i in range(atoms - 2))
        return Vocabulary(propositions, (Predicate("p", 1),), ("c0", "c1"))
    return Vocabulary(tuple(f"q{i}" for i in range(atoms)))


def _leaves(vocab: Vocabulary, scope: Sequence[str]) -> List[Formula]:
    leaves: List[Formula] = [Atom(name) for name in vocab.propositions]
    for predicate in vocab.predicates:
        leaves.extend(Atom(predicate.name, (Const(c),)) for c in vocab.constants)
        leaves.extend(Atom(predicate.name, (Var(v),)) for v in scope)
    return leaves


def _formula(draw, vocab: Vocabulary, depth: int, scope: tuple) -> Formula:
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        return draw(st.sampled_from(_leaves(vocab, scope)))
    kinds = ["not", "and", "or", "implies", "iff"]
    if vocab.predicates:
        kinds += ["forall", "exists"]
    kind = draw(st.sampled_from(kinds))
    if kind == "not":
        return Not(_formula(draw, vocab, depth - 1, scope))
    if kind in ("forall", "exists"):
        var = f"x{len(scope)}"
        body = _formula(draw, vocab, depth - 1, scope + (var,))
        return (Forall if kind == "forall" else Exists)(var, body)
    node = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[kind]
    return node(_formula(draw, vocab, depth - 1, scope), _formula(draw, vocab, depth - 1, scope))


@st.composite
def formulas(draw, vocab: Vocabulary, max_depth: int = 3) -> Formula:
    """Closed formulae: variables only appear under their quantifier."""
    return _formula(draw, vocab, max_depth, ())


@st.composite
def condition_sets(draw, vocab: Vocabulary, max_size: int = 3, max_depth: int = 2):
    size = draw(st.integers(min_value=0, max_value=max_size))
    return tuple(draw(formulas(vocab, max_depth)) for _ in range(size))


@st.composite
def models(draw, vocab: Vocabulary) -> Model:
    return Model(vocab, tuple(draw(st.lists(st.integers(0, 1), min_size=vocab.atom_count,
                                            max_size=vocab.atom_count))))


@st.composite
def mle_tables(draw, vocab: Vocabulary, max_rows: int = 11):
    data = draw(st.lists(models(vocab), min_size=1, max_size=max_rows))
    counts = Counter(data)
    return from_counts(vocab, {m: counts[m] for m in sorted(counts)})


@st.composite
def explicit_tables(draw, vocab: Vocabulary, all_positive: bool = False):
    universe = enumerate_models(vocab)
    low = 1 if all_positive else 0
    raw = draw(st.lists(st.integers(min_value=low, max_value=9),
                        min_size=len(universe), max_size=len(universe)))
    if not any(raw):
        raw[0] = 1
    total = sum(raw)
    return build_prior(PriorSpec.explicit([(m, Fraction(w, total)) for m, w in zip(universe, raw)]), vocab)


def tables(vocab: Vocabulary):
    return st.one_of(mle_tables(vocab), explicit_tables(vocab))


@st.composite
def instances(draw, max_atoms: int = 3, max_delta: int = 3, all_positive: bool = False):
    """(vocab, table, alpha, beta, delta) over a freshly drawn vocabulary."""
    vocab = draw(vocabularies(max_atoms))
    table = draw(explicit_tables(vocab, all_positive=True) if all_positive else tables(vocab))
    alpha = draw(formulas(vocab))
    beta = draw(formulas(vocab))
    delta = draw(condition_sets(vocab, max_delta))
    return vocab, table, alpha, beta, delta
