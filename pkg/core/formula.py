"""Formula AST, grounding and classical evaluation.

Quantifiers range over the finite constant list of a Vocabulary and are
compiled away by ``ground``. Every walk over a formula is iterative, so
arbitrarily deep trees are fine.
"""
import operator
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Callable, Dict, FrozenSet, Iterable, List, Sequence, Tuple, TypeVar, Union

from core.errors import GroundingError, UnboundVariableError, VocabularyError
from core.vocabulary import GroundAtom, Model, Vocabulary


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Const, Var]


class Formula:
    __slots__ = ()

    def __post_init__(self):
        # children hash in O(1), so hashing a node never walks the tree
        object.__setattr__(self, '_hash', hash((type(self).__name__,) + self._parts()))

    def _parts(self) -> tuple:
        return tuple(getattr(self, name) for name in self.__dataclass_fields__)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        pending = [(self, other)]
        while pending:
            a, b = pending.pop()
            if a is b:
                continue
            if type(a) is not type(b) or a._hash != b._hash:
                return False
            for x, y in zip(a._parts(), b._parts()):
                if isinstance(x, Formula):
                    pending.append((x, y))
                elif x != y:
                    return False
        return True

    def __reduce__(self):
        return type(self), self._parts()

    def __invert__(self) -> "Formula":
        return Not(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    symbol: str
    args: Tuple[Term, ...] = ()


@dataclass(frozen=True, eq=False)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, eq=False)
class Exists(Formula):
    var: str
    body: Formula


BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists)

T = TypeVar('T')
R = TypeVar('R')


def prop(name: str) -> Atom:
    return Atom(name)


def atom(symbol: str, *args: str) -> Atom:
    return Atom(symbol, tuple(Const(a) for a in args))


def _fold(root: T, expand: Callable[[T], Sequence[T]], combine: Callable[[T, List[R]], R]) -> R:
    """Post-order fold with an explicit stack.

    ``expand`` lists an item's children, ``combine`` receives the item and
    its children's results in order.
    """
    results: List[R] = []
    stack: List[Tuple[T, int]] = [(root, -1)]
    while stack:
        item, arity = stack.pop()
        if arity < 0:
            children = expand(item)
            stack.append((item, len(children)))
            stack.extend((child, -1) for child in reversed(children))
            continue
        start = len(results) - arity
        args = results[start:]
        del results[start:]
        results.append(combine(item, args))
    return results[0]


def _children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.operand,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, QUANTIFIERS):
        return (f.body,)
    if isinstance(f, Atom):
        return ()
    raise TypeError(f"Not a formula: {f!r}")


def free_variables(f: Formula) -> FrozenSet[str]:
    def combine(node: Formula, inner: List[FrozenSet[str]]) -> FrozenSet[str]:
        if isinstance(node, Atom):
            return frozenset(t.name for t in node.args if isinstance(t, Var))
        if isinstance(node, QUANTIFIERS):
            return inner[0] - {node.var}
        return frozenset().union(*inner)

    return _fold(f, _children, combine)


Scoped = Tuple[Formula, Tuple[Tuple[str, str], ...]]


@lru_cache(maxsize=4096)
def ground(f: Formula, vocab: Vocabulary) -> Formula:
    """Expand quantifiers over the vocabulary's constants.

    ``Forall`` becomes a left-nested conjunction of its instances in
    constant order, ``Exists`` the corresponding disjunction.
    """
    def expand(item: Scoped) -> Tuple[Scoped, ...]:
        node, scope = item
        if isinstance(node, QUANTIFIERS):
            if not vocab.constants:
                raise GroundingError(f"Cannot ground {pretty(node)}: the vocabulary has no constants")
            return tuple((node.body, scope + ((node.var, c),)) for c in vocab.constants)
        return tuple((child, scope) for child in _children(node))

    def combine(item: Scoped, inner: List[Formula]) -> Formula:
        node, scope = item
        if isinstance(node, Atom):
            if not any(isinstance(t, Var) for t in node.args):
                return node
            binding = dict(scope)
            unbound = [t.name for t in node.args if isinstance(t, Var) and t.name not in binding]
            if unbound:
                raise UnboundVariableError(f"Unbound variable {unbound[0]} in {pretty(node)}")
            return Atom(node.symbol, tuple(
                Const(binding[t.name]) if isinstance(t, Var) else t for t in node.args
            ))
        if isinstance(node, Not):
            return Not(inner[0])
        if isinstance(node, QUANTIFIERS):
            return reduce(And if isinstance(node, Forall) else Or, inner)
        return type(node)(*inner)

    return _fold((f, ()), expand, combine)


def ground_atom_of(a: Atom) -> GroundAtom:
    return GroundAtom(a.symbol, tuple(t.name for t in a.args))


Evaluator = Callable[[Tuple[int, ...]], int]

_CONNECTIVES: Dict[type, Callable[[int, int], int]] = {
    And: operator.and_,
    Or: operator.or_,
    Implies: lambda left, right: (1 - left) | right,
    Iff: lambda left, right: 1 - (left ^ right),
}


def _compile(f: Formula, vocab: Vocabulary) -> Evaluator:
    # postfix program: an int pushes that bit, None negates, a callable pops two
    program: list = []

    def emit(node: Formula, _):
        if isinstance(node, Atom):
            program.append(vocab.index_of(ground_atom_of(node)))
        elif isinstance(node, Not):
            program.append(None)
        elif isinstance(node, QUANTIFIERS):
            raise TypeError(f"Not a quantifier-free formula: {node!r}")
        else:
            program.append(_CONNECTIVES[type(node)])

    _fold(f, _children, emit)

    def run(bits: Tuple[int, ...]) -> int:
        stack: List[int] = []
        for step in program:
            if step is None:
                stack[-1] = 1 - stack[-1]
            elif type(step) is int:
                stack.append(bits[step])
            else:
                right = stack.pop()
                stack[-1] = step(stack[-1], right)
        return stack[0]

    return run


@lru_cache(maxsize=4096)
def compile_formula(f: Formula, vocab: Vocabulary) -> Evaluator:
    return _compile(ground(f, vocab), vocab)


def evaluate(f: Formula, m: Model) -> int:
    return compile_formula(f, m.vocab)(m.bits)


def check_formula(f: Formula, vocab: Vocabulary):
    """Raise when ``f`` is open or mentions atoms outside ``vocab``."""
    unbound = free_variables(f)
    if unbound:
        raise UnboundVariableError(f"Unbound variable {sorted(unbound)[0]} in {pretty(f)}")
    try:
        compile_formula(f, vocab)
    except VocabularyError as e:
        raise VocabularyError(f"{pretty(f)} does not fit the vocabulary: {e}") from e


def count_true(formulas: Iterable[Formula], m: Model) -> int:
    return sum(evaluate(f, m) for f in formulas)


# Binding strength used by the printer; quantifier bodies extend to the right,
# so a quantifier is treated as the loosest construct.
_PRECEDENCE = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6, Forall: 0, Exists: 0}
_SYMBOLS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}

Placed = Tuple[Formula, int]


def _placed_children(item: Placed) -> Tuple[Placed, ...]:
    node, _ = item
    children = _children(node)
    if isinstance(node, QUANTIFIERS):
        return ((node.body, 0),)
    prec = _PRECEDENCE[type(node)]
    if isinstance(node, Implies):
        return ((node.left, prec + 1), (node.right, prec))
    if isinstance(node, BINARY):
        return ((node.left, prec), (node.right, prec + 1))
    return tuple((child, prec) for child in children)


def _render(item: Placed, inner: List[str]) -> str:
    node, min_prec = item
    if isinstance(node, Atom):
        text = node.symbol if not node.args else f"{node.symbol}({','.join(str(t) for t in node.args)})"
    elif isinstance(node, Not):
        text = "!" + inner[0]
    elif isinstance(node, QUANTIFIERS):
        keyword = "forall" if isinstance(node, Forall) else "exists"
        text = f"{keyword} {node.var}. {inner[0]}"
    else:
        text = f"{inner[0]} {_SYMBOLS[type(node)]} {inner[1]}"
    if _PRECEDENCE[type(node)] < min_prec:
        return f"({text})"
    return text


def pretty(f: Formula) -> str:
    return _fold((f, 0), _placed_children, _render)
