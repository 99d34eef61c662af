"""Vocabularies and models.

A vocabulary fixes the ground atoms of a finite, function-free language:
every proposition plus every declared predicate applied to every tuple of
constants. Its canonical atom order (propositions in declaration order,
then predicate atoms sorted by predicate name and argument tuple in
constant-declaration order) fixes the bit layout of a Model and of every
file format.
"""
import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterable, Mapping, NamedTuple, Optional, Tuple

from core.errors import VocabularyError

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
RESERVED = frozenset({"forall", "exists"})


class GroundAtom(NamedTuple):
    name: str
    args: Tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({','.join(self.args)})"


@dataclass(frozen=True)
class Predicate:
    name: str
    arity: int


def _check_identifier(kind: str, name: str):
    if not isinstance(name, str) or not IDENTIFIER.match(name):
        raise VocabularyError(f"Invalid {kind} name: {name!r}")
    if name in RESERVED:
        raise VocabularyError(f"{kind.capitalize()} name {name!r} is a reserved word")


@dataclass(frozen=True)
class Vocabulary:
    propositions: Tuple[str, ...] = ()
    predicates: Tuple[Predicate, ...] = ()
    constants: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'propositions', tuple(self.propositions))
        object.__setattr__(self, 'predicates', tuple(
            p if isinstance(p, Predicate) else Predicate(*p) for p in self.predicates
        ))
        object.__setattr__(self, 'constants', tuple(self.constants))
        self._validate()

    def _validate(self):
        symbols = set()
        for name in self.propositions:
            _check_identifier("proposition", name)
            if name in symbols:
                raise VocabularyError(f"Duplicate symbol: {name}")
            symbols.add(name)
        for predicate in self.predicates:
            _check_identifier("predicate", predicate.name)
            if predicate.name in symbols:
                raise VocabularyError(f"Duplicate symbol: {predicate.name}")
            if not isinstance(predicate.arity, int) or predicate.arity < 1:
                raise VocabularyError(
                    f"Predicate {predicate.name} must have arity >= 1; use a proposition instead"
                )
            symbols.add(predicate.name)
        seen = set()
        for constant in self.constants:
            _check_identifier("constant", constant)
            if constant in seen:
                raise VocabularyError(f"Duplicate constant: {constant}")
            seen.add(constant)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Vocabulary":
        for key in ("propositions", "predicates", "constants"):
            if not isinstance(data.get(key, []), list):
                raise VocabularyError(f"Vocabulary entry {key!r} must be a list")
        try:
            predicates = [
                Predicate(entry["name"], entry["arity"]) for entry in data.get("predicates", [])
            ]
            return cls(
                propositions=tuple(data.get("propositions", [])),
                predicates=tuple(predicates),
                constants=tuple(data.get("constants", [])),
            )
        except (KeyError, TypeError, AttributeError) as e:
            raise VocabularyError(f"Malformed vocabulary: {e}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {
            'propositions': list(self.propositions),
            'predicates': [{'name': p.name, 'arity': p.arity} for p in self.predicates],
            'constants': list(self.constants),
        }

    @cached_property
    def ground_atoms(self) -> Tuple[GroundAtom, ...]:
        atoms = [GroundAtom(name) for name in self.propositions]
        for predicate in sorted(self.predicates, key=lambda p: p.name):
            for args in itertools.product(self.constants, repeat=predicate.arity):
                atoms.append(GroundAtom(predicate.name, tuple(args)))
        return tuple(atoms)

    @cached_property
    def atom_index(self) -> Dict[GroundAtom, int]:
        return {atom: i for i, atom in enumerate(self.ground_atoms)}

    @cached_property
    def atom_names(self) -> Tuple[str, ...]:
        return tuple(str(atom) for atom in self.ground_atoms)

    @cached_property
    def _atoms_by_name(self) -> Dict[str, GroundAtom]:
        return {str(atom): atom for atom in self.ground_atoms}

    @cached_property
    def _arities(self) -> Dict[str, int]:
        arities = {name: 0 for name in self.propositions}
        arities.update({p.name: p.arity for p in self.predicates})
        return arities

    @property
    def atom_count(self) -> int:
        return len(self.ground_atoms)

    def arity_of(self, symbol: str) -> Optional[int]:
        return self._arities.get(symbol)

    def index_of(self, atom: GroundAtom) -> int:
        try:
            return self.atom_index[atom]
        except KeyError:
            raise VocabularyError(f"Ground atom {atom} is not in the vocabulary") from None

    def atom_named(self, name: str) -> GroundAtom:
        """Resolve a display name such as ``blames(a,b)``, ignoring blanks."""
        key = "".join(name.split())
        try:
            return self._atoms_by_name[key]
        except KeyError:
            raise VocabularyError(f"Unknown ground atom: {name}") from None


@dataclass(frozen=True, eq=False)
class Model:
    vocab: Vocabulary
    bits: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != self.vocab.atom_count:
            raise VocabularyError(
                f"Model has {len(bits)} bits but the vocabulary has {self.vocab.atom_count} ground atoms"
            )
        if any(b not in (0, 1) for b in bits):
            raise VocabularyError(f"Model bits must be 0 or 1: {self.bits}")
        object.__setattr__(self, 'bits', bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Model):
            return NotImplemented
        return self.bits == other.bits and (self.vocab is other.vocab or self.vocab == other.vocab)

    def __hash__(self) -> int:
        return hash(self.bits)

    def __lt__(self, other: "Model") -> bool:
        return self.bits < other.bits

    def __repr__(self) -> str:
        return f"Model({self.bitstring()})"

    @classmethod
    def from_bitstring(cls, vocab: Vocabulary, text: str) -> "Model":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise VocabularyError(f"Model bit string must contain only 0 and 1: {text!r}")
        return cls(vocab, tuple(int(ch) for ch in text))

    @classmethod
    def from_assignment(cls, vocab: Vocabulary, assignment: Mapping[str, int]) -> "Model":
        bits = [None] * vocab.atom_count
        for name, value in assignment.items():
            bits[vocab.index_of(vocab.atom_named(name))] = value
        missing = [vocab.atom_names[i] for i, b in enumerate(bits) if b is None]
        if missing:
            raise VocabularyError(f"Assignment is missing atoms: {', '.join(missing)}")
        return cls(vocab, tuple(bits))

    def value(self, atom: GroundAtom) -> int:
        return self.bits[self.vocab.index_of(atom)]

    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)

    def check_vocabulary(self, vocab: Vocabulary):
        if not (self.vocab is vocab or self.vocab == vocab):
            raise VocabularyError("Model belongs to a different vocabulary")


def iter_bit_vectors(width: int) -> Iterable[Tuple[int, ...]]:
    return itertools.product((0, 1), repeat=width)
