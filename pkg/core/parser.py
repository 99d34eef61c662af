"""Recursive descent parser for closed formulae.

Grammar (lowest binding first)::

    formula := iff
    iff     := imp ("<->" imp)*
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary
             | ("forall" | "exists") VAR "."? formula
             | "(" formula ")"
             | atom
    atom    := IDENT | IDENT "(" term ("," term)* ")"

A quantifier body extends as far right as possible. Unicode aliases
(¬ ∧ ∨ → ↔ ∀ ∃) and ``~`` are accepted alongside the ASCII forms.
"""
import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from core.errors import (
    ArityMismatchError,
    FormulaSyntaxError,
    UnboundVariableError,
    UnknownSymbolError,
)
from core.formula import And, Atom, Const, Exists, Forall, Formula, Iff, Implies, Not, Or, Term, Var
from core.vocabulary import Vocabulary

_TOKEN_SPEC = [
    ("WS", r"\s+"),
    ("IFF", r"<->|↔"),
    ("IMP", r"->|→"),
    ("NOT", r"!|~|¬"),
    ("AND", r"&|∧"),
    ("OR", r"\||∨"),
    ("FORALL", r"∀"),
    ("EXISTS", r"∃"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("COMMA", r","),
    ("DOT", r"\."),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))
_KEYWORDS = {"forall": "FORALL", "exists": "EXISTS"}

_DISPLAY = {
    "IFF": "'<->'", "IMP": "'->'", "NOT": "'!'", "AND": "'&'", "OR": "'|'",
    "FORALL": "'forall'", "EXISTS": "'exists'", "LPAREN": "'('", "RPAREN": "')'",
    "COMMA": "','", "DOT": "'.'", "IDENT": "identifier", "EOF": "end of input",
}
_UNARY_START = ("NOT", "FORALL", "EXISTS", "LPAREN", "IDENT")

# parentheses and quantifier bodies recurse; operator chains and negations do not
MAX_NESTING = 100


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        if not match:
            raise FormulaSyntaxError(f"Unexpected character {text[position]!r}", position)
        kind = match.lastgroup
        if kind != "WS":
            value = match.group()
            if kind == "IDENT":
                kind = _KEYWORDS.get(value, kind)
            tokens.append(Token(kind, value, position))
        position = match.end()
    tokens.append(Token("EOF", "", len(text)))
    return tokens


class Parser:
    def __init__(self, text: str, vocab: Vocabulary):
        self.text = text
        self.vocab = vocab
        self.tokens = tokenize(text)
        self.index = 0
        self.depth = 0
        self._bound: List[str] = []

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _accept(self, kind: str) -> Optional[Token]:
        if self.current.kind == kind:
            return self._advance()
        return None

    def _expect(self, *kinds: str) -> Token:
        if self.current.kind in kinds:
            return self._advance()
        raise self._error(kinds)

    def _error(self, expected: Sequence[str]) -> FormulaSyntaxError:
        token = self.current
        found = "end of input" if token.kind == "EOF" else repr(token.text)
        return FormulaSyntaxError(
            f"Unexpected {found}", token.position, [_DISPLAY[k] for k in expected]
        )

    def parse(self) -> Formula:
        formula = self._iff()
        if self.current.kind != "EOF":
            raise self._error(("IFF", "IMP", "OR", "AND", "EOF"))
        return formula

    def _iff(self) -> Formula:
        if self.depth >= MAX_NESTING:
            raise FormulaSyntaxError(
                f"Formula is nested more than {MAX_NESTING} levels deep", self.current.position
            )
        self.depth += 1
        try:
            left = self._imp()
            while self._accept("IFF"):
                left = Iff(left, self._imp())
            return left
        finally:
            self.depth -= 1

    def _imp(self) -> Formula:
        operands = [self._or()]
        while self._accept("IMP"):
            operands.append(self._or())
        right = operands.pop()
        while operands:
            right = Implies(operands.pop(), right)
        return right

    def _or(self) -> Formula:
        left = self._and()
        while self._accept("OR"):
            left = Or(left, self._and())
        return left

    def _and(self) -> Formula:
        left = self._unary()
        while self._accept("AND"):
            left = And(left, self._unary())
        return left

    def _unary(self) -> Formula:
        negations = 0
        while self._accept("NOT"):
            negations += 1
        operand = self._operand()
        for _ in range(negations):
            operand = Not(operand)
        return operand

    def _operand(self) -> Formula:
        token = self.current
        if token.kind in ("FORALL", "EXISTS"):
            return self._quantified()
        if self._accept("LPAREN"):
            inner = self._iff()
            self._expect("RPAREN")
            return inner
        if token.kind == "IDENT":
            return self._atom()
        raise self._error(_UNARY_START)

    def _quantified(self) -> Formula:
        keyword = self._advance()
        var = self._expect("IDENT")
        if var.text in self.vocab.constants:
            raise FormulaSyntaxError(
                f"Variable {var.text!r} clashes with a declared constant", var.position
            )
        self._accept("DOT")
        self._bound.append(var.text)
        try:
            body = self._iff()
        finally:
            self._bound.pop()
        node = Forall if keyword.kind == "FORALL" else Exists
        return node(var.text, body)

    def _atom(self) -> Formula:
        name = self._advance()
        arity = self.vocab.arity_of(name.text)
        if arity is None:
            raise UnknownSymbolError(f"Unknown symbol {name.text!r} at position {name.position}")
        args: Tuple[Term, ...] = ()
        if self._accept("LPAREN"):
            terms = [self._term()]
            while self._accept("COMMA"):
                terms.append(self._term())
            self._expect("RPAREN", "COMMA")
            args = tuple(terms)
        if len(args) != arity:
            raise ArityMismatchError(
                f"{name.text} expects {arity} argument(s) but got {len(args)} at position {name.position}"
            )
        return Atom(name.text, args)

    def _term(self) -> Term:
        token = self._expect("IDENT")
        if token.text in self._bound:
            return Var(token.text)
        if token.text in self.vocab.constants:
            return Const(token.text)
        raise UnboundVariableError(
            f"Unbound variable {token.text!r} at position {token.position}"
        )


def parse(text: str, vocab: Vocabulary) -> Formula:
    return Parser(text, vocab).parse()


def parse_many(texts: Sequence[str], vocab: Vocabulary) -> Tuple[Formula, ...]:
    return tuple(parse(text, vocab) for text in texts)
