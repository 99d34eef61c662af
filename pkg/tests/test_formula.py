import pytest
from hypothesis import given
from hypothesis import strategies as st

from core.errors import (
    ArityMismatchError,
    FormulaSyntaxError,
    GroundingError,
    UnboundVariableError,
    UnknownSymbolError,
    VocabularyError,
)
from core.formula import (
    And,
    Atom,
    Const,
    Exists,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    atom,
    check_formula,
    evaluate,
    free_variables,
    ground,
    pretty,
    prop,
)
from core.parser import parse, tokenize
from core.vocabulary import GroundAtom, Model, Predicate, Vocabulary

from tests.strategies import formulas, models, vocabularies

BLAME = Vocabulary(predicates=(Predicate("blames", 2),), constants=("a", "b"))

rain, wet = prop("rain"), prop("wet")


def holds(f, m, scope=None):
    """Textbook truth definition, quantifiers read directly over the constants."""
    scope = scope or {}
    if isinstance(f, Atom):
        return m.value(GroundAtom(f.symbol, tuple(
            scope[t.name] if isinstance(t, Var) else t.name for t in f.args
        )))
    if isinstance(f, Not):
        return 1 - holds(f.operand, m, scope)
    if isinstance(f, (Forall, Exists)):
        values = [holds(f.body, m, {**scope, f.var: c}) for c in m.vocab.constants]
        return int(all(values) if isinstance(f, Forall) else any(values))
    left, right = holds(f.left, m, scope), holds(f.right, m, scope)
    return {And: left & right, Or: left | right, Implies: (1 - left) | right,
            Iff: int(left == right)}[type(f)]


class TestParser:
    def test_precedence(self, f):
        assert f("!rain & wet | rain -> wet <-> rain") == Iff(
            Implies(Or(And(Not(rain), wet), rain), wet), rain
        )

    def test_implication_is_right_associative(self, f):
        assert f("rain -> wet -> rain") == Implies(rain, Implies(wet, rain))

    def test_conjunction_is_left_associative(self, f):
        assert f("rain & wet & rain") == And(And(rain, wet), rain)

    def test_unicode_aliases(self, f):
        assert f("¬rain ∧ wet → rain ∨ wet ↔ wet") == f("!rain & wet -> rain | wet <-> wet")
        assert f("~rain") == Not(rain)

    def test_parentheses(self, f):
        assert f("!(rain & wet)") == Not(And(rain, wet))

    def test_quantifier(self):
        assert parse("forall x. blames(x,a)", BLAME) == Forall("x", Atom("blames", (Var("x"), Const("a"))))

    def test_quantifier_body_extends_right(self):
        parsed = parse("exists x. blames(x,a) & blames(a,x)", BLAME)
        assert isinstance(parsed, Exists)
        assert isinstance(parsed.body, And)

    def test_quantifier_dot_is_optional(self):
        assert parse("∀x blames(x,a)", BLAME) == parse("forall x. blames(x,a)", BLAME)

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatchError):
            parse("blames(a)", BLAME)

    def test_unknown_symbol(self, f):
        with pytest.raises(UnknownSymbolError):
            f("snow")

    def test_unbound_variable(self):
        with pytest.raises(UnboundVariableError):
            parse("blames(x,a)", BLAME)

    def test_variable_clashing_with_constant(self):
        with pytest.raises(FormulaSyntaxError):
            parse("forall a. blames(a,a)", BLAME)

    @pytest.mark.parametrize("text, position", [
        ("rain &", 6),
        ("rain wet", 5),
        ("(rain", 5),
        ("rain $ wet", 5),
    ])
    def test_syntax_error_reports_position(self, f, text, position):
        with pytest.raises(FormulaSyntaxError) as err:
            f(text)
        assert err.value.position == position
        assert f"position {position}" in str(err.value)

    def test_syntax_error_lists_expected_tokens(self, f):
        with pytest.raises(FormulaSyntaxError) as err:
            f("rain &")
        assert "identifier" in err.value.expected

    def test_keywords_are_tokens(self):
        kinds = [t.kind for t in tokenize("forall x. exists y. p")]
        assert kinds[:2] == ["FORALL", "IDENT"]
        assert "EXISTS" in kinds


class TestGrounding:
    def test_forall_becomes_conjunction(self):
        grounded = ground(parse("forall x. blames(x,a)", BLAME), BLAME)
        assert grounded == And(atom("blames", "a", "a"), atom("blames", "b", "a"))

    def test_exists_becomes_disjunction(self):
        grounded = ground(parse("exists x. blames(x,b)", BLAME), BLAME)
        assert grounded == Or(atom("blames", "a", "b"), atom("blames", "b", "b"))

    def test_no_constants(self):
        vocab = Vocabulary(predicates=(Predicate("p", 1),))
        with pytest.raises(GroundingError):
            ground(Forall("x", Atom("p", (Var("x"),))), vocab)

    def test_open_formula_is_rejected(self):
        with pytest.raises(UnboundVariableError):
            check_formula(Atom("blames", (Var("x"), Const("a"))), BLAME)

    def test_formula_outside_vocabulary(self, weather_vocab):
        with pytest.raises(VocabularyError):
            check_formula(prop("snow"), weather_vocab)

    def test_free_variables(self):
        body = Atom("blames", (Var("x"), Var("y")))
        assert free_variables(Forall("x", body)) == frozenset({"y"})

    def test_inner_quantifier_shadows_outer(self):
        inner = Exists("x", Atom("blames", (Var("x"), Var("x"))))
        grounded = ground(Forall("x", inner), BLAME)
        reflexive = Or(atom("blames", "a", "a"), atom("blames", "b", "b"))
        assert grounded == And(reflexive, reflexive)

    @given(st.data())
    def test_grounding_preserves_truth(self, data):
        vocab = data.draw(vocabularies())
        formula = data.draw(formulas(vocab, max_depth=4))
        m = data.draw(models(vocab))
        grounded = ground(formula, vocab)
        assert free_variables(grounded) == frozenset()
        assert evaluate(grounded, m) == evaluate(formula, m) == holds(formula, m)


class TestEvaluation:
    def test_atom_in_weather_model(self, weather_vocab):
        assert evaluate(rain, Model(weather_vocab, (1, 1))) == 1

    def test_implication_is_classical(self, weather_vocab, f):
        assert evaluate(f("rain -> wet"), Model(weather_vocab, (1, 0))) == 0
        assert evaluate(f("rain -> wet"), Model(weather_vocab, (0, 0))) == 1

    def test_universal_over_blame_model(self):
        m2 = Model.from_bitstring(BLAME, "1110")
        assert evaluate(parse("forall x. blames(x,a)", BLAME), m2) == 1
        assert evaluate(parse("forall x. blames(x,b)", BLAME), m2) == 0

    def test_iff(self, weather_vocab, f):
        assert evaluate(f("rain <-> wet"), Model(weather_vocab, (0, 0))) == 1
        assert evaluate(f("rain <-> wet"), Model(weather_vocab, (0, 1))) == 0

    def test_operator_sugar(self):
        assert ~rain & wet >> rain == And(Not(rain), Implies(wet, rain))


class TestPretty:
    def test_minimal_parentheses(self, f):
        assert pretty(f("(rain & wet) | !rain")) == "rain & wet | !rain"
        assert pretty(f("(rain -> wet) -> rain")) == "(rain -> wet) -> rain"
        assert pretty(f("!(rain | wet)")) == "!(rain | wet)"

    def test_quantifier_rendering(self):
        assert pretty(parse("!forall x. blames(x,a)", BLAME)) == "!(forall x. blames(x,a))"

    @given(st.data())
    def test_round_trip(self, data):
        vocab = data.draw(vocabularies())
        formula = data.draw(formulas(vocab, max_depth=4))
        assert parse(pretty(formula), vocab) == formula



class TestDeepNesting:
    def test_long_conjunction(self, weather_vocab, f):
        formula = f(" & ".join(["rain"] * 1500))
        assert evaluate(formula, Model(weather_vocab, (1, 0))) == 1
        assert evaluate(formula, Model(weather_vocab, (0, 1))) == 0
        assert pretty(formula).count("&") == 1499

    def test_long_negation_chain(self, weather_vocab, f):
        text = "!" * 401 + "rain"
        formula = f(text)
        assert evaluate(formula, Model(weather_vocab, (1, 0))) == 0
        assert pretty(formula) == text
        assert free_variables(formula) == frozenset()

    def test_long_implication_chain(self, weather_vocab, f):
        formula = f(" -> ".join(["wet"] * 1200))
        assert isinstance(formula.right, Implies)
        assert evaluate(formula, Model(weather_vocab, (0, 0))) == 1

    def test_deep_formulas_hash_and_compare(self, f):
        text = " | ".join(["wet"] * 3000)
        first, second = f(text), f(text)
        assert first is not second
        assert first == second
        assert hash(first) == hash(second)
        assert first != f(text + " | rain")

    def test_long_universal_over_many_constants(self):
        constants = tuple(f"c{i}" for i in range(1500))
        vocab = Vocabulary(predicates=(Predicate("p", 1),), constants=constants)
        formula = parse("forall x. p(x)", vocab)
        assert evaluate(formula, Model(vocab, (1,) * 1500)) == 1
        assert evaluate(formula, Model(vocab, (1,) * 1499 + (0,))) == 0

    def test_excessive_parentheses_are_a_syntax_error(self, f):
        with pytest.raises(FormulaSyntaxError, match="nested") as err:
            f("(" * 500 + "rain" + ")" * 500)
        assert err.value.position == 100

    def test_moderate_parentheses_are_fine(self, f):
        assert f("(" * 50 + "rain" + ")" * 50) == rain
