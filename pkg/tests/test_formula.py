"""Tests for formula parsing and printing"""

import pytest
from hypothesis import given, strategies as st

from src.errors import FormulaSyntaxError
from src.formula import (
    And,
    Bot,
    Box,
    Delta,
    Diamond,
    Imp,
    Neg,
    Or,
    Sim,
    Top,
    Var,
    depth,
    format_formula,
    parse_formula,
    substitute,
    variables,
)

p, q, r = Var('p'), Var('q'), Var('r')

formulas = st.recursive(
    st.sampled_from([p, q, r, Bot(), Top()]),
    lambda inner: st.one_of(
        st.builds(Sim, inner),
        st.builds(Box, inner),
        st.builds(Diamond, inner),
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
        st.builds(Imp, inner, inner),
    ),
    max_leaves=8,
)


class TestParser:
    """Test precedence, associativity and sugar"""

    def test_atoms(self):
        assert parse_formula("p") == p
        assert parse_formula("0") == Bot()
        assert parse_formula("1") == Top()
        assert parse_formula("x_1") == Var('x_1')

    def test_implication_is_right_associative(self):
        assert parse_formula("p -> q -> r") == Imp(p, Imp(q, r))

    def test_conjunction_is_left_associative(self):
        assert parse_formula("p & q & r") == And(And(p, q), r)

    def test_precedence(self):
        assert parse_formula("p | q & r") == Or(p, And(q, r))
        assert parse_formula("p & q -> r | p") == Imp(And(p, q), Or(r, p))
        assert parse_formula("~p & q") == And(Sim(p), q)

    def test_modalities(self):
        assert parse_formula("[]<>p") == Box(Diamond(p))
        assert parse_formula("<>(p | q)") == Diamond(Or(p, q))

    def test_sugar(self):
        assert parse_formula("!p") == Imp(p, Bot())
        assert parse_formula("D p") == Delta(p)
        assert parse_formula("D D p") == Delta(Delta(p))
        assert Delta(p) == Neg(Sim(p))

    def test_identifier_starting_with_d(self):
        assert parse_formula("Dp") == Var('Dp')

    def test_parentheses(self):
        assert parse_formula("(p -> q) -> r") == Imp(Imp(p, q), r)

    @pytest.mark.parametrize("text", ["p &", "(p", "p q", "-> p", "p <-> q"])
    def test_syntax_errors(self, text):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse_formula(text)
        assert isinstance(exc.value.position, int)
        assert exc.value.to_dict()['error'] == 'syntax-error'

    def test_empty(self):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse_formula("   ")
        assert exc.value.position == 0


class TestPrinter:
    """Test the canonical form"""

    def test_nested_unary(self):
        assert format_formula(parse_formula("~~p")) == "~(~p)"

    def test_binary_operands(self):
        assert format_formula(parse_formula("p & q -> r")) == "(p & q) -> r"
        assert str(Box(And(p, q))) == "[](p & q)"

    def test_constants(self):
        assert format_formula(Imp(Bot(), Top())) == "0 -> 1"

    @given(formulas)
    def test_printed_form_parses_back(self, phi):
        assert parse_formula(format_formula(phi)) == phi


class TestHelpers:
    """Test variables, depth and substitution"""

    def test_variables(self):
        assert variables(Imp(q, And(p, q))) == ('p', 'q')
        assert variables([Top(), r, p]) == ('p', 'r')
        assert variables(Bot()) == ()

    def test_depth(self):
        assert depth(p) == 1
        assert depth(parse_formula("[](p & q)")) == 3

    def test_substitute(self):
        phi = parse_formula("p -> q")
        assert substitute(phi, {'p': q, 'q': Box(p)}) == Imp(q, Box(p))
        assert substitute(Top(), {'p': q}) == Top()
