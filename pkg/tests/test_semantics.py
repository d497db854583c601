"""Tests for algebraic and Kripke evaluation"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.algebra import make_chain
from src.errors import InvalidInputError, PreconditionError
from src.formula import Box, Diamond, Var, depth, parse_formula, variables
from src.semantics import (
    KripkeStructure,
    assignment_grid,
    bridge_check,
    decode_assignment,
    eval_algebra,
    eval_kripke,
    evaluate_all,
    kripke_to_algebra,
    random_formula,
    random_kripke,
    tuple_assignment,
    world_values,
)

from .test_formula import formulas

p = Var('p')


@pytest.fixture
def two_worlds(c3):
    """p = d at w1 and 1 at w2"""
    return KripkeStructure(('w1', 'w2'), c3, {'p': (1, 2)})


class TestAlgebraEvaluation:
    """Test eval_algebra and the vectorized evaluator"""

    def test_excluded_middle_fails_at_fixed_point(self, c3_full):
        phi = parse_formula("p | ~p")
        assert eval_algebra(c3_full, {'p': 'd'}, phi) == 1
        assert eval_algebra(c3_full, {'p': 0}, phi) == 2

    def test_quantifiers(self, diagonal_algebra):
        # (d, 1) has index 5
        assert eval_algebra(diagonal_algebra, {'p': 5}, Diamond(p)) == 8
        assert eval_algebra(diagonal_algebra, {'p': 5}, Box(p)) == 4

    def test_pseudocomplement_and_delta(self, c3_full):
        assert eval_algebra(c3_full, {'p': 'd'}, parse_formula("!p")) == 0
        assert eval_algebra(c3_full, {'p': 'd'}, parse_formula("D p")) == 0
        assert eval_algebra(c3_full, {'p': '1'}, parse_formula("D p")) == 2

    def test_unassigned_variable(self, c3_full):
        with pytest.raises(InvalidInputError) as exc:
            eval_algebra(c3_full, {}, parse_formula("p & q"))
        assert exc.value.details['variable'] in ('p', 'q')

    def test_element_out_of_range(self, c3_full):
        with pytest.raises(InvalidInputError):
            eval_algebra(c3_full, {'p': 9}, p)

    def test_assignment_grid_order(self):
        grid = assignment_grid(3, ('p', 'q'))
        assert list(grid['p']) == [0, 0, 0, 1, 1, 1, 2, 2, 2]
        assert list(grid['q']) == [0, 1, 2] * 3
        assert assignment_grid(3, ()) == {}

    def test_evaluate_all(self, c3_full):
        values = evaluate_all(c3_full, parse_formula("p -> p"))
        assert list(values) == [2, 2, 2]
        constant = evaluate_all(c3_full, parse_formula("1"), ('p', 'q'))
        assert constant.shape == (9,)

    def test_evaluate_all_matches_pointwise(self, diagonal_algebra):
        phi = parse_formula("[](p -> q) | <>~p")
        values = evaluate_all(diagonal_algebra, phi)
        for position in range(81):
            assignment = decode_assignment(diagonal_algebra, ('p', 'q'), position)
            assert values[position] == eval_algebra(diagonal_algebra, assignment, phi)

    def test_decode_assignment(self, c3_full):
        assert decode_assignment(c3_full, ('p', 'q'), 5) == {'p': 1, 'q': 2}
        assert decode_assignment(c3_full, (), 0) == {}


class TestKripke:
    """Test Kripke structures and their functional algebras"""

    def test_modalities_are_global(self, two_worlds):
        for world in ('w1', 'w2'):
            assert eval_kripke(two_worlds, world, Diamond(p)) == 2
            assert eval_kripke(two_worlds, world, Box(p)) == 1

    def test_pointwise_connectives(self, two_worlds):
        phi = parse_formula("p | ~p")
        assert eval_kripke(two_worlds, 'w1', phi) == 1
        assert eval_kripke(two_worlds, 1, phi) == 2

    def test_labels_in_valuation(self, c3):
        K = KripkeStructure(['a'], c3, {'p': ['d']})
        assert K.valuation == {'p': (1,)}

    def test_tuple_assignment(self, two_worlds, diagonal_algebra):
        assert tuple_assignment(two_worlds) == {'p': 5}
        M, assignment = kripke_to_algebra(two_worlds)
        assert M.same_tables(diagonal_algebra)
        value = eval_algebra(M, assignment, Box(p))
        assert list(world_values(two_worlds, value)) == [1, 1]

    def test_to_dict(self, two_worlds):
        data = two_worlds.to_dict()
        assert data['valuation'] == {'p': {'w1': 'd', 'w2': '1'}}
        assert data['chain_size'] == 3

    def test_invalid_structures(self, c3, c3_squared):
        with pytest.raises(InvalidInputError):
            KripkeStructure((), c3, {})
        with pytest.raises(InvalidInputError):
            KripkeStructure(('w', 'w'), c3, {})
        with pytest.raises(InvalidInputError):
            KripkeStructure(('w1', 'w2'), c3, {'p': (0,)})
        with pytest.raises(PreconditionError):
            KripkeStructure(('w1',), c3_squared, {'p': (0,)})

    def test_unknown_world(self, two_worlds):
        with pytest.raises(InvalidInputError):
            eval_kripke(two_worlds, 'w3', p)
        with pytest.raises(InvalidInputError):
            eval_kripke(two_worlds, 2, p)

    def test_missing_valuation(self, two_worlds):
        with pytest.raises(InvalidInputError):
            eval_kripke(two_worlds, 'w1', Var('q'))


class TestBridge:
    """Test agreement between the two semantics"""

    def test_seeded_sweep(self):
        report = bridge_check(50, seed=7)
        assert report.passed
        assert report.to_dict()['samples'] == 50

    @pytest.mark.slow
    def test_full_sweep(self):
        report = bridge_check(200, seed=0, max_depth=4, max_vars=3, max_worlds=4, max_chain=5)
        assert report.passed
        assert report.to_dict()['samples'] == 200

    def test_sweep_is_deterministic(self):
        first = bridge_check(10, seed=3).to_dict()
        assert bridge_check(10, seed=3).to_dict() == first

    def test_random_formula_depth(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            phi = random_formula(rng, ('p',), 3)
            assert depth(phi) <= 3
            assert set(variables(phi)) <= {'p'}

    def test_random_kripke(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            K = random_kripke(rng, ('p', 'q'), max_worlds=3, max_chain=4)
            assert 1 <= len(K.worlds) <= 3
            assert 2 <= K.chain.size <= 4
            assert set(K.valuation) == {'p', 'q'}

    @given(formulas, st.data())
    def test_kripke_matches_functional_algebra(self, phi, data):
        width = data.draw(st.integers(min_value=1, max_value=3))
        m = data.draw(st.integers(min_value=2, max_value=4))
        values = st.tuples(*[st.integers(min_value=0, max_value=m - 1)] * width)
        valuation = {name: data.draw(values) for name in ('p', 'q', 'r')}
        K = KripkeStructure(tuple(f"w{i}" for i in range(width)), make_chain(m, validate=False), valuation)
        M, assignment = kripke_to_algebra(K, validate=False)
        value = eval_algebra(M, assignment, phi)
        expected = [eval_kripke(K, w, phi) for w in range(width)]
        assert list(world_values(K, value)) == expected
