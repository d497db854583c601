"""Tests for monadic G∼-algebras - attachment, (C), filters, congruences and classification"""

import json
from dataclasses import replace

import numpy as np
import pytest

from src.algebra import FiniteGAlgebra, SubalgebraWitness, direct_product, fixed_points, make_chain
from src.config import configure
from src.errors import InvalidInputError, PreconditionError, SizeBoundError, StructuralError
from src.functional import make_functional
from src.monadic import (
    CongruenceRelation,
    FilterSet,
    MonadicGAlgebra,
    algebra_to_dict,
    attach_quantifiers,
    brute_force_congruences,
    c_witness,
    classify_cmg,
    cmg_equivalences,
    congruence_from_filter,
    discriminator_eval,
    discriminator_table,
    embed_with_fixed_point,
    enumerate_m_rel_complete,
    enumerate_monadic_regular_filters,
    fep_shrink,
    filter_of_congruence,
    is_congruence,
    is_m_relatively_complete,
    is_subdirectly_irreducible,
    load_algebra,
    m_rel_complete_failure,
    monadic_regular_filter_generated,
    range_coordinate_report,
    range_regular_filters,
    satisfies_C,
    save_algebra,
    validate_monadic,
)

from .conftest import chain_shapes, monadic_algebras


@pytest.fixture
def heyting_product():
    """C_3 × C_2 with ∼ replaced by the identity, so only the lattice structure matters"""
    return replace(direct_product([make_chain(3), make_chain(2)], validate=False), sim=np.arange(6))


class TestRelativeCompleteness:
    """Test m-relative completeness and enumeration"""

    def test_diagonal(self, c3_squared):
        assert is_m_relatively_complete(c3_squared, SubalgebraWitness(c3_squared, [0, 4, 8]))

    def test_bounds(self, c3_squared):
        assert is_m_relatively_complete(c3_squared, SubalgebraWitness(c3_squared, [0, 8]))

    def test_chain_range_failing_s2_prime(self, heyting_product):
        # (d,1) ∨ (1,0) = 1 with neither side equal to 1
        C = SubalgebraWitness(heyting_product, [0, 3, 5])
        assert m_rel_complete_failure(heyting_product, C) == ('s2-prime', (3, 4))
        assert not is_m_relatively_complete(heyting_product, C)

    def test_attach_refuses_with_clause(self, heyting_product):
        with pytest.raises(PreconditionError) as exc:
            attach_quantifiers(heyting_product, SubalgebraWitness(heyting_product, [0, 3, 5]), validate=False)
        assert exc.value.clause == 's2-prime'
        assert exc.value.to_dict()['witness'] == [3, 4]

    def test_not_a_subalgebra(self, c3):
        with pytest.raises(StructuralError):
            is_m_relatively_complete(c3, SubalgebraWitness(c3, [0, 1]))

    def test_enumerate_three_chain(self, c3):
        found = {C.elements for C in enumerate_m_rel_complete(c3)}
        assert found == {(0, 2), (0, 1, 2)}

    def test_enumerate_two_chain(self, c2):
        assert [C.elements for C in enumerate_m_rel_complete(c2)] == [(0, 1)]

    def test_enumerate_square_chains(self, c3_squared):
        found = {C.elements for C in enumerate_m_rel_complete(c3_squared, totally_ordered_only=True)}
        assert (0, 4, 8) in found
        assert (0, 8) in found
        assert all(SubalgebraWitness(c3_squared, c).is_chain for c in found)

    def test_enumerate_square_includes_whole(self, c3_squared):
        found = {C.elements for C in enumerate_m_rel_complete(c3_squared)}
        assert tuple(range(9)) in found

    def test_size_guard(self, c3_squared):
        configure(max_enumeration_size=8)
        with pytest.raises(SizeBoundError):
            enumerate_m_rel_complete(c3_squared)


class TestAttachQuantifiers:
    """Test quantifier attachment and validation"""

    def test_bounds_range(self, c3_bounds):
        assert int(c3_bounds.exists[1]) == 2
        assert int(c3_bounds.forall[1]) == 0

    def test_full_range_is_identity(self, c3_full):
        assert list(c3_full.exists) == [0, 1, 2]
        assert list(c3_full.forall) == [0, 1, 2]
        assert c3_full.validated

    def test_diagonal_quantifiers(self, diagonal_algebra):
        for a in range(3):
            for b in range(3):
                x = 3 * a + b
                assert diagonal_algebra.exists[x] == 4 * max(a, b)
                assert diagonal_algebra.forall[x] == 4 * min(a, b)

    def test_diagonal_validates(self, diagonal_algebra):
        assert validate_monadic(diagonal_algebra).passed

    def test_four_chain_bounds_validates(self, c4_bounds):
        report = validate_monadic(c4_bounds)
        assert report.passed
        assert report.family('M2')

    def test_q_fails(self, c3):
        M = MonadicGAlgebra(c3, exists=[0, 1, 2], forall=[0, 0, 0])
        report = validate_monadic(M)
        assert not report.family('Q')
        assert not report.passed

    def test_range(self, diagonal_algebra):
        assert diagonal_algebra.range == (0, 4, 8)
        assert diagonal_algebra.range_witness.is_chain

    def test_round_trip_file(self, diagonal_algebra, tmp_path):
        path = save_algebra(diagonal_algebra, tmp_path / "d1.json")
        loaded = load_algebra(path)
        assert isinstance(loaded, MonadicGAlgebra)
        assert loaded.same_tables(diagonal_algebra)

    def test_load_plain_algebra(self, c3, tmp_path):
        path = tmp_path / "c3.json"
        path.write_text(json.dumps(algebra_to_dict(c3)))
        assert not isinstance(load_algebra(path), MonadicGAlgebra)

    def test_load_missing_forall(self, c3):
        data = c3.to_dict()
        data['exists'] = [0, 1, 2]
        with pytest.raises(InvalidInputError):
            load_algebra(data)

    def test_load_unreadable(self, tmp_path):
        with pytest.raises(InvalidInputError):
            load_algebra(tmp_path / "missing.json")


class TestConditionC:
    """Test condition (C)"""

    def test_fixed_point_in_range(self, c3_full):
        assert satisfies_C(c3_full)
        assert c3_full.satisfies_c is True
        assert c_witness(c3_full) is None

    def test_bounds_range_on_square(self, bounds_algebra):
        assert not satisfies_C(bounds_algebra)
        x = c_witness(bounds_algebra)
        A = bounds_algebra.base
        assert bounds_algebra.exists[A.meet[x, A.sim[x]]] == A.top
        assert bounds_algebra.forall[A.join[x, A.sim[x]]] == A.bottom

    def test_boolean(self, c2_full):
        assert satisfies_C(c2_full)

    def test_equivalences(self, diagonal_algebra, c4_full):
        assert all(cmg_equivalences(diagonal_algebra).values())
        assert all(cmg_equivalences(c4_full).values())


class TestFilters:
    """Test monadic regular filters"""

    def test_generated_from_top(self, c3_full):
        F = monadic_regular_filter_generated(c3_full, {2})
        assert F.elements == (2,)

    def test_generated_from_fixed_point(self, c3_full):
        F = monadic_regular_filter_generated(c3_full, {1})
        assert F.elements == (0, 1, 2)

    def test_generated_empty(self, c3_full):
        with pytest.raises(InvalidInputError):
            monadic_regular_filter_generated(c3_full, set())

    def test_generated_matches_least_filter(self, c4):
        M = make_functional(c4, 2)
        lattice = enumerate_monadic_regular_filters(M)
        x = 4 * 3 + 1  # (1, a)
        containing = [set(f.elements) for f in lattice.filters if x in f.elements]
        least = set.intersection(*containing)
        assert set(monadic_regular_filter_generated(M, {x}).elements) == least

    def test_bounds_range_filters(self, c3_bounds):
        lattice = enumerate_monadic_regular_filters(c3_bounds)
        assert [f.elements for f in lattice.filters] == [(0, 1, 2), (2,)]
        assert lattice.range_filters == ((0, 2), (2,))
        assert lattice.verified

    def test_diagonal_is_simple(self, diagonal_algebra):
        lattice = enumerate_monadic_regular_filters(diagonal_algebra)
        assert len(lattice.filters) == 2
        assert lattice.verified

    def test_product_full_range(self, product_full):
        lattice = enumerate_monadic_regular_filters(product_full)
        assert len(lattice.filters) == 4
        assert lattice.verified

    def test_filter_flags(self, c3_full):
        F = FilterSet.of(c3_full, [1, 2])
        assert F.is_filter
        assert not F.is_regular
        assert not F.is_monadic_regular

    def test_negative_elements_rejected(self, c3_full):
        with pytest.raises(InvalidInputError):
            FilterSet.of(c3_full, [-1, 2])
        with pytest.raises(InvalidInputError):
            monadic_regular_filter_generated(c3_full, {-1})
        with pytest.raises(InvalidInputError):
            monadic_regular_filter_generated(c3_full, {3})

    def test_range_filters_without_lattice(self, c3_bounds, diagonal_algebra):
        configure(max_enumeration_size=2)
        assert range_regular_filters(c3_bounds) == ((0, 2), (2,))
        assert len(range_regular_filters(diagonal_algebra)) == 2


class TestCongruences:
    """Test congruences from filters against the partition oracle"""

    def test_top_filter_gives_identity(self, c3_full):
        theta = congruence_from_filter(c3_full, FilterSet.of(c3_full, [2]))
        assert theta.is_identity

    def test_whole_filter_gives_total(self, c3_full):
        theta = congruence_from_filter(c3_full, FilterSet.of(c3_full, [0, 1, 2]))
        assert theta.is_total
        assert filter_of_congruence(c3_full, theta).elements == (0, 1, 2)

    def test_non_regular_filter(self, c3_full):
        with pytest.raises(PreconditionError) as exc:
            congruence_from_filter(c3_full, FilterSet.of(c3_full, [1, 2]))
        assert exc.value.clause == 'monadic-regular'

    @pytest.mark.parametrize("fixture", ["c3_full", "c4_bounds", "c4_full", "c2_full"])
    def test_filters_match_oracle(self, fixture, request):
        M = request.getfixturevalue(fixture)
        from_filters = {congruence_from_filter(M, F).labels for F in enumerate_monadic_regular_filters(M).filters}
        oracle = {t.labels for t in brute_force_congruences(M)}
        assert from_filters == oracle

    @pytest.mark.slow
    def test_diagonal_matches_oracle(self, diagonal_algebra):
        from_filters = {
            congruence_from_filter(diagonal_algebra, F).labels
            for F in enumerate_monadic_regular_filters(diagonal_algebra).filters
        }
        assert from_filters == {t.labels for t in brute_force_congruences(diagonal_algebra)}

    def test_oracle_cap(self, diagonal_algebra):
        configure(max_congruence_oracle=4)
        with pytest.raises(SizeBoundError):
            brute_force_congruences(diagonal_algebra)

    def test_is_congruence(self, c4_bounds):
        assert is_congruence(c4_bounds, [0, 0, 0, 0])
        assert not is_congruence(c4_bounds, [0, 0, 1, 1])

    def test_relation_blocks(self, c3_full):
        theta = CongruenceRelation.from_labels(c3_full, [5, 5, 7])
        assert theta.labels == (0, 0, 1)
        assert theta.blocks == ((0, 1), (2,))
        assert theta.block_of(1) == (0, 1)


class TestSubdirectIrreducibility:
    """Test s.i. detection and the discriminator"""

    def test_diagonal(self, diagonal_algebra):
        report = is_subdirectly_irreducible(diagonal_algebra)
        assert report.si and report.simple
        assert report.agree

    def test_product_full_range(self, product_full):
        report = is_subdirectly_irreducible(product_full)
        assert not report.si
        assert not report.range_chain
        assert report.agree

    def test_boolean(self, c2_full):
        assert is_subdirectly_irreducible(c2_full).si

    def test_discriminator_cases(self, c3_full):
        assert discriminator_eval(c3_full, 1, 1, 0) == 0
        assert discriminator_eval(c3_full, 1, 2, 0) == 1

    def test_discriminator_table(self, c4_bounds):
        table = discriminator_table(c4_bounds)
        for x in range(4):
            for y in range(4):
                for z in range(4):
                    assert table[x, y, z] == (z if x == y else x)

    def test_discriminator_needs_si(self, product_full):
        with pytest.raises(PreconditionError) as exc:
            discriminator_eval(product_full, 0, 1, 2)
        assert exc.value.clause == 'subdirectly-irreducible'

    def test_discriminator_rejects_negative_elements(self, c3_full):
        with pytest.raises(InvalidInputError):
            discriminator_eval(c3_full, -1, 0, 0)

    def test_range_chain_decides_si(self, diagonal_algebra, product_full):
        assert diagonal_algebra.si
        assert not product_full.si
        assert is_subdirectly_irreducible(diagonal_algebra).range_chain


class TestClassification:
    """Test CMG∼ classification"""

    def test_diagonal(self, diagonal_algebra):
        result = classify_cmg(diagonal_algebra)
        assert result.cmg_criterion is True
        assert result.cmg_direct is True
        assert result.fixed_point_label == '(d,d)'
        assert result.parity == 'odd'
        assert result.chains == (3, 3)

    def test_bounds_on_square(self, bounds_algebra):
        result = classify_cmg(bounds_algebra)
        assert result.si
        assert result.cmg_criterion is False
        assert result.cmg_direct is False
        assert result.agree

    def test_four_chain_cover_witness(self, c4_full):
        result = classify_cmg(c4_full)
        assert result.fixed_point is None
        assert result.parity == 'even'
        assert result.cmg_criterion is True
        assert result.witness == 1
        assert result.agree

    def test_four_chain_bounds(self, c4_bounds):
        result = classify_cmg(c4_bounds)
        assert result.cmg_criterion is False
        assert result.cmg_direct is False

    def test_not_si(self, product_full):
        result = classify_cmg(product_full)
        assert result.cmg_criterion is None
        assert result.agree is None
        assert result.to_dict()['si'] is False

    def test_no_filter_lattice_needed(self, diagonal_algebra):
        configure(max_enumeration_size=4)
        result = classify_cmg(diagonal_algebra)
        assert result.si and result.simple
        assert result.cmg_criterion is True

    def test_large_power(self):
        A = direct_product([make_chain(3)] * 4)
        result = classify_cmg(attach_quantifiers(A, SubalgebraWitness(A, [0, 40, 80]), validate=False))
        assert result.si
        assert result.cmg_criterion is True
        assert result.agree

    def test_trivial_algebra(self):
        A = FiniteGAlgebra(size=1, meet=[[0]], join=[[0]], imp=[[0]], sim=[0], bottom=0, top=0)
        result = classify_cmg(MonadicGAlgebra(A, exists=[0], forall=[0]))
        assert result.parity == 'trivial'
        assert result.chains == ()
        assert not result.si
        assert result.cmg_criterion is None

    def test_range_coordinates(self, diagonal_algebra):
        report = range_coordinate_report(diagonal_algebra)
        assert report['top_coordinate_forces_top']
        assert report['fixed_coordinate_forces_fixed']
        assert report['projections_injective'] == [True, True]


class TestConstructions:
    """Test the finite shrink and the fixed-point extension"""

    def test_shrink_whole_universe(self, c5_mid):
        result = fep_shrink(c5_mid, range(5))
        assert result.algebra.size == 5
        assert result.embedding == (0, 1, 2, 3, 4)
        assert result.algebra.same_tables(c5_mid)
        assert result.forall_agrees and result.exists_agrees

    def test_shrink_around_one_element(self, c5_mid):
        result = fep_shrink(c5_mid, {1})
        assert result.embedding == (0, 1, 3, 4)
        assert result.algebra.range == (0, 3)
        # ∀e3 = d and ∃e1 = d fall outside the subalgebra
        assert result.forall_checked == 3
        assert result.exists_checked == 3
        assert result.forall_agrees and result.exists_agrees
        assert result.si

    def test_shrink_with_forall_image(self, c5_mid):
        result = fep_shrink(c5_mid, {3, 2})
        k = result.embedding.index(3)
        assert result.embedding[result.algebra.forall[k]] == 2

    def test_extension_of_cover_chain(self, c4_full):
        ext = embed_with_fixed_point(c4_full)
        assert ext.algebra.size == 5
        assert ext.embedding == (0, 1, 3, 4)
        assert ext.algebra.base.label(ext.fixed_point) == '(d)'
        assert ext.preserves_operations
        assert ext.preserves_quantifiers
        assert ext.verified

    def test_extension_without_c(self, c4_bounds):
        ext = embed_with_fixed_point(c4_bounds)
        assert ext.preserves_operations
        assert not ext.source_satisfies_c
        assert not ext.preserves_quantifiers
        # ∃a = 1 in the source, ∃a = d in the extension
        assert int(ext.algebra.exists[ext.embedding[1]]) == ext.fixed_point
        assert ext.result_cmg
        assert ext.verified

    def test_extension_of_boolean_cube(self):
        # 16 elements extend to 81, above the default enumeration bound
        A = direct_product([make_chain(2)] * 4)
        ext = embed_with_fixed_point(attach_quantifiers(A, SubalgebraWitness(A, [0, 15])))
        assert ext.algebra.size == 81
        assert ext.algebra.range == (0, 40, 80)
        assert ext.result_si
        assert ext.result_cmg
        assert ext.preserves_quantifiers
        assert ext.verified

    def test_extension_with_fixed_point(self, c3_bounds):
        ext = embed_with_fixed_point(c3_bounds)
        assert ext.algebra.size == 3
        assert ext.embedding == (0, 1, 2)
        assert ext.algebra.range == (0, 1, 2)
        assert ext.to_dict()['verified']


class TestExhaustiveSweeps:
    """Sweep every monadic algebra on small products of chains"""

    @pytest.mark.slow
    @pytest.mark.parametrize("n,r", [(n, r) for n in (2, 3, 4) for r in (1, 2, 3) if n ** r <= 64])
    def test_diagonal_and_bounds_on_powers(self, n, r):
        A = direct_product([make_chain(n)] * r)
        step = sum(n ** k for k in range(r))
        for elements in ([i * step for i in range(n)], [A.bottom, A.top]):
            C = SubalgebraWitness(A, elements)
            assert is_m_relatively_complete(A, C)
            M = attach_quantifiers(A, C, validate=False)
            report = validate_monadic(M)
            for family in ('M1', 'M2', 'M3', 'M4', 'N', 'Q'):
                assert report.family(family)

    def test_bounds_on_square_fails_at_fixed_point(self, bounds_algebra):
        A = bounds_algebra.base
        assert not satisfies_C(bounds_algebra)
        assert bounds_algebra.exists[A.meet[4, A.sim[4]]] == A.top
        assert bounds_algebra.forall[A.join[4, A.sim[4]]] == A.bottom

    def test_chain_shapes(self):
        assert chain_shapes(8) == [(2,), (3,), (2, 2), (4,), (5,), (3, 2), (6,), (7,), (2, 2, 2), (4, 2), (8,)]

    @pytest.mark.slow
    def test_filter_correspondence_up_to_27(self):
        for shape, M in monadic_algebras(27):
            lattice = enumerate_monadic_regular_filters(M)
            assert lattice.verified, shape
            assert len(lattice.filters) == len(range_regular_filters(M))

    @pytest.mark.slow
    def test_filters_match_oracle_up_to_9(self):
        for shape, M in monadic_algebras(9):
            from_filters = {
                congruence_from_filter(M, F).labels for F in enumerate_monadic_regular_filters(M).filters
            }
            assert from_filters == {t.labels for t in brute_force_congruences(M)}, shape

    @pytest.mark.slow
    def test_si_characterizations_up_to_16(self):
        for shape, M in monadic_algebras(16):
            report = is_subdirectly_irreducible(M)
            assert report.agree, shape
            assert report.si == M.si

    @pytest.mark.slow
    def test_discriminator_up_to_27(self):
        for shape, M in monadic_algebras(27):
            if not M.si:
                continue
            I = M.base.indices
            x, y, z = I[:, None, None], I[None, :, None], I[None, None, :]
            expected = np.where(x == y, z, x)
            assert np.array_equal(discriminator_table(M), expected), shape

    @pytest.mark.slow
    def test_classification_matches_condition_c_up_to_16(self):
        for shape, M in monadic_algebras(16):
            if not M.si:
                continue
            result = classify_cmg(M)
            assert result.agree, shape
            if len({n % 2 for n in shape}) > 1:
                assert result.parity == 'mixed'
                assert not satisfies_C(M)

    @pytest.mark.slow
    def test_fixed_point_extension_up_to_16(self):
        for shape, M in monadic_algebras(16):
            if not M.si or fixed_points(M.base):
                continue
            ext = embed_with_fixed_point(M)
            assert ext.verified, shape
            assert ext.result_si and ext.result_cmg
            assert ext.algebra.base.sim[ext.fixed_point] == ext.fixed_point
            if ext.source_satisfies_c:
                assert ext.preserves_quantifiers, shape
