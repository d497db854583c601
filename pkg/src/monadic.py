#!/usr/bin/env python3
"""
Monadic G∼-Algebras
Quantifier attachment from m-relatively complete subalgebras, MG∼ validation,
condition (C), monadic regular filters and congruences, subdirect
irreducibility, the discriminator term, CMG∼ classification, and the finite
shrink and fixed-point constructions.
"""

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import (
    FiniteGAlgebra,
    LawCheck,
    SubalgebraWitness,
    ValidationReport,
    decompose_chains,
    direct_product,
    fixed_points,
    frozen_table,
    generated_subalgebra,
    law_check,
    make_chain,
    meet_all,
    relative_bounds,
)
from .config import get_config
from .errors import InvalidInputError, PreconditionError, SizeBoundError, StructuralError

logger = logging.getLogger("gsim.monadic")


@dataclass(eq=False)
class MonadicGAlgebra:
    """
    A G∼-algebra with ∃/∀ tables.

    `validated` records a passed validate_monadic run; `satisfies_c` caches
    the (C) check: True, False or None when not yet evaluated.
    """
    base: FiniteGAlgebra
    exists: np.ndarray
    forall: np.ndarray
    validated: bool = False
    satisfies_c: Optional[bool] = None

    def __post_init__(self):
        n = self.base.size
        self.exists = frozen_table(self.exists, (n,), 'exists', n)
        self.forall = frozen_table(self.forall, (n,), 'forall', n)

    @property
    def size(self) -> int:
        return self.base.size

    @cached_property
    def range(self) -> Tuple[int, ...]:
        """∃A as a sorted tuple of indices"""
        return tuple(int(x) for x in np.unique(self.exists))

    @cached_property
    def range_witness(self) -> SubalgebraWitness:
        return SubalgebraWitness(self.base, self.range)

    @cached_property
    def si(self) -> bool:
        """Subdirect irreducibility by the finite criterion: nontrivial with ∃A a chain"""
        return self.size > 1 and self.range_witness.is_chain

    @cached_property
    def si_report(self) -> "SIReport":
        return is_subdirectly_irreducible(self)

    def label(self, element: int) -> str:
        return self.base.label(element)

    def same_tables(self, other: "MonadicGAlgebra") -> bool:
        return (
            self.base.same_tables(other.base)
            and np.array_equal(self.exists, other.exists)
            and np.array_equal(self.forall, other.forall)
        )

    def to_dict(self) -> Dict[str, Any]:
        data = self.base.to_dict()
        data['exists'] = self.exists.tolist()
        data['forall'] = self.forall.tolist()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MonadicGAlgebra":
        if 'exists' not in data or 'forall' not in data:
            raise InvalidInputError("monadic algebra object needs both 'exists' and 'forall'")
        return cls(FiniteGAlgebra.from_dict(data), data['exists'], data['forall'])

    def __repr__(self):
        return f"MonadicGAlgebra(size={self.size}, range={list(self.range)})"


Algebra = Union[FiniteGAlgebra, MonadicGAlgebra]


def algebra_to_dict(algebra: Algebra) -> Dict[str, Any]:
    return algebra.to_dict()


def load_algebra(source: Union[str, Path, Dict[str, Any]]) -> Algebra:
    """Read the algebra JSON format; monadic when `exists`/`forall` are present"""
    if isinstance(source, dict):
        data = source
    else:
        try:
            data = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InvalidInputError(f"cannot read algebra file {source}: {e}")
    if not isinstance(data, dict):
        raise InvalidInputError("algebra file must hold a JSON object")
    if 'exists' in data or 'forall' in data:
        return MonadicGAlgebra.from_dict(data)
    return FiniteGAlgebra.from_dict(data)


def save_algebra(algebra: Algebra, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(json.dumps(algebra.to_dict(), sort_keys=True) + "\n")
    logger.info(f"Wrote algebra of size {algebra.size} to {path}")
    return path


def _size_guard(size: int, operation: str, bound: Optional[int] = None) -> None:
    bound = get_config().max_enumeration_size if bound is None else bound
    if size > bound:
        logger.warning(f"{operation} refused: {size} elements > bound {bound}")
        raise SizeBoundError(size, bound, operation)


# =============================================================================
# m-relatively complete subalgebras and attachment
# =============================================================================

def m_rel_complete_failure(A: FiniteGAlgebra, C: SubalgebraWitness) -> Optional[Tuple[str, Tuple[int, ...]]]:
    """
    First violated condition as (clause, witness), or None.

    Clauses: 's1-lower'/'s1-upper' (witness (a,)), 's2' (witness (c1, c2, a)),
    's2-prime' (witness (c, a)).

    Raises:
        StructuralError: C is not a subalgebra of A
    """
    C = SubalgebraWitness(A, C.elements).verify()
    lower, upper = relative_bounds(A, C.elements)
    if np.any(lower < 0):
        return 's1-lower', (int(np.flatnonzero(lower < 0)[0]),)
    if np.any(upper < 0):
        return 's1-upper', (int(np.flatnonzero(upper < 0)[0]),)

    e, I, top = C.array, A.indices, A.top
    if C.is_chain:
        joins_to_top = A.join[e[:, None], I[None, :]] == top
        bad = np.argwhere(joins_to_top & (e[:, None] != top) & (I[None, :] != top))
        if bad.size:
            return 's2-prime', (int(e[bad[0][0]]), int(bad[0][1]))
        return None

    # the greatest c3 ≤ a is the best candidate for c3
    c1, c2, a = e[:, None, None], e[None, :, None], I[None, None, :]
    premise = A.leq[c1, A.join[c2, a]]
    conclusion = A.leq[c1, A.join[c2, lower[a]]]
    bad = np.argwhere(premise & ~conclusion)
    if bad.size:
        i, j, x = bad[0]
        return 's2', (int(e[i]), int(e[j]), int(x))
    return None


def is_m_relatively_complete(A: FiniteGAlgebra, C: SubalgebraWitness) -> bool:
    """
    (s1) and (s2) for a subalgebra C of A; (s2′) when C is a chain.

    Raises:
        StructuralError: C is not a subalgebra
    """
    return m_rel_complete_failure(A, C) is None


def enumerate_subalgebras(A: FiniteGAlgebra, chains_only: bool = False) -> List[SubalgebraWitness]:
    """All subalgebras (optionally only totally ordered ones) in lexicographic order"""
    found: Dict[Tuple[int, ...], SubalgebraWitness] = {}
    if A.is_chain:
        # in a chain every ∼-closed subset with the bounds is a subalgebra
        orbits = sorted({tuple(sorted((x, int(A.sim[x])))) for x in range(A.size)} - {tuple(sorted((A.bottom, A.top)))})
        for mask in range(1 << len(orbits)):
            chosen = [A.bottom, A.top]
            for k, orbit in enumerate(orbits):
                if mask >> k & 1:
                    chosen.extend(orbit)
            witness = SubalgebraWitness(A, chosen)
            found[witness.elements] = witness
        return [found[key] for key in sorted(found)]

    start = generated_subalgebra(A, ())
    found[start.elements] = start
    rejected = set()
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for x in range(A.size):
            if current.mask[x]:
                continue
            grown = generated_subalgebra(A, current.elements + (x,))
            if grown.elements in found or grown.elements in rejected:
                continue
            if chains_only and not grown.is_chain:
                rejected.add(grown.elements)
                continue
            found[grown.elements] = grown
            queue.append(grown)
    return [found[key] for key in sorted(found)]


def enumerate_m_rel_complete(A: FiniteGAlgebra, totally_ordered_only: bool = False) -> List[SubalgebraWitness]:
    """
    Every m-relatively complete subalgebra of A, sorted by element lists.

    Raises:
        SizeBoundError: |A| exceeds max_enumeration_size
    """
    _size_guard(A.size, 'enumerate_m_rel_complete')
    candidates = enumerate_subalgebras(A, chains_only=totally_ordered_only)
    if totally_ordered_only:
        candidates = [c for c in candidates if c.is_chain]
    result = [c for c in candidates if is_m_relatively_complete(A, c)]
    logger.debug(f"{len(result)} of {len(candidates)} subalgebras are m-relatively complete")
    return result


def attach_quantifiers(A: FiniteGAlgebra, C: SubalgebraWitness, validate: Optional[bool] = None) -> MonadicGAlgebra:
    """
    ∃a = min{c ∈ C : c ≥ a} and ∀a = max{c ∈ C : c ≤ a}.

    Args:
        A: base G∼-algebra
        C: m-relatively complete subalgebra of A
        validate: run validate_monadic (default from configuration)

    Raises:
        PreconditionError: C is not m-relatively complete (clause and witness named)
    """
    failure = m_rel_complete_failure(A, C)
    if failure is not None:
        clause, witness = failure
        raise PreconditionError(
            f"range is not m-relatively complete: {clause} fails at {A.labels(witness)}",
            clause=clause, witness=list(witness),
        )
    lower, upper = relative_bounds(A, C.elements)
    M = MonadicGAlgebra(A, exists=upper, forall=lower)
    if M.range != tuple(C.elements):
        raise StructuralError("quantifier range differs from the attached subalgebra", coordinates=M.range)
    if get_config().validate_constructions if validate is None else validate:
        report = validate_monadic(M)
        failure_check = report.first_failure
        if failure_check is not None:
            raise StructuralError(
                f"attached quantifiers fail {failure_check.family}/{failure_check.law}",
                coordinates=failure_check.witness,
            )
        M.validated = True
    return M


# =============================================================================
# Validation and condition (C)
# =============================================================================

def _scalar_check(family: str, law: str, ok: bool, witness: Optional[Tuple[int, ...]] = None) -> LawCheck:
    return LawCheck(family, law, bool(ok), None if ok else witness)


def validate_monadic(M: MonadicGAlgebra) -> ValidationReport:
    """
    (M1)–(M4), (N), (Q), the range laws and the derived quantifier laws,
    plus the converse of attachment: ∃A is an m-relatively complete subalgebra.
    """
    A = M.base
    E, F, S, J, H, leq = M.exists, M.forall, A.sim, A.join, A.imp, A.leq
    I = A.indices
    a, b = I[:, None], I[None, :]
    top, bot = A.top, A.bottom

    range_e = np.isin(I, E)
    range_f = np.isin(I, F)
    checks = [
        law_check('M1', 'forall_le_identity', leq[F, I]),
        law_check('M2', 'forall_imp_forall', F[H[a, F[b]]] == H[E[a], F[b]]),
        law_check('M3', 'forall_of_forall_imp', F[H[F[a], b]] == H[F[a], F[b]]),
        law_check('M4', 'forall_exists_join', F[J[E[a], b]] == J[E[a], F[b]]),
        law_check('N', 'neg_le_sim', leq[A.neg, S]),
        law_check('Q', 'forall_is_sim_exists_sim', F == S[E[S]]),
        law_check('range', 'exists_range_eq_forall_range', range_e == range_f),
        _scalar_check('bounds', 'forall_top', F[top] == top, (top,)),
        _scalar_check('bounds', 'exists_top', E[top] == top, (top,)),
        _scalar_check('bounds', 'forall_bottom', F[bot] == bot, (bot,)),
        _scalar_check('bounds', 'exists_bottom', E[bot] == bot, (bot,)),
        law_check('inflation', 'identity_le_exists', leq[I, E]),
        law_check('idempotence', 'forall_forall', F[F] == F),
        law_check('idempotence', 'exists_exists', E[E] == E),
        law_check('monotonicity', 'forall_monotone', ~leq | leq[F[a], F[b]]),
        law_check('monotonicity', 'exists_monotone', ~leq | leq[E[a], E[b]]),
        law_check('forall_join', 'forall_join_forall', F[J[a, F[b]]] == J[F[a], F[b]]),
    ]

    witness = SubalgebraWitness(A, M.range)
    closure = witness.closure_failure()
    if closure is not None:
        checks.append(_scalar_check('converse', 'range_is_subalgebra', False,
                                    tuple(v for v in closure[1:] if isinstance(v, int))))
        checks.append(_scalar_check('converse', 'range_m_relatively_complete', False))
    else:
        checks.append(_scalar_check('converse', 'range_is_subalgebra', True))
        failure = m_rel_complete_failure(A, witness)
        checks.append(_scalar_check('converse', 'range_m_relatively_complete', failure is None,
                                    failure[1] if failure else None))

    report = ValidationReport('MG∼-algebra', tuple(checks))
    if not report.passed:
        logger.debug(f"validate_monadic failed families: {report.failing_families()}")
    return report


def _condition_c(M: MonadicGAlgebra) -> np.ndarray:
    A = M.base
    I = A.indices
    return A.leq[M.exists[A.meet[I, A.sim]], M.forall[A.join[I, A.sim]]]


def satisfies_C(M: MonadicGAlgebra) -> bool:
    """∃(x ∧ ∼x) ≤ ∀(x ∨ ∼x) for every x; caches the result on M"""
    result = bool(np.all(_condition_c(M)))
    M.satisfies_c = result
    return result


def c_witness(M: MonadicGAlgebra) -> Optional[int]:
    """First element violating (C), or None"""
    bad = np.flatnonzero(~_condition_c(M))
    return int(bad[0]) if bad.size else None


def cmg_equivalences(M: MonadicGAlgebra) -> Dict[str, bool]:
    """a ≤ ∼a ⟺ (a ≤ ∃a and ∃a ≤ ∼a), and ∼d = d ⇒ ∃d = d"""
    A = M.base
    I, E, S = A.indices, M.exists, A.sim
    below_sim = A.leq[I, S]
    through_exists = A.leq[I, E] & A.leq[E, S]
    fixed = fixed_points(A)
    return {
        'below_sim_iff_through_exists': bool(np.array_equal(below_sim, through_exists)),
        'fixed_point_in_range': all(int(E[d]) == d for d in fixed),
    }


# =============================================================================
# Filters and congruences
# =============================================================================

def _base(parent: Algebra) -> FiniteGAlgebra:
    return parent.base if isinstance(parent, MonadicGAlgebra) else parent


def up_set(A: FiniteGAlgebra, element: int) -> Tuple[int, ...]:
    return tuple(int(x) for x in np.flatnonzero(A.leq[int(element), :]))


@dataclass(frozen=True)
class FilterSet:
    """A subset flagged as filter / regular / monadic"""
    parent: Any = field(compare=False, repr=False)
    elements: Tuple[int, ...]
    is_filter: bool
    is_regular: bool
    is_monadic: bool

    @property
    def is_monadic_regular(self) -> bool:
        return self.is_filter and self.is_regular and self.is_monadic

    def __contains__(self, element: object) -> bool:
        return element in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def of(cls, parent: Algebra, elements: Iterable[int]) -> "FilterSet":
        A = _base(parent)
        elements = tuple(sorted({A.element(x) for x in elements}))
        mask = np.zeros(A.size, dtype=bool)
        mask[list(elements)] = True
        idx = np.array(elements, dtype=np.int64)
        is_filter = bool(
            idx.size > 0
            and np.all(mask[np.flatnonzero(A.leq[idx].any(axis=0))])
            and np.all(mask[A.meet[np.ix_(idx, idx)]])
        )
        is_regular = bool(idx.size > 0 and np.all(mask[A.delta[idx]]))
        is_monadic = bool(isinstance(parent, MonadicGAlgebra) and idx.size > 0 and np.all(mask[parent.forall[idx]]))
        return cls(parent, elements, is_filter, is_regular, is_monadic)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'elements': list(self.elements),
            'labels': _base(self.parent).labels(self.elements),
            'is_filter': self.is_filter,
            'is_regular': self.is_regular,
            'is_monadic': self.is_monadic,
        }


def monadic_regular_filter_generated(M: MonadicGAlgebra, X: Iterable[int]) -> FilterSet:
    """
    Fg_mr(X) = {a : Δ∀x_1 ∧ … ∧ Δ∀x_k ≤ a for some x_i ∈ X}.

    On a finite lattice this is the up-set of the meet over all of X.

    Raises:
        InvalidInputError: X is empty
    """
    A = M.base
    X = sorted({A.element(x) for x in X})
    if not X:
        raise InvalidInputError("the generated monadic regular filter needs a nonempty set X")
    generator = meet_all(A, (int(A.delta[M.forall[x]]) for x in X))
    F = FilterSet.of(M, up_set(A, generator))
    if not F.is_monadic_regular:
        raise StructuralError("generated set is not a monadic regular filter", coordinates=(generator,))
    return F


@dataclass(frozen=True)
class FilterLattice:
    """Monadic regular filters with inclusion, matched against regular filters of ∃A"""
    filters: Tuple[FilterSet, ...]
    inclusion: Tuple[Tuple[int, int], ...]  # (i, j) with filters[i] ⊆ filters[j]
    range_filters: Tuple[Tuple[int, ...], ...]
    correspondence: Tuple[int, ...]  # filters[i] ∩ ∃A == range_filters[correspondence[i]]
    is_order_isomorphism: bool
    inverse_is_generation: bool

    @property
    def verified(self) -> bool:
        return self.is_order_isomorphism and self.inverse_is_generation

    def to_dict(self) -> Dict[str, Any]:
        return {
            'filters': [list(f.elements) for f in self.filters],
            'inclusion': [list(p) for p in self.inclusion],
            'range_filters': [list(s) for s in self.range_filters],
            'correspondence': list(self.correspondence),
            'is_order_isomorphism': self.is_order_isomorphism,
            'inverse_is_generation': self.inverse_is_generation,
        }


def range_regular_filters(M: MonadicGAlgebra) -> Tuple[Tuple[int, ...], ...]:
    """Regular filters of ⟨∃A,∼⟩, one per congruence of M; needs only the range"""
    A, R = M.base, M.range
    found = set()
    for c in R:
        S = tuple(x for x in R if A.leq[c, x])
        if all(int(A.delta[x]) in S for x in S):
            found.add(S)
    return tuple(sorted(found))


def enumerate_monadic_regular_filters(M: MonadicGAlgebra) -> FilterLattice:
    """
    All monadic regular filters, their inclusion order, and the map
    F ↦ F ∩ ∃A onto the regular filters of ⟨∃A,∼⟩ checked to be an order
    isomorphism whose inverse is S ↦ Fg_mr(S).

    Raises:
        SizeBoundError: |A| exceeds max_enumeration_size
    """
    _size_guard(M.size, 'enumerate_monadic_regular_filters')
    A = M.base
    candidates = {up_set(A, m) for m in range(A.size)}
    filters = tuple(
        f for f in (FilterSet.of(M, c) for c in sorted(candidates)) if f.is_monadic_regular
    )
    inclusion = tuple(
        (i, j) for i, fi in enumerate(filters) for j, fj in enumerate(filters)
        if set(fi.elements) <= set(fj.elements)
    )

    R = M.range
    range_filters = range_regular_filters(M)

    lookup = {s: k for k, s in enumerate(range_filters)}
    correspondence = tuple(
        lookup.get(tuple(x for x in f.elements if x in R), -1) for f in filters
    )
    bijective = sorted(correspondence) == list(range(len(range_filters)))
    order_ok = bijective and all(
        (set(fi.elements) <= set(fj.elements))
        == (set(range_filters[correspondence[i]]) <= set(range_filters[correspondence[j]]))
        for i, fi in enumerate(filters) for j, fj in enumerate(filters)
    )
    inverse_ok = bijective and all(
        monadic_regular_filter_generated(M, range_filters[correspondence[i]]).elements == f.elements
        for i, f in enumerate(filters)
    )
    lattice = FilterLattice(filters, inclusion, range_filters, correspondence, order_ok, inverse_ok)
    logger.debug(f"{len(filters)} monadic regular filters, correspondence verified={lattice.verified}")
    return lattice


@dataclass(frozen=True)
class CongruenceRelation:
    """Partition of the universe, stored as canonical block labels"""
    parent: Any = field(compare=False, repr=False)
    labels: Tuple[int, ...]  # restricted-growth block id per element

    @classmethod
    def from_labels(cls, parent: Algebra, labels: Sequence[int]) -> "CongruenceRelation":
        canonical: Dict[int, int] = {}
        out = []
        for value in labels:
            if int(value) not in canonical:
                canonical[int(value)] = len(canonical)
            out.append(canonical[int(value)])
        return cls(parent, tuple(out))

    @classmethod
    def from_matrix(cls, parent: Algebra, relation: np.ndarray) -> "CongruenceRelation":
        """Build from a boolean relation matrix, which must be an equivalence"""
        n = relation.shape[0]
        labels = np.full(n, -1, dtype=np.int64)
        for x in range(n):
            if labels[x] < 0:
                labels[relation[x]] = x
        theta = cls.from_labels(parent, labels.tolist())
        if not np.array_equal(theta.matrix, relation):
            raise StructuralError("relation is not an equivalence relation")
        return theta

    @cached_property
    def matrix(self) -> np.ndarray:
        labels = np.array(self.labels)
        return labels[:, None] == labels[None, :]

    @property
    def blocks(self) -> Tuple[Tuple[int, ...], ...]:
        groups: Dict[int, List[int]] = {}
        for x, k in enumerate(self.labels):
            groups.setdefault(k, []).append(x)
        return tuple(tuple(groups[k]) for k in sorted(groups))

    @property
    def is_identity(self) -> bool:
        return len(set(self.labels)) == len(self.labels)

    @property
    def is_total(self) -> bool:
        return len(set(self.labels)) == 1

    def block_of(self, element: int) -> Tuple[int, ...]:
        k = self.labels[int(element)]
        return tuple(x for x, label in enumerate(self.labels) if label == k)

    def to_dict(self) -> Dict[str, Any]:
        return {'blocks': [list(b) for b in self.blocks]}


def is_congruence(parent: Algebra, labels: Sequence[int]) -> bool:
    """Compatibility of a partition with every operation of parent"""
    A = _base(parent)
    L = np.asarray(labels, dtype=np.int64)
    pairs = np.argwhere(L[:, None] == L[None, :])
    left, right = pairs[:, 0], pairs[:, 1]
    unary = [A.sim]
    if isinstance(parent, MonadicGAlgebra):
        unary += [parent.exists, parent.forall]
    for op in unary:
        if not np.array_equal(L[op[left]], L[op[right]]):
            return False
    for op in (A.meet, A.join, A.imp):
        if not np.array_equal(L[op[left]], L[op[right]]):
            return False
        if not np.array_equal(L[op[:, left]], L[op[:, right]]):
            return False
    return True


def congruence_from_filter(M: MonadicGAlgebra, F: FilterSet) -> CongruenceRelation:
    """
    θ_F = {(a, b) : (a → b) ∧ (b → a) ∈ F}.

    Raises:
        PreconditionError: F is not monadic regular
    """
    if not F.is_monadic_regular:
        raise PreconditionError("θ_F needs a monadic regular filter", clause='monadic-regular')
    A = M.base
    mask = np.zeros(A.size, dtype=bool)
    mask[list(F.elements)] = True
    theta = CongruenceRelation.from_matrix(M, mask[A.meet[A.imp, A.imp.T]])
    if not is_congruence(M, theta.labels):
        raise StructuralError("θ_F is not compatible with the operations")
    return theta


def filter_of_congruence(M: MonadicGAlgebra, theta: CongruenceRelation) -> FilterSet:
    """1/θ, the block of the top element"""
    return FilterSet.of(M, theta.block_of(M.base.top))


def brute_force_congruences(parent: Algebra) -> List[CongruenceRelation]:
    """
    Every congruence, by exhaustive search over restricted-growth partitions.

    Raises:
        SizeBoundError: size exceeds max_congruence_oracle
    """
    n = _base(parent).size
    _size_guard(n, 'brute_force_congruences', get_config().max_congruence_oracle)
    found = []
    labels = [0] * n

    def grow(k: int, blocks: int) -> None:
        if k == n:
            if is_congruence(parent, labels):
                found.append(CongruenceRelation(parent, tuple(labels)))
            return
        for value in range(blocks + 1):
            labels[k] = value
            grow(k + 1, max(blocks, value + 1))

    grow(1, 1)
    return sorted(found, key=lambda t: t.labels)


# =============================================================================
# Subdirect irreducibility and the discriminator
# =============================================================================

@dataclass(frozen=True)
class SIReport:
    """Four characterizations that coincide on finite MG∼-algebras"""
    si: bool  # the non-identity congruences have a least element
    simple: bool  # exactly two monadic regular filters
    directly_indecomposable: bool
    range_chain: bool  # nontrivial with ∃A totally ordered
    filter_count: int

    @property
    def agree(self) -> bool:
        return self.si == self.simple == self.directly_indecomposable == self.range_chain

    def to_dict(self) -> Dict[str, Any]:
        return {
            'si': self.si,
            'simple': self.simple,
            'directly_indecomposable': self.directly_indecomposable,
            'range_chain': self.range_chain,
            'filter_count': self.filter_count,
            'agree': self.agree,
        }


def is_subdirectly_irreducible(M: MonadicGAlgebra) -> SIReport:
    """Compute s.i., simplicity, direct indecomposability and whether ∃A is a chain"""
    lattice = enumerate_monadic_regular_filters(M)
    congruences = [congruence_from_filter(M, F) for F in lattice.filters]
    identity = np.eye(M.size, dtype=bool)
    nontrivial = [t.matrix for t in congruences if not t.is_identity]

    if nontrivial:
        monolith = np.logical_and.reduce(nontrivial)
        si = not np.array_equal(monolith, identity)
    else:
        si = False

    proper = [t.matrix for t in congruences if not t.is_identity and not t.is_total]
    decomposable = any(
        np.array_equal(r1 & r2, identity) and np.all((r1.astype(np.int64) @ r2.astype(np.int64)) > 0)
        for r1 in proper for r2 in proper
    )
    report = SIReport(
        si=si,
        simple=len(lattice.filters) == 2,
        directly_indecomposable=M.size > 1 and not decomposable,
        range_chain=M.si,
        filter_count=len(lattice.filters),
    )
    if not report.agree:
        logger.warning(f"s.i. characterizations disagree: {report.to_dict()}")
    return report


def _require_si(M: MonadicGAlgebra, operation: str) -> None:
    if not M.si:
        raise PreconditionError(f"{operation} needs a subdirectly irreducible algebra", clause='subdirectly-irreducible')


def _discriminator(M: MonadicGAlgebra, x: Any, y: Any, z: Any) -> Any:
    A = M.base
    equal = A.meet[A.imp[x, y], A.imp[y, x]]
    T = A.delta[M.forall[equal]]
    return A.join[A.meet[T, z], A.meet[A.neg[T], x]]


def discriminator_eval(M: MonadicGAlgebra, x: int, y: int, z: int) -> int:
    """
    t(x, y, z) = (T(e) ∧ z) ∨ (¬T(e) ∧ x) with e = (x → y) ∧ (y → x), T = Δ∀.

    Raises:
        PreconditionError: M is not subdirectly irreducible
    """
    _require_si(M, 'discriminator_eval')
    A = M.base
    return int(_discriminator(M, A.element(x), A.element(y), A.element(z)))


def discriminator_table(M: MonadicGAlgebra) -> np.ndarray:
    """The n×n×n table of t"""
    _require_si(M, 'discriminator_table')
    I = M.base.indices
    return _discriminator(M, I[:, None, None], I[None, :, None], I[None, None, :])


# =============================================================================
# CMG∼ classification
# =============================================================================

@dataclass(frozen=True)
class CMGClassification:
    si: bool
    simple: bool
    fixed_point: Optional[int]
    fixed_point_label: Optional[str]
    parity: str  # odd | even | mixed | trivial
    chains: Tuple[int, ...]
    cmg_criterion: Optional[bool]  # None when not s.i.
    cmg_direct: bool
    witness: Optional[int] = None  # covering t when the criterion holds without a fixed point

    @property
    def agree(self) -> Optional[bool]:
        if self.cmg_criterion is None:
            return None
        return self.cmg_criterion == self.cmg_direct

    def to_dict(self) -> Dict[str, Any]:
        return {
            'si': self.si,
            'simple': self.simple,
            'fixed_point': self.fixed_point_label,
            'parity': self.parity,
            'chains': list(self.chains),
            'cmg_criterion': self.cmg_criterion,
            'cmg_direct': self.cmg_direct,
            'agree': self.agree,
        }


def _parity(chains: Sequence[int]) -> str:
    if not chains:
        return 'trivial'
    if all(n % 2 == 1 for n in chains):
        return 'odd'
    if all(n % 2 == 0 for n in chains):
        return 'even'
    return 'mixed'


def classify_cmg(M: MonadicGAlgebra) -> CMGClassification:
    """
    Membership in CMG∼ by the coordinatewise criterion, cross-checked by (C).

    With a fixed point d: CMG∼ iff d ∈ ∃A. Without one: CMG∼ iff some
    t ∈ ∃A has ∼t(i) covering t(i) in every coordinate. Mixed parity is
    never CMG∼. The criterion is only stated for s.i. algebras and is None
    otherwise. s.i. is decided by the range-chain test, so no filter lattice
    is built.
    """
    A = M.base
    si = M.si
    factors = decompose_chains(A)
    chains = tuple(f.chain.size for f in factors)
    parity = _parity(chains)
    fixed = fixed_points(A)
    d = fixed[0] if fixed else None
    direct = satisfies_C(M)

    criterion: Optional[bool] = None
    witness = None
    if si:
        if parity == 'mixed':
            criterion = False
        elif d is not None:
            criterion = d in M.range
        else:
            criterion = False
            for t in M.range:
                if all(f.chain.cover[f.projection[t], f.chain.sim[f.projection[t]]] for f in factors):
                    criterion, witness = True, t
                    break

    result = CMGClassification(
        si=si,
        simple=si,
        fixed_point=d,
        fixed_point_label=A.label(d) if d is not None else None,
        parity=parity,
        chains=chains,
        cmg_criterion=criterion,
        cmg_direct=direct,
        witness=witness,
    )
    if result.agree is False:
        logger.warning(f"criterion and direct (C) check disagree on chains {chains}")
    return result


def range_coordinate_report(M: MonadicGAlgebra) -> Dict[str, Any]:
    """
    Coordinate laws of range elements in product-of-chains coordinates:
    a coordinate equal to 1 forces 1, a fixed coordinate forces a fixed point,
    and whether each projection is injective on ∃A.
    """
    A = M.base
    factors = decompose_chains(A)
    R = list(M.range)
    top_forces_top = all(
        c == A.top for c in R
        if any(f.projection[c] == f.chain.top for f in factors)
    )
    fixed_forces_fixed = all(
        A.sim[c] == c for c in R
        if any(f.chain.sim[f.projection[c]] == f.projection[c] for f in factors)
    )
    injective = [len({int(f.projection[c]) for c in R}) == len(R) for f in factors]
    return {
        'top_coordinate_forces_top': top_forces_top,
        'fixed_coordinate_forces_fixed': fixed_forces_fixed,
        'projections_injective': injective,
    }


# =============================================================================
# Constructions
# =============================================================================

@dataclass
class ShrinkResult:
    algebra: MonadicGAlgebra
    embedding: Tuple[int, ...]  # index in the shrunk algebra -> index in the source
    forall_agrees: bool  # ∀_1 a = ∀a whenever ∀a lies in the subalgebra
    exists_agrees: bool
    forall_checked: int  # elements where the agreement clause applies
    exists_checked: int
    si: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'size': self.algebra.size,
            'embedding': list(self.embedding),
            'range': list(self.algebra.range),
            'forall_agrees': self.forall_agrees,
            'exists_agrees': self.exists_agrees,
            'forall_checked': self.forall_checked,
            'exists_checked': self.exists_checked,
            'si': self.si,
        }


def fep_shrink(M: MonadicGAlgebra, N: Iterable[int]) -> ShrinkResult:
    """
    Finite shrink around N: A_1 = ⟨N⟩, C = A_1 ∩ ∀A, quantifiers by min/max over C.

    Raises:
        PreconditionError: M is not subdirectly irreducible
    """
    _require_si(M, 'fep_shrink')
    sub = generated_subalgebra(M.base, N)
    A1 = sub.as_algebra()
    position = {x: k for k, x in enumerate(sub.elements)}
    quantifier_range = set(M.range)
    C = SubalgebraWitness(A1, [position[x] for x in sub.elements if x in quantifier_range])
    shrunk = attach_quantifiers(A1, C)

    embedding = sub.elements
    forall_ok, exists_ok, n_forall, n_exists = True, True, 0, 0
    for k, x in enumerate(embedding):
        if int(M.forall[x]) in position:
            n_forall += 1
            forall_ok &= embedding[shrunk.forall[k]] == M.forall[x]
        if int(M.exists[x]) in position:
            n_exists += 1
            exists_ok &= embedding[shrunk.exists[k]] == M.exists[x]
    result = ShrinkResult(shrunk, embedding, bool(forall_ok), bool(exists_ok), n_forall, n_exists,
                          shrunk.si)
    logger.info(f"Shrunk {M.size} elements to {shrunk.size} around {len(list(position))} generated elements")
    return result


@dataclass
class FixedPointExtension:
    algebra: MonadicGAlgebra
    embedding: Tuple[int, ...]  # source index -> index in the extension
    fixed_point: int
    preserves_operations: bool  # ∧, ∨, →, ∼
    preserves_quantifiers: bool
    range_included: bool  # image of ∃A ⊆ ∃B
    source_satisfies_c: bool
    result_cmg: bool
    result_si: bool

    @property
    def verified(self) -> bool:
        return (
            self.preserves_operations
            and self.range_included
            and self.result_cmg
            and self.result_si
            and (self.preserves_quantifiers or not self.source_satisfies_c)
        )

    def to_dict(self) -> Dict[str, Any]:
        B = self.algebra.base
        return {
            'size': B.size,
            'fixed_point': B.label(self.fixed_point),
            'embedding': list(self.embedding),
            'range': B.labels(self.algebra.range),
            'preserves_operations': self.preserves_operations,
            'preserves_quantifiers': self.preserves_quantifiers,
            'range_included': self.range_included,
            'source_satisfies_c': self.source_satisfies_c,
            'result_cmg': self.result_cmg,
            'result_si': self.result_si,
            'verified': self.verified,
        }


def preserves_operations(A: FiniteGAlgebra, B: FiniteGAlgebra, mapping: Sequence[int]) -> bool:
    """mapping A -> B commutes with ∧, ∨, →, ∼ and is injective"""
    f = np.asarray(mapping, dtype=np.int64)
    fa, fb = f[:, None], f[None, :]
    return bool(
        np.unique(f).size == f.size
        and np.array_equal(f[A.meet], B.meet[fa, fb])
        and np.array_equal(f[A.join], B.join[fa, fb])
        and np.array_equal(f[A.imp], B.imp[fa, fb])
        and np.array_equal(f[A.sim], B.sim[f])
    )


def embed_with_fixed_point(M: MonadicGAlgebra) -> FixedPointExtension:
    """
    Insert a midpoint into every even factor chain and add d to the range.

    In an even chain 0 = a_1 < … < a_{n/2} < ∼a_{n/2} < … < 1 the new element
    sits exactly between a_{n/2} and ∼a_{n/2}; odd chains are unchanged.

    Raises:
        PreconditionError: M is not subdirectly irreducible
    """
    _require_si(M, 'embed_with_fixed_point')
    A = M.base
    factors = decompose_chains(A)
    chains, lifts = [], []
    for f in factors:
        n = f.chain.size
        positions = np.arange(n)
        if n % 2 == 0:
            chains.append(make_chain(n + 1))
            lifts.append(np.where(positions < n // 2, positions, positions + 1))
        else:
            chains.append(f.chain)
            lifts.append(positions)
    B = direct_product(chains)
    shape = tuple(c.size for c in chains)
    embedding = np.ravel_multi_index(tuple(lift[f.projection] for lift, f in zip(lifts, factors)), shape)
    d = int(np.ravel_multi_index(tuple(n // 2 for n in shape), shape))
    new_range = sorted({int(x) for x in embedding[list(M.range)]} | {d})
    extended = attach_quantifiers(B, SubalgebraWitness(B, new_range))

    result = FixedPointExtension(
        algebra=extended,
        embedding=tuple(int(x) for x in embedding),
        fixed_point=d,
        preserves_operations=preserves_operations(A, B, embedding),
        preserves_quantifiers=bool(
            np.array_equal(embedding[M.exists], extended.exists[embedding])
            and np.array_equal(embedding[M.forall], extended.forall[embedding])
        ),
        range_included=set(int(x) for x in embedding[list(M.range)]) <= set(extended.range),
        source_satisfies_c=satisfies_C(M),
        result_cmg=satisfies_C(extended),
        result_si=extended.si,
    )
    logger.info(f"Fixed-point extension: chains {tuple(f.chain.size for f in factors)} -> {shape}, "
                f"verified={result.verified}")
    return result
