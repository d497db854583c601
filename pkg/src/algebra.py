#!/usr/bin/env python3
"""
Finite G∼-Algebras
Gödel algebras with an involutive (De Morgan) negation given by explicit
operation tables: builders, law validation, closure, decomposition into
chains and isomorphism search.

Elements are the indices 0..n-1. Tables are read-only numpy arrays so values
can be shared freely between worker processes.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Any, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .config import get_config
from .errors import DecompositionError, InvalidInputError, StructuralError

logger = logging.getLogger("gsim.algebra")


def frozen_table(values: Any, shape: Tuple[int, ...], name: str, n: int) -> np.ndarray:
    try:
        table = np.array(values, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise StructuralError(f"{name} table is not a rectangular integer array: {e}", coordinates=(name,))
    if table.shape != shape:
        raise StructuralError(f"{name} table has shape {table.shape}, expected {shape}", coordinates=(name,))
    bad = np.argwhere((table < 0) | (table >= n))
    if bad.size:
        where = tuple(int(v) for v in bad[0])
        raise StructuralError(
            f"{name}{list(where)} = {int(table[where])} is outside [0, {n})",
            coordinates=(name,) + where,
        )
    table.setflags(write=False)
    return table


@dataclass(frozen=True, eq=False)
class FiniteGAlgebra:
    """
    Finite Gödel algebra with De Morgan negation, given by tables.

    Order, pseudo-complement and Δ are derived from the tables and cached.

    Example:
        C3 = make_chain(3)
        C3.leq[0, 1]      # True
        C3.delta          # array([0, 0, 2])
    """
    size: int
    meet: np.ndarray
    join: np.ndarray
    imp: np.ndarray
    sim: np.ndarray
    bottom: int
    top: int
    names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        n = self.size
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
            raise StructuralError(f"size must be a positive integer, got {n!r}", coordinates=('size',))
        object.__setattr__(self, 'size', int(n))
        for name in ('meet', 'join', 'imp'):
            object.__setattr__(self, name, frozen_table(getattr(self, name), (n, n), name, n))
        object.__setattr__(self, 'sim', frozen_table(self.sim, (n,), 'sim', n))
        for name in ('bottom', 'top'):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or not 0 <= int(value) < n:
                raise StructuralError(f"{name} = {value!r} is outside [0, {n})", coordinates=(name,))
            object.__setattr__(self, name, int(value))
        if self.names is not None:
            names = tuple(str(s) for s in self.names)
            if len(names) != n:
                raise StructuralError(f"names has {len(names)} entries, expected {n}", coordinates=('names',))
            object.__setattr__(self, 'names', names)

    # Derived structure

    @cached_property
    def indices(self) -> np.ndarray:
        return np.arange(self.size)

    @cached_property
    def leq(self) -> np.ndarray:
        """nxn boolean matrix, leq[a, b] iff a ≤ b"""
        leq = self.meet == self.indices[:, None]
        leq.setflags(write=False)
        return leq

    @cached_property
    def lt(self) -> np.ndarray:
        lt = self.leq & ~np.eye(self.size, dtype=bool)
        lt.setflags(write=False)
        return lt

    @cached_property
    def cover(self) -> np.ndarray:
        """cover[a, b] iff b covers a"""
        between = (self.lt.astype(np.int64) @ self.lt.astype(np.int64)) > 0
        cover = self.lt & ~between
        cover.setflags(write=False)
        return cover

    @cached_property
    def neg(self) -> np.ndarray:
        """Pseudo-complement ¬a = a → 0"""
        return self.imp[:, self.bottom]

    @cached_property
    def delta(self) -> np.ndarray:
        """Δa = ¬∼a"""
        return self.neg[self.sim]

    @cached_property
    def ranks(self) -> np.ndarray:
        """Number of elements below each element (itself included)"""
        return self.leq.sum(axis=0)

    @cached_property
    def is_chain(self) -> bool:
        return bool(np.all(self.leq | self.leq.T))

    def label(self, element: int) -> str:
        element = int(element)
        return self.names[element] if self.names is not None else str(element)

    def labels(self, elements: Iterable[int]) -> List[str]:
        return [self.label(e) for e in elements]

    def index_of(self, label: str) -> int:
        """Element index for a display label (or a decimal index string)"""
        if self.names is not None and label in self.names:
            return self.names.index(label)
        try:
            element = int(label)
        except ValueError:
            raise InvalidInputError(f"unknown element label {label!r}")
        if not 0 <= element < self.size:
            raise InvalidInputError(f"element {element} is outside [0, {self.size})")
        return element

    def element(self, value: Union[int, str]) -> int:
        """Checked element index from an index or a display label"""
        if isinstance(value, str):
            return self.index_of(value)
        value = int(value)
        if not 0 <= value < self.size:
            raise InvalidInputError(f"element {value} is outside [0, {self.size})")
        return value

    def same_tables(self, other: "FiniteGAlgebra") -> bool:
        return (
            self.size == other.size
            and self.bottom == other.bottom
            and self.top == other.top
            and all(np.array_equal(getattr(self, t), getattr(other, t)) for t in ('meet', 'join', 'imp', 'sim'))
        )

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'size': self.size,
            'meet': self.meet.tolist(),
            'join': self.join.tolist(),
            'imp': self.imp.tolist(),
            'sim': self.sim.tolist(),
            'bottom': self.bottom,
            'top': self.top,
        }
        if self.names is not None:
            data['names'] = list(self.names)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FiniteGAlgebra":
        missing = [k for k in ('size', 'meet', 'join', 'imp', 'sim', 'bottom', 'top') if k not in data]
        if missing:
            raise InvalidInputError(f"algebra object is missing keys: {missing}")
        return cls(
            size=data['size'], meet=data['meet'], join=data['join'], imp=data['imp'],
            sim=data['sim'], bottom=data['bottom'], top=data['top'], names=data.get('names'),
        )

    def __repr__(self):
        return f"FiniteGAlgebra(size={self.size}, chain={self.is_chain})"


# =============================================================================
# Validation
# =============================================================================

@dataclass(frozen=True)
class LawCheck:
    """Outcome of one law within a family"""
    family: str
    law: str
    passed: bool
    witness: Optional[Tuple[int, ...]] = None  # first failing tuple

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'family': self.family, 'law': self.law, 'passed': self.passed}
        if self.witness is not None:
            data['witness'] = list(self.witness)
        return data


@dataclass(frozen=True)
class ValidationReport:
    """Per-law pass/fail results; overall pass iff every family passes"""
    subject: str
    checks: Tuple[LawCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def families(self) -> Dict[str, bool]:
        result: Dict[str, bool] = {}
        for c in self.checks:
            result[c.family] = result.get(c.family, True) and c.passed
        return result

    @property
    def first_failure(self) -> Optional[LawCheck]:
        return next((c for c in self.checks if not c.passed), None)

    def family(self, name: str) -> bool:
        if name not in self.families:
            raise KeyError(name)
        return self.families[name]

    def failing_families(self) -> List[str]:
        return [name for name, ok in self.families.items() if not ok]

    def to_dict(self) -> Dict[str, Any]:
        failure = self.first_failure
        return {
            'subject': self.subject,
            'passed': self.passed,
            'families': self.families,
            'first_failure': failure.to_dict() if failure else None,
        }


def law_check(family: str, law: str, holds: np.ndarray) -> LawCheck:
    """Build a LawCheck from a boolean array indexed by the law's variables"""
    holds = np.atleast_1d(np.asarray(holds, dtype=bool))
    bad = np.argwhere(~holds)
    if bad.size == 0:
        return LawCheck(family, law, True)
    return LawCheck(family, law, False, tuple(int(v) for v in bad[0]))


def validate_gsim(A: FiniteGAlgebra) -> ValidationReport:
    """
    Check every G∼ law family over all tuples of elements.

    Families, in order: lattice, distributivity, residuation, prelinearity,
    de_morgan, N, K, then the derived Stone and Δ laws.

    Returns:
        ValidationReport with the first failing tuple of each failing law
    """
    n, M, J, H, S = A.size, A.meet, A.join, A.imp, A.sim
    top, bot, leq = A.top, A.bottom, A.leq
    I = A.indices
    a, b = I[:, None], I[None, :]
    a3, b3, c3 = I[:, None, None], I[None, :, None], I[None, None, :]
    neg, delta = A.neg, A.delta

    sim_bounds = np.ones(n, dtype=bool)
    sim_bounds[bot] = S[bot] == top
    sim_bounds[top] &= S[top] == bot

    checks = [
        law_check('lattice', 'meet_commutative', M == M.T),
        law_check('lattice', 'join_commutative', J == J.T),
        law_check('lattice', 'meet_idempotent', M[I, I] == I),
        law_check('lattice', 'join_idempotent', J[I, I] == I),
        law_check('lattice', 'meet_associative', M[M[a3, b3], c3] == M[a3, M[b3, c3]]),
        law_check('lattice', 'join_associative', J[J[a3, b3], c3] == J[a3, J[b3, c3]]),
        law_check('lattice', 'meet_absorption', M[a, J[a, b]] == a),
        law_check('lattice', 'join_absorption', J[a, M[a, b]] == a),
        law_check('lattice', 'top_bound', M[I, top] == I),
        law_check('lattice', 'bottom_bound', J[I, bot] == I),
        law_check('distributivity', 'meet_over_join', M[a3, J[b3, c3]] == J[M[a3, b3], M[a3, c3]]),
        law_check('residuation', 'meet_le_iff_le_imp', leq[M[a3, b3], c3] == leq[a3, H[b3, c3]]),
        law_check('prelinearity', 'imp_join_imp_is_top', J[H, H.T] == top),
        law_check('de_morgan', 'sim_exchanges_bounds', sim_bounds),
        law_check('de_morgan', 'sim_involution', S[S] == I),
        law_check('de_morgan', 'sim_join_to_meet', S[J] == M[S[a], S[b]]),
        law_check('N', 'neg_le_sim', leq[neg, S]),
        law_check('K', 'kleene', leq[M[I, S][:, None], J[I, S][None, :]]),
        law_check('stone', 'neg_join_negneg_is_top', J[neg, neg[neg]] == top),
        law_check('delta_contraposition', 'delta_imp_eq_delta_sim_imp', delta[H] == delta[H[S[b], S[a]]]),
        law_check('delta_excluded_middle', 'delta_join_neg_delta_is_top', J[delta, neg[delta]] == top),
        law_check('delta_join', 'delta_preserves_join', delta[J] == J[delta[a], delta[b]]),
        law_check('delta_modus_ponens', 'delta_meet_delta_imp_le_delta', leq[M[delta[a], delta[H]], delta[b]]),
        law_check('delta_deflation', 'delta_le_identity', leq[delta, I]),
        law_check('delta_idempotent', 'delta_delta_eq_delta', delta[delta] == delta),
    ]
    report = ValidationReport('G∼-algebra', tuple(checks))
    if not report.passed:
        logger.debug(f"validate_gsim failed families: {report.failing_families()}")
    return report


def ensure_valid(A: FiniteGAlgebra, what: str, validate: Optional[bool] = None) -> FiniteGAlgebra:
    """Run validate_gsim when enabled (argument or configuration) and raise on failure"""
    if validate is None:
        validate = get_config().validate_constructions
    if validate:
        report = validate_gsim(A)
        failure = report.first_failure
        if failure is not None:
            raise StructuralError(
                f"{what} is not a G∼-algebra: {failure.family}/{failure.law} fails",
                coordinates=failure.witness,
            )
    return A


# =============================================================================
# Builders
# =============================================================================

def chain_names(n: int) -> Tuple[str, ...]:
    """Labels 0, e1, e2, ..., 1 with the middle element of an odd chain named d"""
    names = ['0'] + [f"e{i}" for i in range(1, n - 1)] + ['1']
    if n % 2 == 1 and n > 2:
        names[(n - 1) // 2] = 'd'
    return tuple(names)


def make_chain(n: int, validate: Optional[bool] = None) -> FiniteGAlgebra:
    """
    The n-element G∼-chain C_n.

    Gödel implication (a → b = 1 if a ≤ b else b) and the order-reversing
    involution ∼e_i = e_{n-1-i}.

    Raises:
        InvalidInputError: n < 2
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidInputError(f"a chain needs at least 2 elements, got {n!r}")
    n = int(n)
    I = np.arange(n)
    chain = FiniteGAlgebra(
        size=n,
        meet=np.minimum.outer(I, I),
        join=np.maximum.outer(I, I),
        imp=np.where(I[:, None] <= I[None, :], n - 1, I[None, :]),
        sim=n - 1 - I,
        bottom=0,
        top=n - 1,
        names=chain_names(n),
    )
    return ensure_valid(chain, f"C_{n}", validate)


def direct_product(factors: Sequence[FiniteGAlgebra], validate: Optional[bool] = None) -> FiniteGAlgebra:
    """
    Componentwise product of G∼-algebras.

    Elements are encoded mixed-radix with factor 0 most significant, so
    index = ((x_0 * n_1) + x_1) * n_2 + ... .
    """
    if not factors:
        raise InvalidInputError("direct_product needs at least one factor")
    shape = tuple(f.size for f in factors)
    total = int(np.prod(shape))
    coords = np.unravel_index(np.arange(total), shape)

    def lift(table: str) -> np.ndarray:
        parts = tuple(getattr(f, table)[c[:, None], c[None, :]] for f, c in zip(factors, coords))
        return np.ravel_multi_index(parts, shape)

    names = tuple(
        "(" + ",".join(f.label(c[k]) for f, c in zip(factors, coords)) + ")"
        for k in range(total)
    )
    product = FiniteGAlgebra(
        size=total,
        meet=lift('meet'),
        join=lift('join'),
        imp=lift('imp'),
        sim=np.ravel_multi_index(tuple(f.sim[c] for f, c in zip(factors, coords)), shape),
        bottom=int(np.ravel_multi_index(tuple(f.bottom for f in factors), shape)),
        top=int(np.ravel_multi_index(tuple(f.top for f in factors), shape)),
        names=names,
    )
    logger.debug(f"Built product of shape {shape} ({total} elements)")
    return ensure_valid(product, f"product {shape}", validate)


# =============================================================================
# Subalgebras
# =============================================================================

@dataclass(frozen=True)
class SubalgebraWitness:
    """A subset of a parent algebra, sorted; closure is checked by verify()"""
    parent: FiniteGAlgebra = field(compare=False, repr=False)
    elements: Tuple[int, ...]

    def __post_init__(self):
        elements = tuple(sorted({int(e) for e in self.elements}))
        for e in elements:
            if not 0 <= e < self.parent.size:
                raise InvalidInputError(f"element {e} is outside [0, {self.parent.size})")
        object.__setattr__(self, 'elements', elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, element: object) -> bool:
        return element in self.elements

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64)

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.size, dtype=bool)
        mask[self.array] = True
        return mask

    def closure_failure(self) -> Optional[Tuple[Any, ...]]:
        """First (operation, args...) leaving the subset, or None when closed"""
        A, e, mask = self.parent, self.array, self.mask
        for constant in ('bottom', 'top'):
            if not mask[getattr(A, constant)]:
                return (constant,)
        grid = np.ix_(e, e)
        for op in ('meet', 'join', 'imp'):
            bad = np.argwhere(~mask[getattr(A, op)[grid]])
            if bad.size:
                i, j = bad[0]
                return (op, int(e[i]), int(e[j]))
        bad = np.flatnonzero(~mask[A.sim[e]])
        if bad.size:
            return ('sim', int(e[bad[0]]))
        return None

    @property
    def is_closed(self) -> bool:
        return self.closure_failure() is None

    def verify(self) -> "SubalgebraWitness":
        failure = self.closure_failure()
        if failure is not None:
            raise StructuralError(f"subset is not a subalgebra: not closed under {failure[0]}", coordinates=failure)
        return self

    @cached_property
    def is_chain(self) -> bool:
        sub = self.parent.leq[np.ix_(self.array, self.array)]
        return bool(np.all(sub | sub.T))

    def as_algebra(self) -> FiniteGAlgebra:
        """The subalgebra reindexed to 0..k-1 in the order of self.elements"""
        self.verify()
        A, e = self.parent, self.array
        position = np.full(A.size, -1, dtype=np.int64)
        position[e] = np.arange(len(e))
        grid = np.ix_(e, e)
        return FiniteGAlgebra(
            size=len(e),
            meet=position[A.meet[grid]],
            join=position[A.join[grid]],
            imp=position[A.imp[grid]],
            sim=position[A.sim[e]],
            bottom=int(position[A.bottom]),
            top=int(position[A.top]),
            names=tuple(A.labels(e)),
        )

    def labels(self) -> List[str]:
        return self.parent.labels(self.elements)


def generated_subalgebra(A: FiniteGAlgebra, seeds: Iterable[int]) -> SubalgebraWitness:
    """
    Least subalgebra containing seeds, by iterated closure to a fixpoint.

    Example:
        generated_subalgebra(make_chain(5), {1}).elements   # (0, 1, 3, 4)
    """
    mask = np.zeros(A.size, dtype=bool)
    for s in seeds:
        s = int(s)
        if not 0 <= s < A.size:
            raise InvalidInputError(f"seed {s} is outside [0, {A.size})")
        mask[s] = True
    mask[[A.bottom, A.top]] = True
    while True:
        idx = np.flatnonzero(mask)
        grid = np.ix_(idx, idx)
        grown = mask.copy()
        grown[A.meet[grid].ravel()] = True
        grown[A.join[grid].ravel()] = True
        grown[A.imp[grid].ravel()] = True
        grown[A.sim[idx]] = True
        if np.array_equal(grown, mask):
            break
        mask = grown
    return SubalgebraWitness(A, tuple(int(i) for i in np.flatnonzero(mask)))


def relative_bounds(A: FiniteGAlgebra, subset: Iterable[int]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Greatest element of {c ∈ S : c ≤ a} and least of {c ∈ S : c ≥ a} for every a.

    Greatest/least in the partial order, not merely maximal/minimal.

    Returns:
        (lower, upper) arrays of length n, -1 where no such element exists
    """
    elems = np.array(sorted({int(c) for c in subset}), dtype=np.int64)
    lower = np.full(A.size, -1, dtype=np.int64)
    upper = np.full(A.size, -1, dtype=np.int64)
    if elems.size == 0:
        return lower, upper
    among = A.leq[np.ix_(elems, elems)]
    below_a = A.leq[elems, :]  # [c, a]: c ≤ a
    for x in range(A.size):
        below = below_a[:, x]
        # greatest: every member of the set lies below it
        g = np.flatnonzero(below & np.all(among | ~below[:, None], axis=0))
        if g.size:
            lower[x] = elems[g[0]]
        above = A.leq[x, elems]
        u = np.flatnonzero(above & np.all(among | ~above[None, :], axis=1))
        if u.size:
            upper[x] = elems[u[0]]
    return lower, upper


# =============================================================================
# Order queries
# =============================================================================

def covers(A: FiniteGAlgebra, a: int, b: int) -> bool:
    """True iff a < b with nothing strictly between"""
    return bool(A.cover[int(a), int(b)])


def fixed_points(A: FiniteGAlgebra) -> Tuple[int, ...]:
    """Elements d with ∼d = d"""
    return tuple(int(x) for x in np.flatnonzero(A.sim == A.indices))


# =============================================================================
# Decomposition and isomorphism
# =============================================================================

class ChainFactor(NamedTuple):
    chain: FiniteGAlgebra
    projection: np.ndarray  # element of A -> index in chain


def is_isomorphism(A: FiniteGAlgebra, B: FiniteGAlgebra, mapping: Sequence[int]) -> bool:
    """True iff mapping is a bijection A -> B preserving every table"""
    f = np.asarray(mapping, dtype=np.int64)
    if A.size != B.size or f.shape != (A.size,):
        return False
    if np.any(f < 0) or np.any(f >= B.size) or np.unique(f).size != A.size:
        return False
    if f[A.bottom] != B.bottom or f[A.top] != B.top:
        return False
    fa, fb = f[:, None], f[None, :]
    return bool(
        np.array_equal(f[A.meet], B.meet[fa, fb])
        and np.array_equal(f[A.join], B.join[fa, fb])
        and np.array_equal(f[A.imp], B.imp[fa, fb])
        and np.array_equal(f[A.sim], B.sim[f])
    )


def boolean_center(A: FiniteGAlgebra) -> Tuple[int, ...]:
    """Complemented elements: a ∨ ¬a = 1"""
    return tuple(int(x) for x in np.flatnonzero(A.join[A.indices, A.neg] == A.top))


def decompose_chains(A: FiniteGAlgebra) -> List[ChainFactor]:
    """
    Factor A as a product of G∼-chains through the atoms of its Boolean center.

    Each atom e yields the factor ↓e with x ↦ x ∧ e as projection. Factors are
    ordered by descending atom index, which reproduces the factor order of
    direct_product.

    Raises:
        DecompositionError: a factor is not a chain, or the projections do not
            assemble into an isomorphism
    """
    center = boolean_center(A)
    atoms = [
        e for e in center
        if e != A.bottom and not any(y not in (A.bottom, e) and A.leq[y, e] for y in center)
    ]
    atoms.sort(reverse=True)
    factors: List[ChainFactor] = []
    for e in atoms:
        members = np.flatnonzero(A.leq[:, e])
        block = A.leq[np.ix_(members, members)]
        if not np.all(block | block.T):
            raise DecompositionError(
                f"not a G∼-algebra decomposition: factor below {A.label(e)} is not a chain",
                coordinates=(e,),
            )
        order = members[np.argsort(A.ranks[members], kind='stable')]
        m = len(order)
        position = np.full(A.size, -1, dtype=np.int64)
        position[order] = np.arange(m)
        projection = position[A.meet[:, e]]
        projection.setflags(write=False)
        factors.append(ChainFactor(make_chain(m, validate=False), projection))

    if not factors:
        return factors
    shape = tuple(f.chain.size for f in factors)
    codes = np.ravel_multi_index(tuple(f.projection for f in factors), shape)
    product = direct_product([f.chain for f in factors], validate=False)
    if not is_isomorphism(A, product, codes):
        raise DecompositionError(
            "not a G∼-algebra decomposition: projections do not give an isomorphism onto the product of chains",
            coordinates=shape,
        )
    logger.debug(f"Decomposed algebra of size {A.size} into chains {shape}")
    return factors


def product_coordinates(A: FiniteGAlgebra) -> Tuple[Tuple[int, ...], np.ndarray]:
    """Chain sizes and an (n, r) array of coordinates of every element"""
    factors = decompose_chains(A)
    shape = tuple(f.chain.size for f in factors)
    if not factors:
        return shape, np.zeros((A.size, 0), dtype=np.int64)
    return shape, np.stack([f.projection for f in factors], axis=1)


def find_isomorphism(A: FiniteGAlgebra, B: FiniteGAlgebra) -> Optional[Tuple[int, ...]]:
    """
    Lexicographically least isomorphism A -> B, or None.

    Backtracking assigns A's elements in index order, trying B's elements in
    ascending order, pruned by down/up-set sizes, order relations and ∼.
    """
    n = A.size
    if n != B.size:
        return None
    down_a, up_a = A.leq.sum(axis=0), A.leq.sum(axis=1)
    down_b, up_b = B.leq.sum(axis=0), B.leq.sum(axis=1)
    fixed_a, fixed_b = A.sim == A.indices, B.sim == B.indices
    assignment = np.full(n, -1, dtype=np.int64)
    used = np.zeros(n, dtype=bool)

    def extend(k: int) -> bool:
        if k == n:
            return is_isomorphism(A, B, assignment)
        assigned = assignment[:k]
        for b in range(n):
            if used[b] or down_a[k] != down_b[b] or up_a[k] != up_b[b] or fixed_a[k] != fixed_b[b]:
                continue
            if not np.array_equal(A.leq[k, :k], B.leq[b, assigned]):
                continue
            if not np.array_equal(A.leq[:k, k], B.leq[assigned, b]):
                continue
            partner = int(A.sim[k])
            if partner < k and B.sim[b] != assignment[partner]:
                continue
            assignment[k] = b
            used[b] = True
            if extend(k + 1):
                return True
            assignment[k] = -1
            used[b] = False
        return False

    if extend(0):
        return tuple(int(v) for v in assignment)
    return None


def join_all(A: FiniteGAlgebra, elements: Iterable[int]) -> int:
    return reduce(lambda x, y: int(A.join[x, y]), elements, A.bottom)


def meet_all(A: FiniteGAlgebra, elements: Iterable[int]) -> int:
    return reduce(lambda x, y: int(A.meet[x, y]), elements, A.top)
