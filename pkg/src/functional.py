#!/usr/bin/env python3
"""
Functional Monadic G∼-Algebras
Power algebras with sup/inf quantifiers, the exact-rational sequence family
for finite CMG∼ chains, the barred power construction and the ordinal-sum
representation of finite s.i. CMG∼-algebras with a fixed point.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    FiniteGAlgebra,
    SubalgebraWitness,
    decompose_chains,
    direct_product,
    fixed_points,
    generated_subalgebra,
    make_chain,
)
from .config import get_config
from .errors import InvalidInputError, PreconditionError, StructuralError
from .monadic import (
    MonadicGAlgebra,
    attach_quantifiers,
    preserves_operations,
    satisfies_C,
    validate_monadic,
)
from .parallel import ordered_map

logger = logging.getLogger("gsim.functional")

ONE = Fraction(1)
ZERO = Fraction(0)


def godel_imp(x: Fraction, y: Fraction) -> Fraction:
    """Gödel implication on [0,1]"""
    return ONE if x <= y else y


def godel_sim(x: Fraction) -> Fraction:
    return ONE - x


def _require_chain(A: FiniteGAlgebra, operation: str) -> None:
    if not A.is_chain:
        raise PreconditionError(f"{operation} needs a totally ordered G∼-algebra", clause='chain')


def _ascending(A: FiniteGAlgebra) -> np.ndarray:
    """Elements of a chain from bottom to top"""
    return np.argsort(A.ranks, kind='stable')


def _finish(M: MonadicGAlgebra, what: str, validate: Optional[bool] = None) -> MonadicGAlgebra:
    if get_config().validate_constructions if validate is None else validate:
        failure = validate_monadic(M).first_failure
        if failure is not None:
            raise StructuralError(f"{what} fails {failure.family}/{failure.law}", coordinates=failure.witness)
        M.validated = True
    return M


# =============================================================================
# Functional algebras
# =============================================================================

def make_functional(chain: FiniteGAlgebra, index_size: int, validate: Optional[bool] = None) -> MonadicGAlgebra:
    """
    The full power chain^X for |X| = index_size, with ∃ = pointwise sup and
    ∀ = pointwise inf broadcast as constant tuples.

    Example:
        M = make_functional(make_chain(3), 2)
        M.range     # the three constant pairs

    Raises:
        PreconditionError: chain not totally ordered, or index_size < 1
    """
    _require_chain(chain, 'make_functional')
    if index_size < 1:
        raise PreconditionError(f"index set must be nonempty, got {index_size}", clause='index-size')
    base = direct_product([chain] * index_size, validate=validate)
    shape = (chain.size,) * index_size
    coords = np.stack(np.unravel_index(base.indices, shape))  # (m, N)
    ranks = chain.ranks[coords]
    column = base.indices
    sup = coords[np.argmax(ranks, axis=0), column]
    inf = coords[np.argmin(ranks, axis=0), column]
    exists = np.ravel_multi_index((sup,) * index_size, shape)
    forall = np.ravel_multi_index((inf,) * index_size, shape)
    M = _finish(MonadicGAlgebra(base, exists, forall), f"functional algebra C_{chain.size}^{index_size}", validate)
    logger.debug(f"Built functional algebra over {chain.size}-chain with |X| = {index_size}")
    return M


@dataclass
class FunctionalAlgebra:
    """
    A functional monadic subalgebra of chain^X: the carrier is closed under
    the pointwise operations and under the sup/inf quantifiers.
    """
    value_chain: FiniteGAlgebra
    index_size: int
    power: MonadicGAlgebra = field(repr=False)
    carrier: Tuple[int, ...]

    @property
    def constants(self) -> Tuple[int, ...]:
        return tuple(x for x in self.carrier if x in set(self.power.range))

    def tuples(self) -> List[Tuple[str, ...]]:
        shape = (self.value_chain.size,) * self.index_size
        return [
            tuple(self.value_chain.label(c) for c in np.unravel_index(x, shape))
            for x in self.carrier
        ]

    def as_monadic(self) -> MonadicGAlgebra:
        """The carrier as a MonadicGAlgebra, quantifiers restricted"""
        witness = SubalgebraWitness(self.power.base, self.carrier)
        A = witness.as_algebra()
        position = {x: k for k, x in enumerate(witness.elements)}
        C = SubalgebraWitness(A, [position[x] for x in self.constants])
        return attach_quantifiers(A, C)

    def check_invariants(self) -> Dict[str, bool]:
        P = self.power
        carrier = set(self.carrier)
        return {
            'closed': SubalgebraWitness(P.base, self.carrier).is_closed,
            'closed_under_quantifiers': all(int(P.exists[x]) in carrier and int(P.forall[x]) in carrier
                                            for x in self.carrier),
            'constants_are_range': set(self.constants) == {int(P.exists[x]) for x in self.carrier}
                                   == {int(P.forall[x]) for x in self.carrier},
        }


def functional_algebra(chain: FiniteGAlgebra, index_size: int,
                       generators: Optional[Sequence[int]] = None) -> FunctionalAlgebra:
    """
    Least functional subalgebra of chain^X containing generators (all tuples
    when generators is None).
    """
    power = make_functional(chain, index_size)
    if generators is None:
        carrier = tuple(int(x) for x in power.base.indices)
    else:
        current = SubalgebraWitness(power.base, generators).elements
        while True:
            seeds = set(current) | {int(power.exists[x]) for x in current} | {int(power.forall[x]) for x in current}
            grown = generated_subalgebra(power.base, seeds).elements
            if grown == current:
                break
            current = grown
        carrier = current
    return FunctionalAlgebra(chain, index_size, power, carrier)


def bar_quantifiers(M: MonadicGAlgebra, n: int) -> MonadicGAlgebra:
    """
    M's base to the power n with ∃̄(a)(i) = ∃(a_1 ∨ … ∨ a_n) and
    ∀̄(a)(i) = ∀(a_1 ∧ … ∧ a_n).

    Raises:
        PreconditionError: M's base is not a chain, or n < 1
    """
    A = M.base
    _require_chain(A, 'bar_quantifiers')
    if n < 1:
        raise PreconditionError(f"power exponent must be positive, got {n}", clause='index-size')
    power = direct_product([A] * n)
    shape = (A.size,) * n
    coords = np.unravel_index(power.indices, shape)
    joined = reduce(lambda x, y: A.join[x, y], coords)
    met = reduce(lambda x, y: A.meet[x, y], coords)
    exists = np.ravel_multi_index((M.exists[joined],) * n, shape)
    forall = np.ravel_multi_index((M.forall[met],) * n, shape)
    return _finish(MonadicGAlgebra(power, exists, forall), f"barred power of exponent {n}")


# =============================================================================
# Rational sequence family
# =============================================================================

@dataclass(frozen=True)
class SequenceTerm:
    """
    One member of the family over k: the constant g_i = i/2k, or f_i^(j)
    whose value at n ≥ 1 is

        i/2k − (1/2k)(1 − 1/(n+1))^j   for even n
        i/2k − (1/2k)(1/(n+1))^j       for odd n

    Mirrored terms are x ↦ 1 − value.
    """
    kind: str  # 'g' | 'f'
    k: int
    i: int
    j: int = 0
    mirrored: bool = False

    def _raw(self, n: int) -> Fraction:
        g = Fraction(self.i, 2 * self.k)
        if self.kind == 'g':
            return g
        step = Fraction(1, 2 * self.k)
        if n % 2 == 0:
            return g - step * (1 - Fraction(1, n + 1)) ** self.j
        return g - step * Fraction(1, n + 1) ** self.j

    def value(self, n: int) -> Fraction:
        if n < 1:
            raise InvalidInputError(f"coordinates start at 1, got {n}")
        raw = self._raw(n)
        return ONE - raw if self.mirrored else raw

    @property
    def _bounds(self) -> Tuple[Fraction, Fraction]:
        g = Fraction(self.i, 2 * self.k)
        if self.kind == 'g':
            return g, g
        # even branch decreases to g_{i-1}, odd branch increases to g_i
        return Fraction(self.i - 1, 2 * self.k), g

    @property
    def infimum(self) -> Fraction:
        low, high = self._bounds
        return ONE - high if self.mirrored else low

    @property
    def supremum(self) -> Fraction:
        low, high = self._bounds
        return ONE - low if self.mirrored else high

    @property
    def is_constant(self) -> bool:
        return self.kind == 'g'

    def mirror(self) -> "SequenceTerm":
        return SequenceTerm(self.kind, self.k, self.i, self.j, not self.mirrored)

    @property
    def label(self) -> str:
        base = f"g_{self.i}" if self.kind == 'g' else f"f_{self.i}^({self.j})"
        return f"~{base}" if self.mirrored else base


@dataclass(frozen=True)
class RationalSequenceFamily:
    """Constants g_0..g_k and the sequences f_i^(j) for a range of 2k+1 elements"""
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInputError(f"k must be positive, got {self.k}")

    def g(self, i: int) -> SequenceTerm:
        return SequenceTerm('g', self.k, i)

    def f(self, i: int, j: int) -> SequenceTerm:
        if not 1 <= i <= self.k or j < 1:
            raise InvalidInputError(f"f_{i}^({j}) is outside the family over k = {self.k}")
        return SequenceTerm('f', self.k, i, j)

    def constants(self) -> List[SequenceTerm]:
        return [self.g(i) for i in range(self.k + 1)]


def _fraction_pair(x: Fraction) -> List[int]:
    return [x.numerator, x.denominator]


@dataclass
class EmbeddingReport:
    """
    An embedding of a finite MG∼-algebra into sequences over X × {1..sheets}:
    terms[a][s] is the image of a on sheet s.
    """
    source: MonadicGAlgebra = field(repr=False)
    k: int
    sheets: int
    terms: Tuple[Tuple[SequenceTerm, ...], ...]
    checks: Dict[str, bool]
    sampled: int
    chain: Optional[MonadicGAlgebra] = field(default=None, repr=False)  # the 1-sheet source

    @property
    def verified(self) -> bool:
        return all(self.checks.values())

    def value(self, element: int, n: int, sheet: int = 0) -> Fraction:
        return self.terms[int(element)][sheet].value(n)

    def to_dict(self) -> Dict[str, Any]:
        A = self.source.base
        mapping = {}
        for x, terms in enumerate(self.terms):
            mapping[A.label(x)] = {
                'terms': [t.label for t in terms],
                'inf': [_fraction_pair(t.infimum) for t in terms],
                'sup': [_fraction_pair(t.supremum) for t in terms],
                'values': [[_fraction_pair(t.value(n)) for t in terms] for n in range(1, min(3, self.sampled) + 1)],
            }
        return {
            'k': self.k,
            'sheets': self.sheets,
            'map': mapping,
            'checks': dict(self.checks),
            'sampled': self.sampled,
            'verified': self.verified,
        }


def _sheet_values(terms: Tuple[Tuple[SequenceTerm, ...], ...], n: int) -> List[List[Fraction]]:
    """values[s][x] at coordinate n, each distinct term evaluated once"""
    cache: Dict[SequenceTerm, Fraction] = {}
    sheets = len(terms[0])
    values = [[ZERO] * len(terms) for _ in range(sheets)]
    for x, row in enumerate(terms):
        for s, t in enumerate(row):
            if t not in cache:
                cache[t] = t.value(n)
            values[s][x] = cache[t]
    return values


def _coordinate_checks(args: Tuple[Any, ...]) -> Dict[str, bool]:
    """Operation preservation at one coordinate n, on every sheet"""
    terms, meet, join, imp, sim, n = args
    ok = {'meet': True, 'join': True, 'imp': True, 'sim': True, 'order': True}
    for values in _sheet_values(terms, n):
        universe = sorted(set(values) | {ZERO, ONE})
        rank = {v: r for r, v in enumerate(universe)}
        R = np.array([rank[v] for v in values], dtype=np.int64)
        one = rank[ONE]
        a, b = R[:, None], R[None, :]
        ok['meet'] &= bool(np.array_equal(R[meet], np.minimum(a, b)))
        ok['join'] &= bool(np.array_equal(R[join], np.maximum(a, b)))
        ok['imp'] &= bool(np.array_equal(R[imp], np.where(a <= b, one, b)))
        ok['sim'] &= all(values[sim[x]] == godel_sim(v) for x, v in enumerate(values))
        ok['order'] &= ZERO <= universe[0] and universe[-1] <= ONE
    return ok


def _verify_terms(source: MonadicGAlgebra, terms: Tuple[Tuple[SequenceTerm, ...], ...],
                  sample: int) -> Dict[str, bool]:
    """Ops checked at n = 1..sample; quantifiers through the closed-form inf/sup"""
    A = source.base
    jobs = [(terms, A.meet, A.join, A.imp, A.sim, n) for n in range(1, sample + 1)]
    per_coordinate = ordered_map(_coordinate_checks, jobs)
    checks = {name: all(r[name] for r in per_coordinate) for name in ('meet', 'join', 'imp', 'sim', 'order')}
    checks['injective'] = len(set(terms)) == len(terms)

    def constant(x: int) -> Optional[Fraction]:
        if all(t.is_constant for t in terms[x]) and len({t.infimum for t in terms[x]}) == 1:
            return terms[x][0].infimum
        return None

    checks['exists'] = all(
        constant(int(source.exists[x])) == max(t.supremum for t in terms[x]) for x in range(A.size)
    )
    checks['forall'] = all(
        constant(int(source.forall[x])) == min(t.infimum for t in terms[x]) for x in range(A.size)
    )

    # a < b gives a pointwise ≤ (from meet), strict at coordinate 1 or 2
    early = [np.array(_sheet_values(terms, n)) for n in (1, 2)]
    checks['strict_order'] = all(
        any(np.any(v[:, a] < v[:, b]) for v in early) for a, b in np.argwhere(A.lt)
    )
    return checks


def _chain_terms(M: MonadicGAlgebra) -> Tuple[int, Tuple[SequenceTerm, ...]]:
    """k and the image of every element of a CMG∼ chain with fixed point in range"""
    A = M.base
    _require_chain(A, 'rational_chain_embedding')
    fixed = fixed_points(A)
    if not fixed:
        raise PreconditionError("the rational embedding needs a fixed point", clause='fixed-point')
    d = fixed[0]
    if d not in M.range:
        raise PreconditionError("the fixed point must lie in the quantifier range", clause='range-shape')
    order = [int(x) for x in _ascending(A)]
    lower_half = order[:order.index(d) + 1]
    range_low = [x for x in lower_half if x in set(M.range)]
    k = len(range_low) - 1
    if k < 1:
        raise PreconditionError("range must contain elements below the fixed point", clause='range-shape')
    family = RationalSequenceFamily(k)
    image: Dict[int, SequenceTerm] = {}
    i, j = 0, 0
    for x in lower_half:
        if x in range_low:
            image[x] = family.g(i)
            i, j = i + 1, 0
        else:
            j += 1
            image[x] = family.f(i, j)
    for x in range(A.size):
        if x not in image:
            image[x] = image[int(A.sim[x])].mirror()
    return k, tuple(image[x] for x in range(A.size))


def rational_chain_embedding(M: MonadicGAlgebra, sample: Optional[int] = None) -> EmbeddingReport:
    """
    Map a finite CMG∼ chain with fixed point d ∈ ∃A into the rational
    sequences: c_i ↦ g_i, the j-th element above c_{i-1} ↦ f_i^(j), and
    ∼x ↦ 1 − (image of x).

    Operation preservation is checked with exact rationals at coordinates
    1..sample (default: sample_depth); quantifier images come from the
    closed-form inf/sup.

    Raises:
        PreconditionError: not a chain, no fixed point, or d ∉ ∃A
    """
    if not M.validated:
        failure = validate_monadic(M).first_failure
        if failure is not None:
            raise PreconditionError(f"input is not an MG∼-algebra: {failure.family}/{failure.law}",
                                    clause='validated')
    k, images = _chain_terms(M)
    sample = get_config().sample_depth if sample is None else sample
    terms = tuple((t,) for t in images)
    checks = _verify_terms(M, terms, sample)
    report = EmbeddingReport(M, k, 1, terms, checks, sample, chain=M)
    logger.info(f"Rational embedding of a {M.size}-chain (k = {k}): verified={report.verified}")
    return report


def power_embedding(report: EmbeddingReport, n: int, sample: Optional[int] = None) -> EmbeddingReport:
    """
    ψ(a_1, …, a_n)(x, i) = φ(a_i)(x) from the barred power of the chain into
    sequences over X × {1..n}.

    Raises:
        PreconditionError: report not verified, or not a chain embedding
    """
    if report.sheets != 1 or report.chain is None:
        raise PreconditionError("ψ is built from a chain embedding", clause='chain')
    if not report.verified:
        raise PreconditionError("ψ needs a verified chain embedding", clause='verified')
    M = report.chain
    power = bar_quantifiers(M, n)
    shape = (M.size,) * n
    coordinates = np.stack(np.unravel_index(power.base.indices, shape), axis=1)
    terms = tuple(tuple(report.terms[c][0] for c in row) for row in coordinates)
    sample = report.sampled if sample is None else sample
    checks = _verify_terms(power, terms, sample)
    psi = EmbeddingReport(power, report.k, n, terms, checks, sample, chain=M)
    logger.info(f"Power embedding with {n} sheets: verified={psi.verified}")
    return psi


# =============================================================================
# Ordinal-sum representation
# =============================================================================

@dataclass
class RepresentationReport:
    source: MonadicGAlgebra = field(repr=False)
    chain: FiniteGAlgebra  # the ordinal sum B
    monadic_chain: MonadicGAlgebra = field(repr=False)  # B with range C
    power: MonadicGAlgebra = field(repr=False)  # B^r with barred quantifiers
    embedding: Tuple[int, ...]  # element of the source -> element of B^r
    factor_embeddings: Tuple[Tuple[int, ...], ...]  # chain factor position -> position in B
    checks: Dict[str, bool]

    @property
    def verified(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'chain_size': self.chain.size,
            'exponent': len(self.factor_embeddings),
            'range': self.chain.labels(self.monadic_chain.range),
            'embedding': list(self.embedding),
            'factor_embeddings': [list(e) for e in self.factor_embeddings],
            'checks': dict(self.checks),
            'verified': self.verified,
        }


def ordinal_sum_representation(M: MonadicGAlgebra) -> RepresentationReport:
    """
    Embed a finite s.i. CMG∼-algebra with fixed point into B^r with barred
    quantifiers, where B interleaves the open segments of every factor chain
    around the shared range:

        c_0, A_11 … A_r1, c_1, …, A_1k … A_rk, c_k = d, ∼A_rk … ∼A_1k, ∼c_{k−1}, …, ∼c_0

    Raises:
        PreconditionError: not s.i., (C) fails, no fixed point, or mixed parity
    """
    A = M.base
    if not M.si:
        raise PreconditionError("representation needs a subdirectly irreducible algebra",
                                clause='subdirectly-irreducible')
    if not satisfies_C(M):
        raise PreconditionError("representation needs a CMG∼-algebra", clause='C')
    factors = decompose_chains(A)
    if len({f.chain.size % 2 for f in factors}) > 1:
        raise PreconditionError("factor chains of mixed parity", clause='parity')
    fixed = fixed_points(A)
    if not fixed:
        raise PreconditionError("representation needs a fixed point", clause='fixed-point')
    d = fixed[0]

    # range below d, ascending
    low = [c for c in sorted(M.range, key=lambda c: A.ranks[c]) if A.leq[c, d]]
    k = len(low) - 1
    segments = []  # segments[j][i]: open positions of factor i between c_{j-1} and c_j
    for j in range(1, k + 1):
        row = []
        for f in factors:
            lo, hi = int(f.projection[low[j - 1]]), int(f.projection[low[j]])
            row.append(list(range(lo + 1, hi)))
        segments.append(row)

    # slots of the lower half; the upper half mirrors it
    slot = [{} for _ in factors]
    position = 0
    c_slots = [0]
    for i, f in enumerate(factors):
        slot[i][int(f.projection[low[0]])] = 0
    for j in range(1, k + 1):
        for i, seg in enumerate(segments[j - 1]):
            for p in seg:
                position += 1
                slot[i][p] = position
        position += 1
        c_slots.append(position)
        for i, f in enumerate(factors):
            slot[i][int(f.projection[low[j]])] = position
    size = 2 * position + 1
    B = make_chain(size)
    factor_embeddings = []
    for i, f in enumerate(factors):
        n = f.chain.size
        e = [slot[i][p] if p in slot[i] else size - 1 - slot[i][n - 1 - p] for p in range(n)]
        factor_embeddings.append(tuple(e))

    range_b = sorted(set(c_slots) | {size - 1 - c for c in c_slots})
    MB = attach_quantifiers(B, SubalgebraWitness(B, range_b))
    r = len(factors)
    power = bar_quantifiers(MB, r)
    shape = (size,) * r
    embedding = np.ravel_multi_index(
        tuple(np.asarray(e)[f.projection] for e, f in zip(factor_embeddings, factors)), shape
    )
    checks = {
        'factor_embeddings': all(
            preserves_operations(f.chain, B, e) for f, e in zip(factors, factor_embeddings)
        ),
        'operations': preserves_operations(A, power.base, embedding),
        'exists': bool(np.array_equal(embedding[M.exists], power.exists[embedding])),
        'forall': bool(np.array_equal(embedding[M.forall], power.forall[embedding])),
        'range_projections_injective': all(
            len({int(f.projection[c]) for c in M.range}) == len(M.range) for f in factors
        ),
    }
    report = RepresentationReport(M, B, MB, power, tuple(int(x) for x in embedding),
                                  tuple(factor_embeddings), checks)
    logger.info(f"Ordinal sum of size {size} for chains {tuple(f.chain.size for f in factors)}: "
                f"verified={report.verified}")
    return report


@dataclass
class FunctionalRepresentation:
    representation: RepresentationReport
    chain_embedding: EmbeddingReport
    power_embedding: EmbeddingReport
    terms: Tuple[Tuple[SequenceTerm, ...], ...]  # element of the source -> sheets

    @property
    def verified(self) -> bool:
        return (
            self.representation.verified
            and self.chain_embedding.verified
            and self.power_embedding.verified
            and len(set(self.terms)) == len(self.terms)
        )

    def to_dict(self) -> Dict[str, Any]:
        A = self.representation.source.base
        return {
            'representation': self.representation.to_dict(),
            'chain_embedding': {k: v for k, v in self.chain_embedding.to_dict().items() if k != 'map'},
            'power_embedding': {k: v for k, v in self.power_embedding.to_dict().items() if k != 'map'},
            'map': {A.label(x): [t.label for t in terms] for x, terms in enumerate(self.terms)},
            'verified': self.verified,
        }


def functional_representation(M: MonadicGAlgebra, sample: Optional[int] = None) -> FunctionalRepresentation:
    """Ordinal-sum representation followed by the power embedding of B^r"""
    rep = ordinal_sum_representation(M)
    phi = rational_chain_embedding(rep.monadic_chain, sample)
    psi = power_embedding(phi, len(rep.factor_embeddings), sample)
    terms = tuple(psi.terms[x] for x in rep.embedding)
    return FunctionalRepresentation(rep, phi, psi, terms)
