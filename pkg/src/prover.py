#!/usr/bin/env python3
"""
Bounded Consequence Search
Decides Γ ⊨ φ up to a size bound by searching for countermodels among finite
s.i. CMG∼-algebras with a fixed point (products of odd chains whose range
contains the fixed point), and among finite Kripke structures over C_m.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from .algebra import FiniteGAlgebra, SubalgebraWitness, direct_product, fixed_points, make_chain
from .config import get_config
from .errors import InvalidInputError, SizeBoundError, StructuralError
from .formula import Formula, format_formula, parse_formula, variables
from .functional import make_functional
from .monadic import MonadicGAlgebra, attach_quantifiers, enumerate_m_rel_complete, satisfies_C
from .parallel import ordered_map
from .semantics import KripkeStructure, decode_assignment, eval_kripke, evaluate_all, world_values

logger = logging.getLogger("gsim.prover")


@dataclass(frozen=True)
class ConsequenceQuery:
    """Γ ⊨ φ with search bounds; None bounds fall back to the configuration"""
    premises: Tuple[Formula, ...]
    goal: Formula
    max_size: Optional[int] = None
    kripke_worlds: Optional[int] = None
    kripke_chain: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'premises', tuple(self.premises))
        for name in ('max_size', 'kripke_worlds', 'kripke_chain'):
            value = getattr(self, name)
            if value is not None and (not isinstance(value, int) or value < 1):
                raise InvalidInputError(f"{name} must be a positive integer, got {value!r}")

    @property
    def variables(self) -> Tuple[str, ...]:
        return variables(list(self.premises) + [self.goal])

    def bounds(self) -> Tuple[int, int, int]:
        config = get_config()
        return (
            self.max_size or config.search_max_size,
            self.kripke_worlds or config.kripke_worlds,
            self.kripke_chain or config.kripke_chain,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'premises': [format_formula(p) for p in self.premises],
            'goal': format_formula(self.goal),
        }


def parse_query(text: str, **bounds: Any) -> ConsequenceQuery:
    """
    Query text: one premise per line, last line '|- goal'. Blank lines and
    lines starting with '#' are skipped.

    Raises:
        InvalidInputError: missing or misplaced goal line
        FormulaSyntaxError: a formula does not parse
    """
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line and not line.startswith('#')]
    if not lines or not lines[-1].startswith('|-'):
        raise InvalidInputError("query needs a final goal line starting with '|-'")
    if any(line.startswith('|-') for line in lines[:-1]):
        raise InvalidInputError("only the last line may be a goal")
    premises = tuple(parse_formula(line) for line in lines[:-1])
    goal = parse_formula(lines[-1][2:])
    return ConsequenceQuery(premises, goal, **bounds)


@dataclass
class Verdict:
    verdict: str  # valid | countermodel
    bound: int
    semantics: str  # algebra | kripke
    algebras_examined: int = 0
    model: Optional[MonadicGAlgebra] = field(default=None, repr=False)
    chains: Tuple[int, ...] = ()
    assignment: Optional[Dict[str, int]] = None
    value: Optional[int] = None
    conclusive: bool = False
    partial: bool = False
    kripke: Optional[KripkeStructure] = field(default=None, repr=False)
    world: Optional[str] = None

    @property
    def is_countermodel(self) -> bool:
        return self.verdict == 'countermodel'

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'verdict': self.verdict,
            'bound': self.bound,
            'semantics': self.semantics,
            'algebras_examined': self.algebras_examined,
            'conclusive': self.conclusive,
            'partial': self.partial,
        }
        if self.model is not None:
            A = self.model.base
            data['model'] = self.model.to_dict()
            data['chains'] = list(self.chains)
            data['assignment'] = dict(self.assignment or {})
            data['assignment_labels'] = {p: A.label(v) for p, v in (self.assignment or {}).items()}
            data['value'] = self.value
            data['value_label'] = A.label(self.value)
        if self.kripke is not None:
            data['kripke'] = self.kripke.to_dict()
            data['world'] = self.world
        return data


# =============================================================================
# Algebraic search
# =============================================================================

def odd_chain_partitions(max_size: int) -> List[Tuple[int, ...]]:
    """Non-increasing tuples of odd chain sizes ≥ 3 with product ≤ max_size, by (product, tuple)"""
    found: List[Tuple[int, ...]] = []

    def grow(prefix: Tuple[int, ...], largest: int, product: int) -> None:
        if prefix:
            found.append(prefix)
        for n in range(3, min(largest, max_size // product) + 1, 2):
            grow(prefix + (n,), n, product * n)

    grow((), max_size, 1)
    return sorted(found, key=lambda c: (math.prod(c), c))


def _chain_ranges(A: FiniteGAlgebra, d: int) -> Iterator[SubalgebraWitness]:
    """Subalgebras of an odd chain that hold d, lazily in lexicographic order of their elements"""
    lower = list(range(A.bottom + 1, d))

    def choose(start: int) -> Iterator[Tuple[int, ...]]:
        # longer continuations first: d follows the lower part and exceeds it
        for k in range(start, len(lower)):
            for rest in choose(k + 1):
                yield (lower[k],) + rest
        yield ()

    for chosen in choose(0):
        mirrors = tuple(int(A.sim[x]) for x in chosen)
        yield SubalgebraWitness(A, (A.bottom,) + chosen + (d,) + mirrors + (A.top,))


def candidate_algebras(max_size: int) -> Iterator[Tuple[Tuple[int, ...], MonadicGAlgebra]]:
    """
    Every s.i. CMG∼-algebra with fixed point up to max_size, generated lazily
    in canonical order: size, chain partition, then range elements.

    Raises:
        SizeBoundError: a product of chains exceeds max_enumeration_size
    """
    produced = 0
    for chains in odd_chain_partitions(max_size):
        A = direct_product([make_chain(n, validate=False) for n in chains], validate=False)
        d = fixed_points(A)[0]
        if A.is_chain:
            ranges: Iterator[SubalgebraWitness] = _chain_ranges(A, d)
        else:
            ranges = (C for C in enumerate_m_rel_complete(A, totally_ordered_only=True) if d in C)
        for C in ranges:
            M = attach_quantifiers(A, C, validate=False)
            if M.si and satisfies_C(M):
                produced += 1
                yield chains, M
    logger.info(f"{produced} s.i. CMG∼ candidates up to size {max_size}")


def _search_candidate(args: Tuple[MonadicGAlgebra, Tuple[Formula, ...], Formula, Tuple[str, ...]]) -> Optional[Tuple[int, int]]:
    """First (assignment position, goal value) with all premises 1 and the goal below 1"""
    M, premises, goal, names = args
    top = M.base.top
    holds = np.ones(M.size ** len(names), dtype=bool)
    for premise in premises:
        holds &= evaluate_all(M, premise, names) == top
    goal_values = evaluate_all(M, goal, names)
    hits = np.flatnonzero(holds & (goal_values != top))
    if hits.size == 0:
        return None
    return int(hits[0]), int(goal_values[hits[0]])


def consequence_search(query: ConsequenceQuery, workers: Optional[int] = None) -> Verdict:
    """
    Canonically first countermodel among s.i. CMG∼-algebras with fixed point
    up to the size bound, or a bounded valid verdict.

    Candidates are generated lazily and evaluated in blocks of batch_size
    across the worker pool; the first hit in canonical order wins whatever the
    pool degree. Generation stops once search_budget algebras have been
    examined, giving a partial verdict. The verdict is conclusive only for
    variable-free queries, whose values are fixed by the {0, 1} subalgebra
    shared by every algebra searched.
    """
    config = get_config()
    max_size = query.bounds()[0]
    names = query.variables
    budget, batch = config.search_budget, config.batch_size
    examined = 0
    block: List[Tuple[Tuple[int, ...], MonadicGAlgebra]] = []

    def partial(bound: int, reason: str) -> Verdict:
        logger.warning(f"{reason}; valid up to size {bound}")
        return Verdict('valid', bound, 'algebra', examined, partial=True)

    def flush() -> Optional[Verdict]:
        nonlocal examined
        if not block:
            return None
        try:
            results = ordered_map(
                _search_candidate,
                [(M, query.premises, query.goal, names) for _, M in block],
                workers,
            )
        except SizeBoundError as e:
            return partial(block[0][1].size - 1, f"Assignment grid refused: {e.message}")
        for (chains, M), hit in zip(block, results):
            examined += 1
            if hit is not None:
                position, value = hit
                logger.info(f"Countermodel on chains {chains} after {examined} algebras")
                return Verdict(
                    'countermodel', M.size, 'algebra', examined, model=M, chains=chains,
                    assignment=decode_assignment(M, names, position), value=value,
                )
        block.clear()
        return None

    try:
        for chains, M in candidate_algebras(max_size):
            if examined + len(block) >= budget:
                return flush() or partial(M.size - 1, f"Search budget of {budget} algebras exhausted")
            block.append((chains, M))
            if len(block) >= batch:
                verdict = flush()
                if verdict is not None:
                    return verdict
    except SizeBoundError as e:
        return flush() or partial(e.size - 1, f"Candidate enumeration refused: {e.message}")
    verdict = flush()
    if verdict is not None:
        return verdict
    logger.info(f"No countermodel among {examined} algebras up to size {max_size}")
    return Verdict('valid', max_size, 'algebra', examined, conclusive=not names and max_size >= 3)



# =============================================================================
# Kripke search
# =============================================================================

def kripke_countermodel(query: ConsequenceQuery) -> Verdict:
    """
    First K = ⟨W, e, C_m⟩ (m ascending, then |W|, then valuations in
    lexicographic order) in which every premise is 1 at every world and the
    goal is below 1 at some world.

    Valuations over W are the elements of the functional algebra C_m^W, so the
    search runs there and the hit is re-checked with eval_kripke.
    """
    _, max_worlds, max_chain = query.bounds()
    names = query.variables
    examined = 0
    for m in range(2, max_chain + 1):
        chain = make_chain(m, validate=False)
        for width in range(1, max_worlds + 1):
            M = make_functional(chain, width, validate=False)
            examined += 1
            try:
                hit = _search_candidate((M, query.premises, query.goal, names))
            except SizeBoundError as e:
                logger.warning(f"Kripke search stopped at C_{m}, |W| = {width}: {e.message}")
                return Verdict('valid', m - 1, 'kripke', examined, partial=True)
            if hit is None:
                continue
            position, value = hit
            worlds = tuple(f"w{i + 1}" for i in range(width))
            shape = (m,) * width
            valuation = {
                p: tuple(int(c) for c in np.unravel_index(v, shape))
                for p, v in decode_assignment(M, names, position).items()
            }
            K = KripkeStructure(worlds, chain, valuation)
            world = worlds[int(np.flatnonzero(world_values(K, value) != chain.top)[0])]
            if eval_kripke(K, world, query.goal) == chain.top or any(
                eval_kripke(K, w, p) != chain.top for w in worlds for p in query.premises
            ):
                raise StructuralError("Kripke countermodel disagrees with its functional algebra")
            logger.info(f"Kripke countermodel over C_{m} with {width} worlds")
            return Verdict('countermodel', m, 'kripke', examined, kripke=K, world=world)
    return Verdict('valid', max_chain, 'kripke', examined)
