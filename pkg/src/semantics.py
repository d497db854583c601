#!/usr/bin/env python3
"""
Formula Semantics
Evaluation in monadic G∼-algebras (□ ↦ ∀, ◇ ↦ ∃) and in finite Kripke
structures ⟨W, e, L⟩, plus seeded random sampling of the bridge between them.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import FiniteGAlgebra, make_chain
from .errors import InvalidInputError, PreconditionError, SizeBoundError
from .formula import And, Bot, Box, Diamond, Formula, Imp, Or, Sim, Top, Var, format_formula, variables
from .functional import make_functional
from .monadic import MonadicGAlgebra

logger = logging.getLogger("gsim.semantics")

MAX_ASSIGNMENTS = 5_000_000
SAMPLE_VARIABLES = "pqrstu"


def _evaluate(M: MonadicGAlgebra, phi: Formula, env: Mapping[str, Any]) -> Any:
    """Elementwise evaluation; env values may be ints or index arrays"""
    A = M.base
    match phi:
        case Var(name):
            if name not in env:
                raise InvalidInputError(f"variable '{name}' is not assigned", variable=name)
            return env[name]
        case Bot():
            return A.bottom
        case Top():
            return A.top
        case And(a, b):
            return A.meet[_evaluate(M, a, env), _evaluate(M, b, env)]
        case Or(a, b):
            return A.join[_evaluate(M, a, env), _evaluate(M, b, env)]
        case Imp(a, b):
            return A.imp[_evaluate(M, a, env), _evaluate(M, b, env)]
        case Sim(x):
            return A.sim[_evaluate(M, x, env)]
        case Box(x):
            return M.forall[_evaluate(M, x, env)]
        case Diamond(x):
            return M.exists[_evaluate(M, x, env)]
    raise InvalidInputError(f"not a formula: {phi!r}")


def eval_algebra(M: MonadicGAlgebra, assignment: Mapping[str, Union[int, str]], phi: Formula) -> int:
    """
    Value of phi under assignment, extended homomorphically.

    Assignment values are element indices or labels.

    Raises:
        InvalidInputError: a variable of phi is unassigned
    """
    env = {name: M.base.element(value) for name, value in assignment.items()}
    return int(_evaluate(M, phi, env))


def assignment_grid(size: int, names: Sequence[str]) -> Dict[str, np.ndarray]:
    """All assignments in lexicographic order, first variable most significant"""
    total = size ** len(names)
    if total > MAX_ASSIGNMENTS:
        raise SizeBoundError(total, MAX_ASSIGNMENTS, 'assignment grid')
    if not names:
        return {}
    coords = np.unravel_index(np.arange(total), (size,) * len(names))
    return dict(zip(names, coords))


def evaluate_all(M: MonadicGAlgebra, phi: Formula, names: Optional[Sequence[str]] = None) -> np.ndarray:
    """
    Values of phi under every assignment of names (default: its variables).

    Returns:
        array of length |A|^k in assignment_grid order
    """
    names = tuple(variables(phi) if names is None else names)
    env = assignment_grid(M.size, names)
    values = np.asarray(_evaluate(M, phi, env))
    total = M.size ** len(names)
    return np.broadcast_to(values, (total,)) if values.ndim == 0 else values


def decode_assignment(M: MonadicGAlgebra, names: Sequence[str], position: int) -> Dict[str, int]:
    """The assignment at a grid position"""
    if not names:
        return {}
    coords = np.unravel_index(int(position), (M.size,) * len(names))
    return {name: int(c) for name, c in zip(names, coords)}


# =============================================================================
# Kripke structures
# =============================================================================

@dataclass
class KripkeStructure:
    """
    ⟨W, e, L⟩ with L a finite G∼-chain; valuation[p][w] is e(w, p).

    Example:
        K = KripkeStructure(('w1', 'w2'), make_chain(3), {'p': (1, 2)})
    """
    worlds: Tuple[str, ...]
    chain: FiniteGAlgebra = field(repr=False)
    valuation: Dict[str, Tuple[int, ...]]

    def __post_init__(self):
        self.worlds = tuple(str(w) for w in self.worlds)
        if not self.worlds:
            raise InvalidInputError("a Kripke structure needs at least one world")
        if len(set(self.worlds)) != len(self.worlds):
            raise InvalidInputError(f"duplicate world names in {self.worlds}")
        if not self.chain.is_chain:
            raise PreconditionError("Kripke structures take values in a totally ordered G∼-algebra", clause='chain')
        valuation = {}
        for name, values in self.valuation.items():
            values = tuple(self.chain.element(v) for v in values)
            if len(values) != len(self.worlds):
                raise InvalidInputError(
                    f"variable '{name}' has {len(values)} values for {len(self.worlds)} worlds", variable=name
                )
            valuation[name] = values
        self.valuation = valuation

    def world_index(self, world: Union[int, str]) -> int:
        if isinstance(world, str):
            if world not in self.worlds:
                raise InvalidInputError(f"unknown world '{world}'")
            return self.worlds.index(world)
        world = int(world)
        if not 0 <= world < len(self.worlds):
            raise InvalidInputError(f"world {world} is outside [0, {len(self.worlds)})")
        return world

    def to_dict(self) -> Dict[str, Any]:
        L = self.chain
        return {
            'worlds': list(self.worlds),
            'chain_size': L.size,
            'valuation': {p: {w: L.label(v) for w, v in zip(self.worlds, vals)}
                          for p, vals in sorted(self.valuation.items())},
        }


def _kripke_vector(K: KripkeStructure, phi: Formula) -> np.ndarray:
    """||phi||_{K,w} for every world at once"""
    L = K.chain
    width = len(K.worlds)
    match phi:
        case Var(name):
            if name not in K.valuation:
                raise InvalidInputError(f"variable '{name}' has no valuation", variable=name)
            return np.array(K.valuation[name], dtype=np.int64)
        case Bot():
            return np.full(width, L.bottom, dtype=np.int64)
        case Top():
            return np.full(width, L.top, dtype=np.int64)
        case And(a, b):
            return L.meet[_kripke_vector(K, a), _kripke_vector(K, b)]
        case Or(a, b):
            return L.join[_kripke_vector(K, a), _kripke_vector(K, b)]
        case Imp(a, b):
            return L.imp[_kripke_vector(K, a), _kripke_vector(K, b)]
        case Sim(x):
            return L.sim[_kripke_vector(K, x)]
        case Box(x):
            v = _kripke_vector(K, x)
            return np.full(width, v[np.argmin(L.ranks[v])], dtype=np.int64)
        case Diamond(x):
            v = _kripke_vector(K, x)
            return np.full(width, v[np.argmax(L.ranks[v])], dtype=np.int64)
    raise InvalidInputError(f"not a formula: {phi!r}")


def eval_kripke(K: KripkeStructure, world: Union[int, str], phi: Formula) -> int:
    """
    ||phi||_{K,w}: connectives pointwise in L, □ as min and ◇ as max over W
    """
    return int(_kripke_vector(K, phi)[K.world_index(world)])


def tuple_assignment(K: KripkeStructure) -> Dict[str, int]:
    """p ↦ (e(w_1, p), …, e(w_k, p)) as an element of L^W"""
    shape = (K.chain.size,) * len(K.worlds)
    return {p: int(np.ravel_multi_index(vals, shape)) for p, vals in K.valuation.items()}


def kripke_to_algebra(K: KripkeStructure, validate: Optional[bool] = None) -> Tuple[MonadicGAlgebra, Dict[str, int]]:
    """The functional algebra L^W and the tuple assignment"""
    return make_functional(K.chain, len(K.worlds), validate=validate), tuple_assignment(K)


def world_values(K: KripkeStructure, element: int) -> np.ndarray:
    """Coordinates of an element of L^W, one per world"""
    return np.array(np.unravel_index(int(element), (K.chain.size,) * len(K.worlds)), dtype=np.int64)


# =============================================================================
# Random sampling
# =============================================================================

_BINARY = (And, Or, Imp)
_UNARY = (Sim, Box, Diamond)


def random_formula(rng: np.random.Generator, names: Sequence[str], max_depth: int) -> Formula:
    """Random formula of depth ≤ max_depth over names and the constants"""
    if max_depth <= 1 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.08:
            return Bot()
        if roll < 0.16:
            return Top()
        return Var(names[int(rng.integers(len(names)))])
    k = int(rng.integers(len(_BINARY) + len(_UNARY)))
    if k < len(_BINARY):
        return _BINARY[k](random_formula(rng, names, max_depth - 1), random_formula(rng, names, max_depth - 1))
    return _UNARY[k - len(_BINARY)](random_formula(rng, names, max_depth - 1))


def random_kripke(rng: np.random.Generator, names: Sequence[str], max_worlds: int, max_chain: int) -> KripkeStructure:
    """Random K with 1..max_worlds worlds over C_m, 2 ≤ m ≤ max_chain"""
    width = int(rng.integers(1, max_worlds + 1))
    m = int(rng.integers(2, max_chain + 1))
    valuation = {p: tuple(int(v) for v in rng.integers(0, m, size=width)) for p in names}
    return KripkeStructure(tuple(f"w{i + 1}" for i in range(width)), make_chain(m, validate=False), valuation)


@dataclass
class BridgeReport:
    samples: int
    seed: int
    mismatches: List[Dict[str, Any]]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict[str, Any]:
        return {
            'samples': self.samples,
            'seed': self.seed,
            'passed': self.passed,
            'mismatches': self.mismatches,
        }


def bridge_check(samples: int = 200, seed: int = 0, max_depth: int = 4, max_vars: int = 3,
                 max_worlds: int = 4, max_chain: int = 5) -> BridgeReport:
    """
    Compare eval_kripke with eval_algebra on L^W at every world for seeded
    random (formula, structure) pairs.
    """
    rng = np.random.default_rng(seed)
    cache: Dict[Tuple[int, int], MonadicGAlgebra] = {}
    mismatches = []
    for k in range(samples):
        names = tuple(SAMPLE_VARIABLES[:int(rng.integers(1, max_vars + 1))])
        phi = random_formula(rng, names, max_depth)
        K = random_kripke(rng, names, max_worlds, max_chain)
        width = len(K.worlds)
        key = (K.chain.size, width)
        if key not in cache:
            cache[key] = make_functional(K.chain, width, validate=False)
        M = cache[key]
        value = eval_algebra(M, tuple_assignment(K), phi)
        expected = _kripke_vector(K, phi)
        got = world_values(K, value)
        if not np.array_equal(got, expected):
            mismatches.append({'sample': k, 'formula': format_formula(phi), 'kripke': K.to_dict()})
    if mismatches:
        logger.warning(f"Bridge check: {len(mismatches)} of {samples} samples disagree")
    else:
        logger.info(f"Bridge check: {samples} samples agree")
    return BridgeReport(samples, seed, mismatches)
