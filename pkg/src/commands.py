#!/usr/bin/env python3
"""
Workbench Commands
The build / classify / prove / embed / soundness / bridge operations shared by
the command line and the MCP server. Each returns (exit_code, payload):
0 success or valid, 1 countermodel or refuted property, 2 input or
precondition error.
"""

import functools
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import FiniteGAlgebra, SubalgebraWitness, direct_product, fixed_points, make_chain, validate_gsim
from .axioms import check_axioms
from .errors import InvalidInputError, StructuralError, WorkbenchError
from .formula import parse_formula
from .functional import bar_quantifiers, functional_representation, make_functional
from .monadic import (
    MonadicGAlgebra,
    attach_quantifiers,
    classify_cmg,
    embed_with_fixed_point,
    load_algebra,
    range_regular_filters,
    validate_monadic,
)
from .prover import ConsequenceQuery, consequence_search, kripke_countermodel, parse_query
from .semantics import bridge_check

logger = logging.getLogger("gsim.commands")

Result = Tuple[int, Dict[str, Any]]
AlgebraSource = Union[str, Path, Dict[str, Any], MonadicGAlgebra]


def command(fn: Callable[..., Result]) -> Callable[..., Result]:
    """Map workbench errors to exit code 2 with the error object as payload"""
    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Result:
        try:
            return fn(*args, **kwargs)
        except WorkbenchError as e:
            logger.warning(f"{fn.__name__} failed: {e.message}")
            return 2, e.to_dict()
    return wrapper


def parse_chain_list(text: str) -> List[int]:
    """'3,3' -> [3, 3]"""
    try:
        chains = [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise InvalidInputError(f"--chains expects comma-separated integers, got {text!r}")
    if not chains:
        raise InvalidInputError("--chains needs at least one chain size")
    return chains


def range_subset(A: FiniteGAlgebra, chains: Sequence[int], spec: str) -> List[int]:
    """
    diagonal: tuples with all coordinates equal; bounds: {0, 1};
    indices:<list>: explicit element indices
    """
    if spec == 'diagonal':
        if len(set(chains)) != 1:
            raise InvalidInputError("the diagonal range needs equal chain sizes")
        n, r = chains[0], len(chains)
        return [int(np.ravel_multi_index((c,) * r, (n,) * r)) for c in range(n)]
    if spec == 'bounds':
        return [A.bottom, A.top]
    if spec.startswith('indices:'):
        try:
            return [int(x) for x in spec[len('indices:'):].split(',') if x.strip()]
        except ValueError:
            raise InvalidInputError(f"bad index list in range spec {spec!r}")
    raise InvalidInputError(f"unknown range spec {spec!r}; use diagonal, bounds or indices:<list>")


def summarize(M: MonadicGAlgebra) -> Dict[str, Any]:
    A = M.base
    fixed = fixed_points(A)
    return {
        'size': A.size,
        'fixed_point': A.label(fixed[0]) if fixed else None,
        'range': A.labels(M.range),
        'validated': M.validated,
    }


def load_monadic(source: AlgebraSource) -> MonadicGAlgebra:
    """
    Load and fully validate an MG∼-algebra.

    Raises:
        InvalidInputError: the file holds no quantifier tables
        StructuralError: a law fails (family, law and witness included)
    """
    M = source if isinstance(source, MonadicGAlgebra) else load_algebra(source)
    if not isinstance(M, MonadicGAlgebra):
        raise InvalidInputError("this command needs an algebra with 'exists' and 'forall' tables")
    if not M.validated:
        for report in (validate_gsim(M.base), validate_monadic(M)):
            failure = report.first_failure
            if failure is not None:
                raise StructuralError(
                    f"{report.subject} validation failed: {failure.family}/{failure.law}",
                    coordinates=failure.witness, family=failure.family, law=failure.law,
                )
        M.validated = True
    return M


@command
def build(chains: Sequence[int], range_spec: str = 'diagonal', functional: Optional[int] = None,
          power: Optional[int] = None) -> Result:
    """
    Build C_{n_1} × … × C_{n_r} with the requested range, the functional
    algebra C_n^m, or the barred power of an attached chain.
    """
    chains = list(chains)
    if functional is not None:
        if len(chains) != 1:
            raise InvalidInputError("--functional takes a single chain size")
        M = make_functional(make_chain(chains[0]), functional)
    else:
        A = direct_product([make_chain(n) for n in chains])
        C = SubalgebraWitness(A, range_subset(A, chains, range_spec))
        M = attach_quantifiers(A, C)
        if power is not None:
            M = bar_quantifiers(M, power)
    logger.info(f"Built algebra of size {M.size}")
    return 0, {'summary': summarize(M), 'algebra': M.to_dict()}


@command
def classify(source: AlgebraSource) -> Result:
    """s.i. and CMG∼ classification with the number of congruences"""
    M = load_monadic(source)
    result = classify_cmg(M)
    payload = result.to_dict()
    payload['congruence_count'] = len(range_regular_filters(M))
    payload['size'] = M.size
    return 0, payload


def _query(premises: Sequence[str], goal: Optional[str], query_text: Optional[str],
           max_size: Optional[int], kripke_worlds: Optional[int], kripke_chain: Optional[int]) -> ConsequenceQuery:
    bounds = {'max_size': max_size, 'kripke_worlds': kripke_worlds, 'kripke_chain': kripke_chain}
    if query_text is not None:
        if goal is not None or premises:
            raise InvalidInputError("give either a query file or --premises/--goal, not both")
        return parse_query(query_text, **bounds)
    if goal is None:
        raise InvalidInputError("a goal formula is required")
    return ConsequenceQuery(tuple(parse_formula(p) for p in premises), parse_formula(goal), **bounds)


@command
def prove(goal: Optional[str] = None, premises: Sequence[str] = (), query_text: Optional[str] = None,
          max_size: Optional[int] = None, semantics: str = 'algebra', kripke_worlds: Optional[int] = None,
          kripke_chain: Optional[int] = None, workers: Optional[int] = None) -> Result:
    """Bounded consequence check under algebra, kripke or both semantics"""
    if semantics not in ('algebra', 'kripke', 'both'):
        raise InvalidInputError(f"unknown semantics {semantics!r}")
    query = _query(premises, goal, query_text, max_size, kripke_worlds, kripke_chain)
    verdicts = []
    if semantics in ('algebra', 'both'):
        verdicts.append(consequence_search(query, workers))
    if semantics in ('kripke', 'both'):
        verdicts.append(kripke_countermodel(query))
    refuted = any(v.is_countermodel for v in verdicts)
    if len(verdicts) == 1:
        payload = verdicts[0].to_dict()
    else:
        payload = {
            'verdict': 'countermodel' if refuted else 'valid',
            'algebra': verdicts[0].to_dict(),
            'kripke': verdicts[1].to_dict(),
            'agree': verdicts[0].verdict == verdicts[1].verdict,
        }
    payload['query'] = query.to_dict()
    return (1 if refuted else 0), payload


@command
def embed(source: AlgebraSource, mode: str = 'fixed-point', sample: Optional[int] = None) -> Result:
    """Fixed-point extension or functional representation of an algebra"""
    M = load_monadic(source)
    if mode == 'fixed-point':
        report = embed_with_fixed_point(M)
        payload = report.to_dict()
        payload['algebra'] = report.algebra.to_dict()
        return (0 if report.verified else 1), payload
    if mode == 'functional':
        representation = functional_representation(M, sample)
        return (0 if representation.verified else 1), representation.to_dict()
    raise InvalidInputError(f"unknown embed mode {mode!r}; use fixed-point or functional")


@command
def soundness(source: AlgebraSource) -> Result:
    """Axiom and rule check; exit 1 when an axiom fails"""
    report = check_axioms(load_monadic(source))
    return (0 if report.passed else 1), report.to_dict()


@command
def bridge(samples: int = 200, seed: int = 0, max_depth: int = 4, max_vars: int = 3,
           max_worlds: int = 4, max_chain: int = 5) -> Result:
    """Random Kripke/algebra agreement sweep"""
    report = bridge_check(samples, seed, max_depth, max_vars, max_worlds, max_chain)
    return (0 if report.passed else 1), report.to_dict()
