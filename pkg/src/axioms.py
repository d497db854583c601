#!/usr/bin/env python3
"""
Axiom Soundness Suite
The S5(G∼) Hilbert axioms as schemata over element assignments, plus the
inference rules checked extensionally. The axiom list lives in data/axioms.json.
"""

import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .errors import InvalidInputError
from .formula import Formula, format_formula, parse_formula, variables
from .monadic import MonadicGAlgebra
from .semantics import decode_assignment, evaluate_all

logger = logging.getLogger("gsim.axioms")

AXIOM_FILE = Path(__file__).parent / "data" / "axioms.json"


@dataclass(frozen=True)
class Axiom:
    name: str
    group: str
    formula: Formula

    @property
    def text(self) -> str:
        return format_formula(self.formula)


@lru_cache(maxsize=4)
def load_axioms(path: Optional[str] = None) -> Tuple[Axiom, ...]:
    """Parse the shipped axiom list (or another file in the same format)"""
    source = Path(path) if path else AXIOM_FILE
    try:
        data = json.loads(source.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInputError(f"cannot read axiom file {source}: {e}")
    axioms = tuple(
        Axiom(entry['name'], entry['group'], parse_formula(entry['formula']))
        for entry in data['axioms']
    )
    logger.debug(f"Loaded {len(axioms)} axioms from {source}")
    return axioms


@dataclass
class AxiomVerdict:
    name: str
    group: str
    formula: str
    valid: bool
    assignment: Optional[Dict[str, str]] = None  # first refuting assignment, by label
    value: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'name': self.name, 'group': self.group, 'formula': self.formula, 'valid': self.valid}
        if not self.valid:
            data['assignment'] = self.assignment
            data['value'] = self.value
        return data


@dataclass
class SoundnessReport:
    size: int
    verdicts: List[AxiomVerdict]
    rules: Dict[str, bool] = field(default_factory=dict)

    @property
    def failing(self) -> List[str]:
        return [v.name for v in self.verdicts if not v.valid]

    @property
    def passed(self) -> bool:
        return not self.failing and all(self.rules.values())

    def verdict(self, name: str) -> AxiomVerdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'size': self.size,
            'passed': self.passed,
            'failing': self.failing,
            'rules': dict(self.rules),
            'axioms': [v.to_dict() for v in self.verdicts],
        }


def check_rules(M: MonadicGAlgebra) -> Dict[str, bool]:
    """
    Modus ponens (1 and 1 → b give b = 1), Δ-necessitation (Δ1 = 1) and
    generalization (∀1 = 1)
    """
    A = M.base
    top = A.top
    from_top = np.flatnonzero(A.imp[top, :] == top)
    return {
        'modus_ponens': bool(np.all(from_top == top)),
        'delta_necessitation': bool(A.delta[top] == top),
        'generalization': bool(M.forall[top] == top),
    }


def check_axioms(M: MonadicGAlgebra, axioms: Optional[Tuple[Axiom, ...]] = None) -> SoundnessReport:
    """Evaluate every axiom schema under all assignments of its letters"""
    axioms = load_axioms() if axioms is None else axioms
    A = M.base
    verdicts = []
    for axiom in axioms:
        names = variables(axiom.formula)
        values = evaluate_all(M, axiom.formula, names)
        bad = np.flatnonzero(values != A.top)
        if bad.size == 0:
            verdicts.append(AxiomVerdict(axiom.name, axiom.group, axiom.text, True))
            continue
        assignment = decode_assignment(M, names, int(bad[0]))
        verdicts.append(AxiomVerdict(
            axiom.name, axiom.group, axiom.text, False,
            assignment={p: A.label(v) for p, v in assignment.items()},
            value=A.label(values[bad[0]]),
        ))
    report = SoundnessReport(A.size, verdicts, check_rules(M))
    if report.failing:
        logger.info(f"Axioms failing on algebra of size {A.size}: {report.failing}")
    return report
