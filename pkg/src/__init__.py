"""G∼ Workbench - finite monadic G∼-algebras, representations and a bounded S5(G∼) prover"""

__version__ = "0.1.0"

from .algebra import FiniteGAlgebra, SubalgebraWitness, direct_product, make_chain, validate_gsim
from .config import Config, configure, get_config
from .errors import (
    DecompositionError,
    FormulaSyntaxError,
    InvalidInputError,
    PreconditionError,
    SizeBoundError,
    StructuralError,
    WorkbenchError,
)
from .formula import parse_formula
from .functional import functional_representation, make_functional
from .monadic import MonadicGAlgebra, attach_quantifiers, classify_cmg, validate_monadic
from .prover import ConsequenceQuery, consequence_search, kripke_countermodel

__all__ = [
    'FiniteGAlgebra',
    'SubalgebraWitness',
    'MonadicGAlgebra',
    'Config',
    'ConsequenceQuery',
    'make_chain',
    'direct_product',
    'validate_gsim',
    'attach_quantifiers',
    'validate_monadic',
    'classify_cmg',
    'make_functional',
    'functional_representation',
    'parse_formula',
    'consequence_search',
    'kripke_countermodel',
    'configure',
    'get_config',
    'WorkbenchError',
    'StructuralError',
    'DecompositionError',
    'PreconditionError',
    'SizeBoundError',
    'InvalidInputError',
    'FormulaSyntaxError',
]
