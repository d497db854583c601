#!/usr/bin/env python3
"""
S5(G∼) Formulas
Abstract syntax, the ASCII grammar and the canonical printer.

Grammar (loosest first):
    formula := disj ('->' formula)?            right-associative
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := ('~' | '!' | 'D' | '[]' | '<>') unary | atom
    atom    := '0' | '1' | identifier | '(' formula ')'

'!' and 'D' are sugar: !φ = φ -> 0 and Dφ = !~φ.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple, Union

import pyparsing as pp

from .errors import FormulaSyntaxError, InvalidInputError

logger = logging.getLogger("gsim.formula")

pp.ParserElement.enable_packrat()


class Node:
    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Bot(Node):
    pass


@dataclass(frozen=True)
class Top(Node):
    pass


@dataclass(frozen=True)
class And(Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or(Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp(Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Sim(Node):
    operand: "Formula"


@dataclass(frozen=True)
class Box(Node):
    operand: "Formula"


@dataclass(frozen=True)
class Diamond(Node):
    operand: "Formula"


Formula = Union[Var, Bot, Top, And, Or, Imp, Sim, Box, Diamond]

BINARY = {And: '&', Or: '|', Imp: '->'}
UNARY = {Sim: '~', Box: '[]', Diamond: '<>'}


def Neg(phi: Formula) -> Formula:
    """¬φ = φ → 0"""
    return Imp(phi, Bot())


def Delta(phi: Formula) -> Formula:
    """Δφ = ¬∼φ"""
    return Neg(Sim(phi))


def Equiv(phi: Formula, psi: Formula) -> Formula:
    return And(Imp(phi, psi), Imp(psi, phi))


# =============================================================================
# Parser
# =============================================================================

_UNARY_BUILDERS = {'~': Sim, '!': Neg, 'D': Delta, '[]': Box, '<>': Diamond}
_BINARY_BUILDERS = {'&': And, '|': Or, '->': Imp}


def _fold_unary(tokens: pp.ParseResults) -> Formula:
    items = list(tokens[0])
    result = items[-1]
    for op in reversed(items[:-1]):
        result = _UNARY_BUILDERS[op](result)
    return result


def _fold_left(tokens: pp.ParseResults) -> Formula:
    items = list(tokens[0])
    result = items[0]
    for k in range(1, len(items), 2):
        result = _BINARY_BUILDERS[items[k]](result, items[k + 1])
    return result


def _fold_right(tokens: pp.ParseResults) -> Formula:
    items = list(tokens[0])
    result = items[-1]
    for k in range(len(items) - 2, 0, -2):
        result = _BINARY_BUILDERS[items[k]](items[k - 1], result)
    return result


def _build_grammar() -> pp.ParserElement:
    delta = pp.Keyword("D", ident_chars=pp.alphanums + "_")
    identifier = (~delta + pp.Word(pp.alphas + "_", pp.alphanums + "_")).set_parse_action(lambda t: Var(t[0]))
    constant = (
        pp.Literal("0").set_parse_action(lambda: Bot())
        | pp.Literal("1").set_parse_action(lambda: Top())
    )
    atom = constant | identifier
    unary_op = pp.one_of("~ ! [] <>") | delta
    return pp.infix_notation(
        atom,
        [
            (unary_op, 1, pp.OpAssoc.RIGHT, _fold_unary),
            (pp.Literal("&"), 2, pp.OpAssoc.LEFT, _fold_left),
            (pp.Literal("|"), 2, pp.OpAssoc.LEFT, _fold_left),
            (pp.Literal("->"), 2, pp.OpAssoc.RIGHT, _fold_right),
        ],
    )


_GRAMMAR = _build_grammar()


def parse_formula(text: str) -> Formula:
    """
    Parse the ASCII syntax into a Formula.

    Example:
        parse_formula("p -> p")        # Imp(Var('p'), Var('p'))

    Raises:
        FormulaSyntaxError: text does not match the grammar (position included)
    """
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", position=0, text=text)
    try:
        result = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise FormulaSyntaxError(f"syntax error at position {e.loc}: {e.msg}", position=e.loc, text=text)
    return result[0]


def _wrap(phi: Formula) -> str:
    return f"({format_formula(phi)})" if type(phi) in BINARY else format_formula(phi)


def format_formula(phi: Formula) -> str:
    """Canonical text: binary operands of binary connectives and non-atomic unary operands are parenthesized"""
    match phi:
        case Var(name):
            return name
        case Bot():
            return "0"
        case Top():
            return "1"
        case Sim(x) | Box(x) | Diamond(x):
            inner = format_formula(x)
            if not isinstance(x, (Var, Bot, Top)):
                inner = f"({inner})"
            return UNARY[type(phi)] + inner
        case And(a, b) | Or(a, b) | Imp(a, b):
            return f"{_wrap(a)} {BINARY[type(phi)]} {_wrap(b)}"
    raise InvalidInputError(f"not a formula: {phi!r}")


# =============================================================================
# Structural helpers
# =============================================================================

def children(phi: Formula) -> Tuple[Formula, ...]:
    match phi:
        case And(a, b) | Or(a, b) | Imp(a, b):
            return (a, b)
        case Sim(x) | Box(x) | Diamond(x):
            return (x,)
    return ()


def variables(phi: Union[Formula, List[Formula], Tuple[Formula, ...]]) -> Tuple[str, ...]:
    """Sorted variable names of a formula or a list of formulas"""
    names = set()
    stack = list(phi) if isinstance(phi, (list, tuple)) else [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            names.add(node.name)
        stack.extend(children(node))
    return tuple(sorted(names))


def depth(phi: Formula) -> int:
    return 1 + max((depth(c) for c in children(phi)), default=0)


def substitute(phi: Formula, mapping: Dict[str, Formula]) -> Formula:
    """Replace variables simultaneously"""
    match phi:
        case Var(name):
            return mapping.get(name, phi)
        case Bot() | Top():
            return phi
        case Sim(x) | Box(x) | Diamond(x):
            return type(phi)(substitute(x, mapping))
        case And(a, b) | Or(a, b) | Imp(a, b):
            return type(phi)(substitute(a, mapping), substitute(b, mapping))
    raise InvalidInputError(f"not a formula: {phi!r}")
