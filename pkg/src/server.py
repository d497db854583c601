#!/usr/bin/env python3
"""
G∼ Workbench MCP Server
Exposes algebra construction, classification, bounded proving, embeddings and
the soundness suite as MCP tools. Run with: python -m src.server
"""

import logging
import os
import sys
from typing import Any, Dict, List, Optional, Union

from fastmcp import FastMCP

from . import commands
from .config import get_config, load_config, set_config

logging.basicConfig(
    level=os.getenv('GSIM_LOG_LEVEL', 'INFO').upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr
)
logger = logging.getLogger("gsim.server")

app = FastMCP("gsim-workbench")

set_config(load_config(os.getenv('GSIM_CONFIG') or None))

AlgebraInput = Union[str, Dict[str, Any]]


def _respond(result: commands.Result) -> Dict[str, Any]:
    code, payload = result
    return {'exit_code': code, **payload}


# =============================================================================
# Tools
# =============================================================================

@app.tool()
async def build_algebra(chains: List[int], range_spec: str = "diagonal",
                        functional: Optional[int] = None, power: Optional[int] = None) -> Dict[str, Any]:
    """
    Build a product of G∼-chains with quantifiers attached to a range
    ('diagonal', 'bounds' or 'indices:0,4,8'), or the functional algebra
    C_n^m when functional=m.
    """
    try:
        logger.info(f"Building algebra on chains {chains}")
        return _respond(commands.build(chains, range_spec, functional, power))
    except Exception as e:
        logger.error(f"Error building algebra: {e}")
        return {'error': str(e)}


@app.tool()
async def classify_algebra(algebra: AlgebraInput) -> Dict[str, Any]:
    """Subdirect irreducibility, simplicity, fixed point and CMG∼ membership"""
    try:
        return _respond(commands.classify(algebra))
    except Exception as e:
        logger.error(f"Error classifying algebra: {e}")
        return {'error': str(e)}


@app.tool()
async def prove_query(goal: str, premises: Optional[List[str]] = None, max_size: Optional[int] = None,
                      semantics: str = "algebra") -> Dict[str, Any]:
    """
    Bounded check of premises ⊨ goal. Returns 'valid' (up to the bound) or a
    countermodel with the refuting assignment.
    """
    try:
        logger.info(f"Proving {goal} from {len(premises or [])} premises")
        return _respond(commands.prove(goal, premises or (), max_size=max_size, semantics=semantics,
                                       workers=get_config().workers))
    except Exception as e:
        logger.error(f"Error proving query: {e}")
        return {'error': str(e)}


@app.tool()
async def embed_algebra(algebra: AlgebraInput, mode: str = "fixed-point") -> Dict[str, Any]:
    """Embed into an algebra with a fixed point, or into a functional algebra (mode='functional')"""
    try:
        return _respond(commands.embed(algebra, mode))
    except Exception as e:
        logger.error(f"Error embedding algebra: {e}")
        return {'error': str(e)}


@app.tool()
async def check_soundness(algebra: AlgebraInput) -> Dict[str, Any]:
    """Evaluate every S5(G∼) axiom and rule in the algebra"""
    try:
        return _respond(commands.soundness(algebra))
    except Exception as e:
        logger.error(f"Error checking soundness: {e}")
        return {'error': str(e)}


# =============================================================================
# Main
# =============================================================================

if __name__ == "__main__":
    logger.info("G∼ workbench MCP server starting")
    logger.info(f"Configuration: {get_config().to_dict()}")
    app.run()
