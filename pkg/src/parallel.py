#!/usr/bin/env python3
"""
Worker Pool
Order-preserving map over a process pool, serial when one worker is configured
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from .config import get_config

logger = logging.getLogger("gsim.parallel")

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """
    Apply fn to every item, results in input order whatever the pool degree.

    fn must be a module-level function so it can be pickled.
    """
    items = list(items)
    workers = get_config().workers if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (workers * 4))
    logger.debug(f"Mapping {len(items)} items over {workers} workers (chunksize {chunksize})")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
