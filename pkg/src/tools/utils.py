"""
Utility functions for the commands and the computation modules.

This module provides the worker-pool helper used for lattice and corpus
evaluation, and the conversion of results into JSON-safe values.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Any, Callable, Iterable, List, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_thread_count = 1


def set_thread_count(threads: Optional[int]) -> int:
    """
    Set the number of worker threads used by ``parallel_map``.

    Args:
        threads: Requested thread count; None or values below 1 mean 1

    Returns:
        The thread count in effect
    """
    global _thread_count
    _thread_count = max(1, int(threads or 1))
    logger.debug(f"Worker threads set to {_thread_count}")
    return _thread_count


def get_thread_count() -> int:
    return _thread_count


def parallel_map(func: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """
    Apply ``func`` to every item, returning results in input order.

    The thread count only changes scheduling; the returned list is assembled
    by index, so callers reducing it in order get identical results.

    Args:
        func: The function to apply
        items: The inputs

    Returns:
        The results, in the order of ``items``
    """
    items = list(items)
    if _thread_count == 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=_thread_count) as pool:
        return list(pool.map(func, items))


def finite_or_none(value: Any) -> Any:
    """Map NaN and infinite floats to None; other values pass through."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def to_plain(data: Any) -> Any:
    """
    Convert nested containers into JSON-safe values.

    Args:
        data: Dicts, lists, tuples, enums and scalars

    Returns:
        The same structure with tuples as lists, enums as their values and
        non-finite floats as None
    """
    if isinstance(data, dict):
        return {str(key): to_plain(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [to_plain(value) for value in data]
    if isinstance(data, Enum):
        return data.value
    if isinstance(data, complex):
        return [finite_or_none(data.real), finite_or_none(data.imag)]
    return finite_or_none(data)
