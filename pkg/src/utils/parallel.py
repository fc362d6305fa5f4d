"""
ThermoCheck Probe Parallelism
Ordered thread-pool map and thread-count resolution
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, List, Optional, TypeVar

from dotenv import load_dotenv

from src.core.errors import ConfigError

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "THERMOCHECK_THREADS"


def ordered_map(func: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """Apply func to every item; results come back in submission order"""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def resolve_threads(flag: Optional[int] = None, config_value: Any = None) -> int:
    """Thread count: command-line flag, then environment (.env honoured), then config, then 1"""
    if flag is not None:
        return _positive(flag, "--threads")
    load_dotenv()
    env = os.getenv(THREADS_ENV)
    if env:
        return _positive(env, THREADS_ENV)
    if config_value is not None:
        return _positive(config_value, "threads")
    return 1


def _positive(value: Any, source: str) -> int:
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{source} must be an integer, got {value!r}")
    if n < 1:
        raise ConfigError(f"{source} must be at least 1, got {n}")
    return n
