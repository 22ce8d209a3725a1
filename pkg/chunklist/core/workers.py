"""
Shared bounded thread pools for the chunk list's internally parallel operations
"""
import atexit
import logging
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Dict

logger = logging.getLogger(__name__)

_pools: Dict[int, ThreadPoolExecutor] = {}
_pools_lock = threading.Lock()


def gil_enabled() -> bool:
    """True unless this is a free-threaded build running with the GIL disabled"""
    is_gil_enabled = getattr(sys, "_is_gil_enabled", None)
    return True if is_gil_enabled is None else bool(is_gil_enabled())


def get_worker_pool(workers: int) -> ThreadPoolExecutor:
    """
    Get or create the process-wide pool for a worker count

    Args:
        workers: Number of worker threads (P)

    Returns:
        ThreadPoolExecutor shared by every chunk list using this worker count
    """
    if workers < 1:
        raise ValueError(f"Worker count must be >= 1, got {workers}")

    with _pools_lock:
        pool = _pools.get(workers)
        if pool is None:
            pool = ThreadPoolExecutor(
                max_workers=workers,
                thread_name_prefix=f"chunklist-{workers}",
            )
            _pools[workers] = pool
            logger.debug(f"Created worker pool with {workers} threads")
        return pool


def shutdown_worker_pools() -> None:
    """Shut down every cached pool (new pools are created on demand afterwards)"""
    with _pools_lock:
        pools = list(_pools.values())
        _pools.clear()

    for pool in pools:
        pool.shutdown(wait=True)

    if pools:
        logger.debug(f"Shut down {len(pools)} worker pool(s)")


atexit.register(shutdown_worker_pools)
