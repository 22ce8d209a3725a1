"""
Shared fixtures
"""
import logging

import pytest

from chunklist.core.workers import shutdown_worker_pools
from chunklist.data.models import ParallelOptions


@pytest.fixture
def parallel_options():
    """Always take the parallel path: 4 workers, no sequential or GIL fallback"""
    return ParallelOptions(parallel=True, workers=4, sequential_threshold=0, gil_fallback=False)


@pytest.fixture
def sequential_options():
    """Keep every operation on the calling thread"""
    return ParallelOptions(parallel=False, workers=1)


@pytest.fixture(scope="session", autouse=True)
def worker_pools():
    """Tear down the shared pools once the session ends"""
    yield
    shutdown_worker_pools()


@pytest.fixture
def root_logger():
    """Restore the root logger's handlers and level after setup_logging"""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield root
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)
