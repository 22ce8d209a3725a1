"""
Exception hierarchy shared by the chunk list, the oracle and the bench
"""
from typing import Optional


class ChunkListError(Exception):
    """Base class for every error raised by this package"""


class InvalidChunkSizeError(ChunkListError, ValueError):
    """Chunk capacity must be a positive integer"""

    def __init__(self, chunk_size: object):
        self.chunk_size = chunk_size
        super().__init__(f"Invalid chunk size: {chunk_size!r} (must be >= 1)")


class ChunkIndexError(ChunkListError, IndexError):
    """Index outside [0, size)"""

    def __init__(self, index: int, size: int):
        self.index = index
        self.size = size
        super().__init__(f"Index {index} out of range for chunk list of size {size}")


class TraceError(ChunkListError, ValueError):
    """Malformed operation trace"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class BenchConfigError(ChunkListError, ValueError):
    """Invalid benchmark configuration"""


class ReportWriteError(ChunkListError, OSError):
    """Benchmark report could not be written"""

    def __init__(self, path: object, reason: object):
        self.path = path
        super().__init__(f"Failed to write report to {path}: {reason}")


class BenchMismatchError(ChunkListError, AssertionError):
    """A structure disagreed with the flat-list baseline during a bench cell"""
