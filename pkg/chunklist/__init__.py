"""
chunklist - concurrent chunk list collection with a sequential oracle and a benchmark harness
"""
from chunklist.modules.chunk_list import DEFAULT_CHUNK_SIZE, ChunkList, recommended_chunk_size
from chunklist.modules.oracle import OracleList

__version__ = "1.0.0"

__all__ = ["ChunkList", "OracleList", "DEFAULT_CHUNK_SIZE", "recommended_chunk_size"]
