"""
Chunk List

A dynamic outer list of capacity-bounded inner lists ("chunks"). Every chunk
holds at most `chunk_size` elements; add fills the first chunk with spare
capacity. contains, remove and remove_all fan out across chunks on a shared
bounded thread pool with cooperative early termination.

Not safe for concurrent external mutation: one writer at a time, readers only
while no writer is active.
"""
import bisect
import itertools
import logging
import math
import threading
from concurrent.futures import wait
from typing import Any, Callable, Dict, Generic, Iterable, Iterator, List, Optional, Protocol, Sequence, Tuple, TypeVar, Union

from chunklist.core.errors import ChunkIndexError, InvalidChunkSizeError
from chunklist.core.workers import get_worker_pool, gil_enabled
from chunklist.data.models import ParallelOptions, SearchStrategy

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 1000


class Comparable(Protocol):
    """Elements need == and a total order through <"""

    def __lt__(self, other: Any) -> bool: ...


T = TypeVar("T", bound=Comparable)

# (chunk index, chunk, start, stop)
_Segment = Tuple[int, List[Any], int, int]


def recommended_chunk_size(expected_count: int) -> int:
    """
    Chunk size for a list expected to hold `expected_count` elements

    Args:
        expected_count: Number of elements the list will store

    Returns:
        max(1, floor(sqrt(expected_count)))
    """
    if expected_count < 0:
        raise ValueError(f"Expected count must be >= 0, got {expected_count}")
    return max(1, math.isqrt(expected_count))


def _check_chunk_size(chunk_size: int) -> None:
    if isinstance(chunk_size, bool) or not isinstance(chunk_size, int) or chunk_size < 1:
        raise InvalidChunkSizeError(chunk_size)


def _find_linear(chunk: List[Any], t: Any) -> int:
    try:
        return chunk.index(t)
    except ValueError:
        return -1


def _find_binary(chunk: List[Any], t: Any) -> int:
    i = bisect.bisect_left(chunk, t)
    if i < len(chunk) and chunk[i] == t:
        return i
    return -1


_FINDERS: Dict[SearchStrategy, Callable[[List[Any], Any], int]] = {
    SearchStrategy.LINEAR: _find_linear,
    SearchStrategy.BINARY: _find_binary,
}


def _split(units: Sequence[Any], workers: int) -> List[List[Any]]:
    """Deal units round-robin into at most `workers` non-empty batches"""
    return [list(units[i::workers]) for i in range(min(workers, len(units)))]


class ChunkList(Generic[T]):
    """List of chunks with internally parallel search and removal"""

    def __init__(
        self,
        chunk_size: int = DEFAULT_CHUNK_SIZE,
        options: Optional[ParallelOptions] = None,
    ):
        """
        Create an empty chunk list (no chunks are allocated until the first add)

        Args:
            chunk_size: Capacity of every chunk (>= 1)
            options: Parallelism knobs; defaults come from settings
        """
        _check_chunk_size(chunk_size)
        self._chunk_size = chunk_size
        self._chunks: List[List[T]] = []
        # Every chunk before this index is full
        self._open_hint = 0
        self._options = options if options is not None else ParallelOptions.from_settings()

    # ==================== Construction ====================

    @classmethod
    def for_expected_count(
        cls, expected_count: int, options: Optional[ParallelOptions] = None
    ) -> "ChunkList[T]":
        """Empty list sized with recommended_chunk_size(expected_count)"""
        return cls(recommended_chunk_size(expected_count), options)

    @classmethod
    def from_iterable(
        cls,
        items: Iterable[T],
        chunk_size: int = DEFAULT_CHUNK_SIZE,
        options: Optional[ParallelOptions] = None,
    ) -> "ChunkList[T]":
        """List populated by adding `items` in order"""
        chunk_list: ChunkList[T] = cls(chunk_size, options)
        chunk_list.extend(items)
        return chunk_list

    def copy(self) -> "ChunkList[T]":
        """Independent list with the same layout, chunk size and options"""
        clone: ChunkList[T] = ChunkList(self._chunk_size, self._options)
        clone._chunks = [chunk.copy() for chunk in self._chunks]
        clone._open_hint = self._open_hint
        return clone

    # ==================== Properties ====================

    @property
    def chunk_size(self) -> int:
        return self._chunk_size

    @property
    def options(self) -> ParallelOptions:
        return self._options

    def chunk_count(self) -> int:
        return len(self._chunks)

    def chunks(self) -> List[List[T]]:
        """Copy of the layout, one list per chunk"""
        return [chunk.copy() for chunk in self._chunks]

    def is_canonical(self) -> bool:
        """True when every chunk except possibly the last is exactly full"""
        return all(len(chunk) == self._chunk_size for chunk in self._chunks[:-1])

    # ==================== Index Arithmetic ====================

    def convert_index_to_chunk(self, index: int) -> int:
        return index // self._chunk_size

    def convert_index_to_chunk_pos(self, index: int) -> int:
        return index % self._chunk_size

    def _resolve(self, index: int) -> Tuple[int, int]:
        """
        Map an index to (chunk, position), falling forward past missing slots

        A slot is missing when its chunk holds fewer than position + 1 items;
        resolution then continues at the next index. Every index below size()
        resolves because the occupied slots are size() distinct positions.
        """
        size = self.size()
        if index < 0 or index >= size:
            raise ChunkIndexError(index, size)

        chunks = self._chunks
        while True:
            c = self.convert_index_to_chunk(index)
            if c >= len(chunks):
                raise ChunkIndexError(index, size)
            p = self.convert_index_to_chunk_pos(index)
            if p < len(chunks[c]):
                return c, p
            # The remaining positions of this chunk are missing as well
            index = (c + 1) * self._chunk_size

    # ==================== Index-Based Operations ====================

    def get(self, index: int) -> T:
        c, p = self._resolve(index)
        return self._chunks[c][p]

    def set(self, index: int, t: T) -> None:
        c, p = self._resolve(index)
        self._chunks[c][p] = t

    def remove_at(self, index: int) -> None:
        """Delete the element get(index) resolves to; later items in that chunk shift left"""
        c, p = self._resolve(index)
        del self._chunks[c][p]
        self._lower_hint(c)

    # ==================== Element Operations ====================

    def add(self, t: T) -> None:
        """Append to the first chunk with spare capacity, allocating a chunk if none has room"""
        chunks = self._chunks
        i = self._open_hint
        while i < len(chunks) and len(chunks[i]) >= self._chunk_size:
            i += 1
        if i == len(chunks):
            chunks.append([])
        chunks[i].append(t)
        self._open_hint = i

    def extend(self, items: Iterable[T]) -> None:
        for t in items:
            self.add(t)

    def contains(self, t: T) -> bool:
        """
        Membership test fanned out across chunks

        When there are fewer chunks than workers, chunks are split into
        segments so every worker scans part of a chunk. All workers stop at
        the first hit.
        """
        chunks = list(self._chunks)
        if not self._use_parallel(len(chunks)):
            for chunk in chunks:
                if t in chunk:
                    return True
            return False

        stop = threading.Event()

        def scan(segments: List[_Segment]) -> bool:
            for _, chunk, start, end in segments:
                if stop.is_set():
                    return False
                hit = t in chunk if start == 0 and end >= len(chunk) else t in chunk[start:end]
                if hit:
                    stop.set()
                    return True
            return False

        results = self._fan_out(scan, self._segments(chunks))
        return any(results)

    def remove(self, t: T, strategy: Optional[Union[SearchStrategy, str]] = None) -> bool:
        """
        Delete one occurrence of t

        Chunks are searched in parallel; finders pass through a single claim
        that keeps the lowest chunk index seen so far, and workers skip chunks
        past it. Exactly one occurrence is deleted afterwards: the first one in
        the lowest chunk holding t, the same one the sequential path deletes.

        Args:
            t: Element to remove
            strategy: Override of options.search_strategy for this call

        Returns:
            True if an occurrence was deleted
        """
        find = _FINDERS[SearchStrategy(strategy or self._options.search_strategy)]
        chunks = list(self._chunks)

        if not self._use_parallel(len(chunks)):
            for c, chunk in enumerate(chunks):
                p = find(chunk, t)
                if p >= 0:
                    del chunk[p]
                    self._lower_hint(c)
                    return True
            return False

        claim = threading.Lock()
        # (chunk, position) of the lowest hit; len(chunks) while nothing is found
        lowest = [len(chunks), -1]

        def scan(batch: List[Tuple[int, List[T]]]) -> None:
            # Batches are in ascending chunk order
            for c, chunk in batch:
                if c > lowest[0]:
                    return
                p = find(chunk, t)
                if p < 0:
                    continue
                with claim:
                    if c < lowest[0]:
                        lowest[0], lowest[1] = c, p
                return

        self._fan_out(scan, list(enumerate(chunks)))

        c, p = lowest
        if c == len(chunks):
            return False
        # Workers only read, so the claimed position is still valid
        del chunks[c][p]
        self._lower_hint(c)
        return True

    def remove_all(self, t: T) -> int:
        """
        Delete every occurrence of t; each chunk is purged independently

        Emptied chunks are kept.

        Returns:
            Number of elements removed
        """
        chunks = list(self._chunks)

        def purge(batch: List[Tuple[int, List[T]]]) -> List[Tuple[int, int]]:
            removed = []
            for c, chunk in batch:
                if t not in chunk:
                    continue
                before = len(chunk)
                chunk[:] = [x for x in chunk if x != t]
                removed.append((c, before - len(chunk)))
            return removed

        units = list(enumerate(chunks))
        if self._use_parallel(len(chunks)):
            changed = list(itertools.chain.from_iterable(self._fan_out(purge, units)))
        else:
            changed = purge(units)

        if changed:
            self._lower_hint(min(c for c, _ in changed))
        return sum(n for _, n in changed)

    def count(self, t: T) -> int:
        return sum(chunk.count(t) for chunk in self._chunks)

    # ==================== List-Based Operations ====================

    def size(self) -> int:
        return sum(map(len, self._chunks))

    def clear(self) -> None:
        """Drop every chunk; chunk_size is kept"""
        self._chunks = []
        self._open_hint = 0

    def get_list(self) -> List[T]:
        """Flattened copy: chunks in order, items in chunk order"""
        return list(itertools.chain.from_iterable(self._chunks))

    def set_chunk_size(self, new_chunk_size: int) -> None:
        """
        Change the chunk capacity

        Growing keeps the current chunks as they are and lets later adds fill
        them to the new bound. Shrinking (or keeping the size) flattens, clears
        and re-adds every element, leaving the list canonically filled.
        """
        _check_chunk_size(new_chunk_size)

        if new_chunk_size > self._chunk_size:
            logger.debug(f"Growing chunk size {self._chunk_size} -> {new_chunk_size}")
            self._chunk_size = new_chunk_size
            self._open_hint = 0
            return

        logger.debug(f"Rebalancing chunk size {self._chunk_size} -> {new_chunk_size}")
        items = self.get_list()
        self._chunk_size = new_chunk_size
        self._reflow(items)

    def sort(self) -> None:
        """Flatten, sort ascending and reflow into canonically filled chunks"""
        items = self.get_list()
        items.sort()
        self._reflow(items)

    # ==================== Internals ====================

    def _reflow(self, items: List[T]) -> None:
        """Same layout as clear() followed by add() of every item, built in one pass"""
        self.clear()
        size = self._chunk_size
        self._chunks = [items[i:i + size] for i in range(0, len(items), size)]
        self._open_hint = max(0, len(self._chunks) - 1)

    def _lower_hint(self, chunk_index: int) -> None:
        if chunk_index < self._open_hint:
            self._open_hint = chunk_index

    def _use_parallel(self, chunk_count: int) -> bool:
        options = self._options
        return (
            options.parallel
            and options.workers > 1
            and chunk_count >= max(options.sequential_threshold, 1)
            and not (options.gil_fallback and gil_enabled())
        )

    def _segments(self, chunks: List[List[T]]) -> List[_Segment]:
        """Work units for contains: whole chunks, or chunk slices when chunks are scarce"""
        workers = self._options.workers
        pieces = math.ceil(workers / len(chunks)) if len(chunks) < workers else 1

        segments: List[_Segment] = []
        for c, chunk in enumerate(chunks):
            if pieces == 1 or len(chunk) < 2:
                segments.append((c, chunk, 0, len(chunk)))
                continue
            step = math.ceil(len(chunk) / pieces)
            for start in range(0, len(chunk), step):
                segments.append((c, chunk, start, min(start + step, len(chunk))))
        return segments

    def _fan_out(self, fn: Callable[[List[Any]], Any], units: Sequence[Any]) -> List[Any]:
        """Run fn over round-robin batches of units on the pool and wait for all of them"""
        pool = get_worker_pool(self._options.workers)
        batches = _split(units, self._options.workers)
        logger.debug(f"Fanning out {len(units)} units over {len(batches)} workers")
        futures = [pool.submit(fn, batch) for batch in batches]
        wait(futures)
        return [future.result() for future in futures]

    # ==================== Python Protocols ====================

    def __len__(self) -> int:
        return self.size()

    def __iter__(self) -> Iterator[T]:
        return iter(self.get_list())

    def __contains__(self, t: object) -> bool:
        return self.contains(t)  # type: ignore[arg-type]

    def __getitem__(self, index: int) -> T:
        if not isinstance(index, int):
            raise TypeError(f"ChunkList indices must be integers, not {type(index).__name__}")
        return self.get(index)

    def __setitem__(self, index: int, t: T) -> None:
        if not isinstance(index, int):
            raise TypeError(f"ChunkList indices must be integers, not {type(index).__name__}")
        self.set(index, t)

    def __delitem__(self, index: int) -> None:
        if not isinstance(index, int):
            raise TypeError(f"ChunkList indices must be integers, not {type(index).__name__}")
        self.remove_at(index)

    def __repr__(self) -> str:
        return (
            f"ChunkList(chunk_size={self._chunk_size}, size={self.size()}, "
            f"chunks={len(self._chunks)})"
        )
