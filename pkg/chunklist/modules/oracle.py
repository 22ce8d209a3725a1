"""
Oracle Module

Sequential ground truth for the chunk list: a flat array list, seeded
operation traces, single-target replay and a lock-step differential replay
that checks the chunk list against the flat list after every operation.
"""
import logging
import random
from collections import Counter
from typing import Any, Callable, Dict, Generic, Iterable, List, Mapping, Optional, TypeVar, Union

from chunklist.core.errors import ChunkIndexError, InvalidChunkSizeError, TraceError
from chunklist.data.models import OpCode, OpTrace, ParallelOptions, TraceOp
from chunklist.modules.chunk_list import ChunkList

logger = logging.getLogger(__name__)

T = TypeVar("T")

DEFAULT_DOMAIN = 256
DEFAULT_MAX_CHUNK_SIZE = 64
DEFAULT_INITIAL_CHUNK_SIZE = 16

# Add-heavy so that lists grow over a trace
DEFAULT_OP_MIX: Dict[OpCode, float] = {
    OpCode.ADD: 40,
    OpCode.REMOVE: 20,
    OpCode.REMOVE_ALL: 3,
    OpCode.REMOVE_AT: 10,
    OpCode.SET: 10,
    OpCode.CLEAR: 1,
    OpCode.SORT: 2,
    OpCode.SET_CHUNK_SIZE: 2,
}

_INDEX_OPS = (OpCode.REMOVE_AT, OpCode.SET)


class OracleList(Generic[T]):
    """Plain dynamic array with the chunk list's method names"""

    def __init__(self, items: Optional[Iterable[T]] = None):
        self._items: List[T] = list(items) if items is not None else []

    def _check_index(self, index: int) -> None:
        if index < 0 or index >= len(self._items):
            raise ChunkIndexError(index, len(self._items))

    def add(self, t: T) -> None:
        self._items.append(t)

    def extend(self, items: Iterable[T]) -> None:
        self._items.extend(items)

    def get(self, index: int) -> T:
        self._check_index(index)
        return self._items[index]

    def set(self, index: int, t: T) -> None:
        self._check_index(index)
        self._items[index] = t

    def remove_at(self, index: int) -> None:
        self._check_index(index)
        del self._items[index]

    def remove(self, t: T) -> bool:
        try:
            self._items.remove(t)
        except ValueError:
            return False
        return True

    def remove_all(self, t: T) -> int:
        before = len(self._items)
        self._items = [x for x in self._items if x != t]
        return before - len(self._items)

    def replace(self, old: T, new: T) -> bool:
        """Overwrite the first occurrence of old with new"""
        try:
            i = self._items.index(old)
        except ValueError:
            return False
        self._items[i] = new
        return True

    def contains(self, t: T) -> bool:
        return t in self._items

    def count(self, t: T) -> int:
        return self._items.count(t)

    def size(self) -> int:
        return len(self._items)

    def clear(self) -> None:
        self._items = []

    def get_list(self) -> List[T]:
        return list(self._items)

    def sort(self) -> None:
        self._items.sort()

    def set_chunk_size(self, new_chunk_size: int) -> None:
        """Validated like the chunk list's; a flat list has no layout to change"""
        if isinstance(new_chunk_size, bool) or new_chunk_size < 1:
            raise InvalidChunkSizeError(new_chunk_size)

    def copy(self) -> "OracleList[T]":
        return OracleList(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __repr__(self) -> str:
        return f"OracleList(size={len(self._items)})"


Target = Union[ChunkList, OracleList]


class Snapshot:
    """Final content of a replay target"""

    def __init__(self, items: Iterable[Any]):
        self.items = list(items)
        self.multiset = Counter(self.items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Snapshot):
            return NotImplemented
        return self.multiset == other.multiset

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {"items": self.items, "multiset": dict(self.multiset)}


class ReplayResult:
    """Outcome of a differential replay"""

    def __init__(
        self,
        chunk_snapshot: Snapshot,
        oracle_snapshot: Snapshot,
        violations: List[str],
        ops_applied: int,
    ):
        self.chunk_snapshot = chunk_snapshot
        self.oracle_snapshot = oracle_snapshot
        self.violations = violations
        self.ops_applied = ops_applied

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "ok": self.ok,
            "ops_applied": self.ops_applied,
            "violations": self.violations,
            "chunk_list_size": len(self.chunk_snapshot.items),
            "oracle_size": len(self.oracle_snapshot.items),
        }


# ==================== Trace Application ====================

_APPLY: Dict[OpCode, Callable[[Any, tuple], Any]] = {
    OpCode.ADD: lambda target, args: target.add(args[0]),
    OpCode.REMOVE: lambda target, args: target.remove(args[0]),
    OpCode.REMOVE_ALL: lambda target, args: target.remove_all(args[0]),
    OpCode.REMOVE_AT: lambda target, args: target.remove_at(args[0]),
    OpCode.SET: lambda target, args: target.set(args[0], args[1]),
    OpCode.CLEAR: lambda target, args: target.clear(),
    OpCode.SORT: lambda target, args: target.sort(),
    OpCode.SET_CHUNK_SIZE: lambda target, args: target.set_chunk_size(args[0]),
}


def apply_op(target: Target, op: TraceOp) -> Any:
    """Apply one trace op to a chunk list or oracle list and return its result"""
    return _APPLY[op.opcode](target, op.operands)


def replay(trace: OpTrace, target: Target) -> Snapshot:
    """
    Apply every op of a trace in order

    Args:
        trace: Trace to replay
        target: ChunkList or OracleList to mutate

    Returns:
        Snapshot of the target's flattened content

    Raises:
        TraceError: An op does not fit the target's state (index out of range,
            invalid chunk size)
    """
    for i, op in enumerate(trace.ops):
        try:
            apply_op(target, op)
        except (ChunkIndexError, InvalidChunkSizeError) as e:
            raise TraceError(f"op {i} ({op.to_line()}) cannot be applied: {e}") from e

    return Snapshot(target.get_list())


# ==================== Trace Generation ====================

def _normalize_mix(op_mix: Mapping[Union[OpCode, str], float]) -> Dict[OpCode, float]:
    mix = {OpCode(k): float(v) for k, v in op_mix.items()}
    if any(w < 0 for w in mix.values()):
        raise ValueError(f"Op mix weights must be non-negative: {mix}")
    if not any(w > 0 for w in mix.values()):
        raise ValueError("Op mix needs at least one positive weight")
    return mix


def generate_trace(
    seed: int,
    length: int,
    op_mix: Optional[Mapping[Union[OpCode, str], float]] = None,
    domain: int = DEFAULT_DOMAIN,
    max_chunk_size: int = DEFAULT_MAX_CHUNK_SIZE,
    initial_chunk_size: int = DEFAULT_INITIAL_CHUNK_SIZE,
) -> OpTrace:
    """
    Generate a deterministic random trace

    The running model is a sequential chunk list with `initial_chunk_size`,
    updated exactly as differential_replay updates the list under test. Index
    ops are drawn within its size at that point of the trace; while it is
    empty they are emitted as ADD instead. Once removals leave holes, which
    element an index op hits depends on the layout, so a trace is replayable
    on a chunk list starting from the same chunk size.

    Args:
        seed: RNG seed (same seed, same trace)
        length: Number of ops
        op_mix: Opcode weights (defaults to DEFAULT_OP_MIX)
        domain: Element values are drawn from range(domain)
        max_chunk_size: SET_CHUNK_SIZE operands are drawn from 1..max_chunk_size
        initial_chunk_size: Chunk size of the list the trace will be replayed on

    Returns:
        OpTrace with `length` ops
    """
    if length < 0:
        raise ValueError(f"Trace length must be >= 0, got {length}")
    if domain < 1 or max_chunk_size < 1:
        raise ValueError("domain and max_chunk_size must be >= 1")

    mix = _normalize_mix(DEFAULT_OP_MIX if op_mix is None else op_mix)
    opcodes = list(mix)
    weights = [mix[o] for o in opcodes]

    rng = random.Random(seed)
    model: ChunkList[int] = ChunkList(initial_chunk_size, ParallelOptions.sequential())
    ops: List[TraceOp] = []

    for _ in range(length):
        opcode = rng.choices(opcodes, weights)[0]
        size = model.size()
        if opcode in _INDEX_OPS and size == 0:
            opcode = OpCode.ADD

        if opcode in (OpCode.ADD, OpCode.REMOVE, OpCode.REMOVE_ALL):
            operands: tuple = (rng.randrange(domain),)
        elif opcode == OpCode.REMOVE_AT:
            operands = (rng.randrange(size),)
        elif opcode == OpCode.SET:
            operands = (rng.randrange(size), rng.randrange(domain))
        elif opcode == OpCode.SET_CHUNK_SIZE:
            operands = (rng.randint(1, max_chunk_size),)
        else:
            operands = ()

        op = TraceOp(opcode=opcode, operands=operands)
        apply_op(model, op)
        ops.append(op)

    return OpTrace(ops=ops)


# ==================== Differential Replay ====================

def differential_replay(
    trace: OpTrace,
    chunk_list: ChunkList,
    oracle: Optional[OracleList] = None,
    probes: Iterable[Any] = (),
) -> ReplayResult:
    """
    Replay a trace on a chunk list and an oracle in lock step

    Checked after each op: size agreement, remove result agreement,
    exactly-once removal, no survivors after remove_all, canonical fill after
    sort and shrinking resizes, and element-for-element equality after sort.
    REMOVE_AT and SET are mirrored on the oracle by value: whatever element the
    chunk list's fall-forward resolution selects is removed from / replaced in
    the oracle, so multisets stay comparable once holes exist.
    Generated traces replay here when the chunk list starts from the
    trace's initial_chunk_size.

    Args:
        trace: Trace to replay
        chunk_list: Chunk list under test (mutated)
        oracle: Reference list (a fresh empty one by default)
        probes: Values checked with contains() on both sides at the end

    Returns:
        ReplayResult with both snapshots and every violation found

    Raises:
        TraceError: An index op is out of range for the current state
    """
    oracle = oracle if oracle is not None else OracleList()
    violations: List[str] = []

    for i, op in enumerate(trace.ops):
        where = f"op {i} ({op.to_line()})"
        args = op.operands
        previous_chunk_size = chunk_list.chunk_size

        try:
            if op.opcode == OpCode.REMOVE:
                value = args[0]
                before = chunk_list.count(value)
                removed = chunk_list.remove(value)
                expected = oracle.remove(value)
                after = chunk_list.count(value)
                if removed != expected:
                    violations.append(f"{where}: remove returned {removed}, oracle {expected}")
                if after != before - (1 if removed else 0):
                    violations.append(f"{where}: count went {before} -> {after}")

            elif op.opcode == OpCode.REMOVE_ALL:
                chunk_list.remove_all(args[0])
                oracle.remove_all(args[0])
                if chunk_list.count(args[0]):
                    violations.append(f"{where}: occurrences survived remove_all")

            elif op.opcode == OpCode.REMOVE_AT:
                value = chunk_list.get(args[0])
                chunk_list.remove_at(args[0])
                if not oracle.remove(value):
                    violations.append(f"{where}: resolved value {value!r} missing from oracle")

            elif op.opcode == OpCode.SET:
                old = chunk_list.get(args[0])
                chunk_list.set(args[0], args[1])
                if chunk_list.get(args[0]) != args[1]:
                    violations.append(f"{where}: get after set did not return the new value")
                if not oracle.replace(old, args[1]):
                    violations.append(f"{where}: replaced value {old!r} missing from oracle")

            else:
                apply_op(chunk_list, op)
                apply_op(oracle, op)

        except (ChunkIndexError, InvalidChunkSizeError) as e:
            raise TraceError(f"{where} cannot be applied: {e}") from e

        if chunk_list.size() != oracle.size():
            violations.append(f"{where}: size {chunk_list.size()} != oracle {oracle.size()}")

        if op.opcode == OpCode.SORT:
            if chunk_list.get_list() != oracle.get_list():
                violations.append(f"{where}: sorted content differs from oracle")
            if not chunk_list.is_canonical():
                violations.append(f"{where}: layout not canonical after sort")

        elif op.opcode == OpCode.SET_CHUNK_SIZE:
            layout = chunk_list.chunks()
            if any(len(chunk) > chunk_list.chunk_size for chunk in layout):
                violations.append(f"{where}: chunk over capacity after resize")
            if args[0] <= previous_chunk_size and not chunk_list.is_canonical():
                violations.append(f"{where}: layout not canonical after shrink")

    if any(len(chunk) > chunk_list.chunk_size for chunk in chunk_list.chunks()):
        violations.append("final: chunk over capacity")

    chunk_snapshot = Snapshot(chunk_list.get_list())
    oracle_snapshot = Snapshot(oracle.get_list())
    if chunk_snapshot.multiset != oracle_snapshot.multiset:
        violations.append("final: multiset differs from oracle")

    for value in probes:
        if chunk_list.contains(value) != oracle.contains(value):
            violations.append(f"final: contains({value!r}) disagrees with oracle")

    if violations:
        logger.warning(f"Differential replay found {len(violations)} violation(s)")

    return ReplayResult(chunk_snapshot, oracle_snapshot, violations, len(trace.ops))
