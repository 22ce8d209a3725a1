"""
Tests for the sequential oracle, operation traces and differential replay
"""
import pytest

from chunklist.core.config import settings
from chunklist.core.errors import ChunkIndexError, InvalidChunkSizeError, TraceError
from chunklist.data.models import OpCode, OpTrace, ParallelOptions, TraceOp
from chunklist.modules.chunk_list import ChunkList
from chunklist.modules.oracle import (
    DEFAULT_INITIAL_CHUNK_SIZE,
    DEFAULT_OP_MIX,
    OracleList,
    Snapshot,
    apply_op,
    differential_replay,
    generate_trace,
    replay,
)


def op(opcode, *operands):
    return TraceOp(opcode=opcode, operands=operands)


# ==================== Oracle List ====================

def test_oracle_list_operations():
    """Test the flat list behaves like a plain Python list"""
    oracle = OracleList([3, 1, 2, 1])
    assert oracle.size() == 4
    assert oracle.get(1) == 1
    assert oracle.remove(1) is True
    assert oracle.get_list() == [3, 2, 1]
    assert oracle.remove(9) is False
    assert oracle.remove_all(1) == 1
    oracle.add(0)
    oracle.sort()
    assert oracle.get_list() == [0, 2, 3]
    assert oracle.contains(2) and not oracle.contains(1)
    oracle.clear()
    assert len(oracle) == 0


def test_oracle_list_index_errors():
    """Test index ops outside [0, size) raise like the chunk list"""
    oracle = OracleList([1])
    with pytest.raises(ChunkIndexError):
        oracle.get(1)
    with pytest.raises(ChunkIndexError):
        oracle.set(-1, 0)
    with pytest.raises(ChunkIndexError):
        oracle.remove_at(5)


def test_oracle_list_replace_and_chunk_size():
    """Test replace and chunk size validation"""
    oracle = OracleList([4, 5, 4])
    assert oracle.replace(4, 7) is True
    assert oracle.get_list() == [7, 5, 4]
    assert oracle.replace(9, 1) is False

    oracle.set_chunk_size(3)
    with pytest.raises(InvalidChunkSizeError):
        oracle.set_chunk_size(0)


def test_oracle_copy_is_independent():
    """Test copies do not share storage"""
    oracle = OracleList([1, 2])
    clone = oracle.copy()
    clone.add(3)
    assert oracle.get_list() == [1, 2]


# ==================== Replay ====================

def test_replay_add_add_remove():
    """Test replaying [Add 1, Add 2, Remove 1] leaves {2} on both targets"""
    trace = OpTrace(ops=[op(OpCode.ADD, 1), op(OpCode.ADD, 2), op(OpCode.REMOVE, 1)])
    oracle_snapshot = replay(trace, OracleList())
    chunk_snapshot = replay(trace, ChunkList(2, ParallelOptions.sequential()))

    assert oracle_snapshot.items == [2]
    assert chunk_snapshot == oracle_snapshot
    assert chunk_snapshot.to_dict()["multiset"] == {2: 1}


def test_replay_empty_trace():
    """Test the empty trace leaves an empty list"""
    assert replay(OpTrace(), OracleList()).items == []
    assert replay(OpTrace(), ChunkList()).items == []


def test_replay_out_of_range_index():
    """Test an index op past the end is reported as a trace error"""
    trace = OpTrace(ops=[op(OpCode.ADD, 1), op(OpCode.REMOVE_AT, 3)])
    with pytest.raises(TraceError, match="REMOVE_AT 3"):
        replay(trace, OracleList())
    with pytest.raises(TraceError):
        replay(trace, ChunkList(4))


def test_replay_invalid_chunk_size():
    """Test SET_CHUNK_SIZE 0 is reported as a trace error"""
    trace = OpTrace(ops=[op(OpCode.SET_CHUNK_SIZE, 0)])
    with pytest.raises(TraceError):
        replay(trace, ChunkList(4))


def test_snapshot_equality_ignores_order():
    """Test snapshots compare as multisets"""
    assert Snapshot([1, 2, 2]) == Snapshot([2, 1, 2])
    assert Snapshot([1, 2]) != Snapshot([1, 2, 2])


# ==================== Trace Generation ====================

def test_generate_trace_deterministic():
    """Test the same seed gives the same trace"""
    first = generate_trace(seed=17, length=500)
    second = generate_trace(seed=17, length=500)
    other = generate_trace(seed=18, length=500)

    assert len(first) == 500
    assert first.ops == second.ops
    assert first.ops != other.ops


def test_generate_trace_all_add():
    """Test an all-Add mix grows the list by one per op"""
    trace = generate_trace(seed=1, length=100, op_mix={OpCode.ADD: 1}, domain=10)
    assert all(o.opcode == OpCode.ADD for o in trace.ops)
    assert all(0 <= o.operands[0] < 10 for o in trace.ops)
    assert sum(replay(trace, OracleList()).multiset.values()) == 100


def test_generate_trace_index_ops_stay_in_range():
    """Test index operands are always valid for the list size at that point"""
    trace = generate_trace(seed=5, length=3000)
    # Replaying must not raise
    replay(trace, ChunkList(DEFAULT_INITIAL_CHUNK_SIZE, ParallelOptions.sequential()))


@pytest.mark.parametrize("chunk_size", [1, 7, 16, 64])
def test_generated_traces_always_replay(chunk_size, parallel_options):
    """Test traces stay in range on a chunk list with their starting chunk size"""
    for seed in range(200):
        trace = generate_trace(seed=seed, length=400, domain=16, initial_chunk_size=chunk_size)
        result = differential_replay(trace, ChunkList(chunk_size, parallel_options))
        assert result.ok, (seed, result.violations[:5])
        assert result.ops_applied == 400


def test_generated_trace_hits_holes():
    """Test index ops land after removals have left short chunks behind"""
    trace = generate_trace(seed=3, length=2000, initial_chunk_size=8)
    model = ChunkList(8, ParallelOptions.sequential())
    index_ops_after_holes = 0
    for trace_op in trace.ops:
        if trace_op.opcode in (OpCode.REMOVE_AT, OpCode.SET) and not model.is_canonical():
            index_ops_after_holes += 1
        apply_op(model, trace_op)
    assert index_ops_after_holes > 0


def test_generate_trace_index_ops_on_empty_list():
    """Test index ops drawn while the list is empty become adds"""
    trace = generate_trace(seed=2, length=50, op_mix={"REMOVE_AT": 1, "SET": 1})
    assert trace.ops[0].opcode == OpCode.ADD
    replay(trace, OracleList())


def test_generate_trace_chunk_size_operands():
    """Test SET_CHUNK_SIZE operands fall in 1..max_chunk_size"""
    trace = generate_trace(seed=3, length=200, op_mix={OpCode.SET_CHUNK_SIZE: 1}, max_chunk_size=8)
    assert {o.operands[0] for o in trace.ops} <= set(range(1, 9))


@pytest.mark.parametrize(
    "op_mix",
    [{OpCode.ADD: 0}, {OpCode.ADD: -1, OpCode.REMOVE: 2}, {"EXPLODE": 1}],
)
def test_generate_trace_invalid_mix(op_mix):
    """Test invalid op mixes are rejected"""
    with pytest.raises(ValueError):
        generate_trace(seed=0, length=10, op_mix=op_mix)


def test_default_mix_is_add_heavy():
    """Test the default mix favours adds and covers every opcode"""
    assert set(DEFAULT_OP_MIX) == set(OpCode)
    assert DEFAULT_OP_MIX[OpCode.ADD] == max(DEFAULT_OP_MIX.values())


# ==================== Trace Text Format ====================

def test_trace_text_round_trip():
    """Test a generated trace survives to_text/from_text"""
    trace = generate_trace(seed=11, length=300)
    assert OpTrace.from_text(trace.to_text()).ops == trace.ops


def test_trace_text_format():
    """Test the line format"""
    trace = OpTrace(ops=[op(OpCode.ADD, 5), op(OpCode.SET, 0, 9), op(OpCode.SORT)])
    assert trace.to_text() == "ADD 5\nSET 0 9\nSORT\n"


def test_trace_text_skips_comments_and_blanks():
    """Test comments, blank lines and lowercase opcodes are accepted"""
    text = "# seed 4\n\nadd 1\n   \nREMOVE 1  \n# end\n"
    trace = OpTrace.from_text(text)
    assert [o.to_line() for o in trace.ops] == ["ADD 1", "REMOVE 1"]


@pytest.mark.parametrize(
    "text, line_number",
    [
        ("ADD 1\nPUSH 2\n", 2),
        ("ADD 1\n\nADD x\n", 3),
        ("SET 1\n", 1),
        ("ADD 1\nSORT 4\n", 2),
    ],
)
def test_trace_text_errors(text, line_number):
    """Test malformed lines raise TraceError with the line number"""
    with pytest.raises(TraceError) as exc_info:
        OpTrace.from_text(text)
    assert exc_info.value.line_number == line_number
    assert str(exc_info.value).startswith(f"line {line_number}:")


def test_trace_save_and_load(tmp_path):
    """Test save/load through a file"""
    trace = generate_trace(seed=8, length=100)
    path = trace.save(tmp_path / "trace_8.txt")
    assert path.exists()
    assert OpTrace.load(path).ops == trace.ops


def test_trace_op_operand_count():
    """Test TraceOp validates its operand count"""
    with pytest.raises(ValueError):
        TraceOp(opcode=OpCode.ADD, operands=())
    with pytest.raises(ValueError):
        TraceOp(opcode=OpCode.CLEAR, operands=(1,))


# ==================== Differential Replay ====================

def test_differential_replay_seeds(parallel_options):
    """Test 20 seeded traces at chunk size 16 agree with the oracle"""
    for seed in range(20):
        trace = generate_trace(seed=seed, length=2000)
        result = differential_replay(
            trace, ChunkList(16, parallel_options), probes=range(-1, 99)
        )
        assert result.ok, result.violations[:5]
        assert result.ops_applied == 2000
        assert result.chunk_snapshot == result.oracle_snapshot


def test_differential_replay_small_domain(parallel_options):
    """Test heavy duplication (values 0..3) across many chunks"""
    for seed in range(100):
        trace = generate_trace(
            seed=seed, length=500, domain=4, max_chunk_size=8, initial_chunk_size=4
        )
        result = differential_replay(trace, ChunkList(4, parallel_options), probes=range(-1, 5))
        assert result.ok, result.violations[:5]


def test_differential_replay_sequential(sequential_options):
    """Test the sequential path against the oracle"""
    trace = generate_trace(seed=99, length=2000, initial_chunk_size=7)
    result = differential_replay(trace, ChunkList(7, sequential_options))
    assert result.ok, result.violations[:5]


def test_differential_replay_ending_in_sort(parallel_options):
    """Test a trace ending in SORT yields identical sequences"""
    trace = generate_trace(seed=21, length=500)
    trace.ops.append(op(OpCode.SORT))
    chunk_list = ChunkList(16, parallel_options)
    result = differential_replay(trace, chunk_list)

    assert result.ok, result.violations[:5]
    assert result.chunk_snapshot.items == result.oracle_snapshot.items
    assert chunk_list.is_canonical()


def test_differential_replay_detects_broken_remove(parallel_options):
    """Test a chunk list that deletes every copy on remove is caught"""

    class GreedyChunkList(ChunkList):
        def remove(self, t, strategy=None):
            return self.remove_all(t) > 0

    trace = OpTrace(ops=[op(OpCode.ADD, 1), op(OpCode.ADD, 1), op(OpCode.REMOVE, 1)])
    result = differential_replay(trace, GreedyChunkList(2, parallel_options))

    assert not result.ok
    assert any("count went" in v for v in result.violations)
    assert any("size" in v for v in result.violations)
    summary = result.to_dict()
    assert summary["ok"] is False
    assert summary["chunk_list_size"] == 0
    assert summary["oracle_size"] == 1


def test_differential_replay_detects_broken_sort(sequential_options):
    """Test a sort that leaves the list unsorted is caught"""

    class LazySortChunkList(ChunkList):
        def sort(self):
            pass

    trace = OpTrace(ops=[op(OpCode.ADD, 2), op(OpCode.ADD, 1), op(OpCode.SORT)])
    result = differential_replay(trace, LazySortChunkList(4, sequential_options))
    assert any("sorted content" in v for v in result.violations)


def test_differential_replay_out_of_range(sequential_options):
    """Test an index op past the end raises TraceError"""
    trace = OpTrace(ops=[op(OpCode.REMOVE_AT, 0)])
    with pytest.raises(TraceError):
        differential_replay(trace, ChunkList(4, sequential_options))


@pytest.mark.slow
def test_differential_replay_full_corpus():
    """Test 200 seeds of 10^4 ops each with 100 contains probes"""
    options = ParallelOptions.from_settings()
    for seed in range(200):
        trace = generate_trace(seed=seed, length=10_000)
        result = differential_replay(trace, ChunkList(16, options), probes=range(-1, 99))
        assert result.ok, (seed, result.violations[:5])


def test_trace_corpus_script(tmp_path, monkeypatch, capsys, root_logger):
    """Test the corpus script writes every trace and replays all of them cleanly"""
    monkeypatch.setattr(settings, "log_dir", "")
    from scripts import generate_trace_corpus

    out_dir = tmp_path / "traces"
    monkeypatch.setattr(
        "sys.argv",
        ["generate_trace_corpus.py", "--out-dir", str(out_dir), "--seeds", "20",
         "--length", "1000", "--chunk-size", "16"],
    )
    assert generate_trace_corpus.main() == 0
    assert len(list(out_dir.glob("trace_*.txt"))) == 20
    assert "20 traces of 1000 ops: 0 failed" in capsys.readouterr().out
