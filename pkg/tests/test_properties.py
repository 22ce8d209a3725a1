"""
Property-based tests for chunk list layout and behaviour
"""
from collections import Counter

from hypothesis import given, settings
from hypothesis import strategies as st

from chunklist.data.models import OpCode, OpTrace, ParallelOptions, TraceOp
from chunklist.modules.chunk_list import ChunkList
from chunklist.modules.oracle import apply_op, differential_replay

OPTIONS = ParallelOptions(parallel=True, workers=4, sequential_threshold=0, gil_fallback=False)

elements = st.lists(st.integers(min_value=-50, max_value=50), max_size=200)
chunk_sizes = st.integers(min_value=1, max_value=32)


@st.composite
def traces(draw, max_ops=150):
    """(trace, chunk size) pairs: index operands are drawn against a sequential chunk list"""
    chunk_size = draw(st.integers(min_value=1, max_value=8))
    model = ChunkList(chunk_size, ParallelOptions.sequential())
    ops = []
    value = st.integers(min_value=0, max_value=9)
    for _ in range(draw(st.integers(min_value=0, max_value=max_ops))):
        opcode = draw(st.sampled_from(list(OpCode)))
        size = model.size()
        if opcode in (OpCode.REMOVE_AT, OpCode.SET) and size == 0:
            opcode = OpCode.ADD

        if opcode in (OpCode.ADD, OpCode.REMOVE, OpCode.REMOVE_ALL):
            operands = (draw(value),)
        elif opcode == OpCode.REMOVE_AT:
            operands = (draw(st.integers(min_value=0, max_value=size - 1)),)
        elif opcode == OpCode.SET:
            operands = (draw(st.integers(min_value=0, max_value=size - 1)), draw(value))
        elif opcode == OpCode.SET_CHUNK_SIZE:
            operands = (draw(st.integers(min_value=1, max_value=16)),)
        else:
            operands = ()

        op = TraceOp(opcode=opcode, operands=operands)
        apply_op(model, op)
        ops.append(op)
    return OpTrace(ops=ops), chunk_size


@settings(deadline=None)
@given(items=elements, chunk_size=chunk_sizes)
def test_adds_fill_chunks_canonically(items, chunk_size):
    """Adds alone give ceil(n / chunk_size) chunks, all full but the last"""
    chunk_list = ChunkList.from_iterable(items, chunk_size, OPTIONS)
    chunks = chunk_list.chunks()

    assert len(chunks) == -(-len(items) // chunk_size)
    assert chunk_list.is_canonical()
    assert all(0 < len(chunk) <= chunk_size for chunk in chunks)
    assert chunk_list.get_list() == items


@settings(deadline=None)
@given(items=elements, chunk_size=chunk_sizes)
def test_get_matches_flat_list_without_removals(items, chunk_size):
    """Without removals get(i) is the i-th added element"""
    chunk_list = ChunkList.from_iterable(items, chunk_size, OPTIONS)
    for i, item in enumerate(items):
        assert chunk_list.get(i) == item


@settings(deadline=None)
@given(index=st.integers(min_value=0, max_value=10**9), chunk_size=chunk_sizes)
def test_index_conversion_recombines(index, chunk_size):
    """chunk * chunk_size + position gives back the index"""
    chunk_list = ChunkList(chunk_size)
    c = chunk_list.convert_index_to_chunk(index)
    p = chunk_list.convert_index_to_chunk_pos(index)
    assert c * chunk_size + p == index
    assert 0 <= p < chunk_size


@settings(deadline=None)
@given(items=elements, chunk_size=chunk_sizes, new_chunk_size=chunk_sizes,
       removals=st.lists(st.integers(min_value=-50, max_value=50), max_size=30))
def test_resize_keeps_multiset_and_capacity(items, chunk_size, new_chunk_size, removals):
    """Resizing never changes content and never leaves a chunk over capacity"""
    chunk_list = ChunkList.from_iterable(items, chunk_size, OPTIONS)
    for value in removals:
        chunk_list.remove(value)
    before = Counter(chunk_list.get_list())

    chunk_list.set_chunk_size(new_chunk_size)

    assert Counter(chunk_list.get_list()) == before
    assert all(len(chunk) <= chunk_list.chunk_size for chunk in chunk_list.chunks())
    if new_chunk_size <= chunk_size:
        assert chunk_list.is_canonical()


@settings(deadline=None)
@given(items=elements, chunk_size=chunk_sizes)
def test_sort_is_globally_sorted(items, chunk_size):
    """After sort the flattened list equals sorted() and the layout is canonical"""
    chunk_list = ChunkList.from_iterable(items, chunk_size, OPTIONS)
    chunk_list.sort()
    assert chunk_list.get_list() == sorted(items)
    assert chunk_list.is_canonical()


@settings(deadline=None)
@given(items=elements, chunk_size=chunk_sizes, value=st.integers(min_value=-50, max_value=50))
def test_remove_all_leaves_no_occurrence(items, chunk_size, value):
    """remove_all removes every occurrence and nothing else"""
    chunk_list = ChunkList.from_iterable(items, chunk_size, OPTIONS)
    removed = chunk_list.remove_all(value)

    assert removed == items.count(value)
    assert not chunk_list.contains(value)
    assert chunk_list.get_list() == [x for x in items if x != value]


@settings(deadline=None, max_examples=50)
@given(case=traces())
def test_random_traces_agree_with_oracle(case):
    """Any valid trace leaves the chunk list and the flat list with equal multisets"""
    trace, chunk_size = case
    result = differential_replay(trace, ChunkList(chunk_size, OPTIONS), probes=range(-1, 11))
    assert result.ok, result.violations[:5]
