"""
Pydantic models shared by the chunk list, the oracle and the bench
"""
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from chunklist.core.config import settings
from chunklist.core.errors import TraceError

SQRT_TOKEN = "sqrt"


# ==================== Chunk List Options ====================

class SearchStrategy(str, Enum):
    """How remove locates an element inside one chunk"""
    LINEAR = "linear"
    # Only sound while every chunk is internally sorted (right after sort())
    BINARY = "binary"


class ParallelOptions(BaseModel):
    """Per-list knobs for the internally parallel operations"""
    model_config = ConfigDict(frozen=True)

    parallel: bool = True
    workers: int = Field(default_factory=lambda: settings.worker_count, ge=1)
    sequential_threshold: int = Field(default=4, ge=0)
    search_strategy: SearchStrategy = SearchStrategy.LINEAR
    # Run scans inline while the interpreter holds a GIL
    gil_fallback: bool = Field(default_factory=lambda: settings.gil_fallback)

    @classmethod
    def from_settings(cls, **overrides: Any) -> "ParallelOptions":
        """Build options from the global settings, with keyword overrides"""
        values: Dict[str, Any] = {
            "parallel": settings.parallel_enabled,
            "workers": settings.worker_count,
            "sequential_threshold": settings.sequential_threshold,
            "search_strategy": settings.search_strategy,
            "gil_fallback": settings.gil_fallback,
        }
        values.update(overrides)
        return cls(**values)

    @classmethod
    def sequential(cls) -> "ParallelOptions":
        """Options that keep every operation on the calling thread"""
        return cls.from_settings(parallel=False)


# ==================== Operation Traces ====================

class OpCode(str, Enum):
    """Mutating operations recorded in a trace"""
    ADD = "ADD"
    REMOVE = "REMOVE"
    REMOVE_ALL = "REMOVE_ALL"
    REMOVE_AT = "REMOVE_AT"
    SET = "SET"
    CLEAR = "CLEAR"
    SORT = "SORT"
    SET_CHUNK_SIZE = "SET_CHUNK_SIZE"


OPERAND_COUNTS: Dict[OpCode, int] = {
    OpCode.ADD: 1,
    OpCode.REMOVE: 1,
    OpCode.REMOVE_ALL: 1,
    OpCode.REMOVE_AT: 1,
    OpCode.SET: 2,
    OpCode.CLEAR: 0,
    OpCode.SORT: 0,
    OpCode.SET_CHUNK_SIZE: 1,
}


class TraceOp(BaseModel):
    """One recorded operation: opcode plus integer operands"""
    model_config = ConfigDict(frozen=True)

    opcode: OpCode
    operands: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def check_operand_count(self) -> "TraceOp":
        """Each opcode takes a fixed number of operands"""
        expected = OPERAND_COUNTS[self.opcode]
        if len(self.operands) != expected:
            raise ValueError(
                f"{self.opcode.value} takes {expected} operand(s), got {len(self.operands)}"
            )
        return self

    def to_line(self) -> str:
        """Render as 'OPCODE operand [operand]'"""
        return " ".join([self.opcode.value, *(str(x) for x in self.operands)])


class OpTrace(BaseModel):
    """Ordered sequence of recorded operations"""
    ops: List[TraceOp] = Field(default_factory=list)

    def __len__(self) -> int:
        return len(self.ops)

    def to_text(self) -> str:
        """One op per line: 'OPCODE operand [operand]'"""
        return "".join(f"{op.to_line()}\n" for op in self.ops)

    @classmethod
    def from_text(cls, text: str) -> "OpTrace":
        """
        Parse the line-oriented trace format

        Blank lines and lines starting with '#' are skipped.

        Raises:
            TraceError: Unknown opcode, bad operand count or non-integer operand
        """
        ops: List[TraceOp] = []
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue

            name, *fields = line.split()
            try:
                opcode = OpCode(name.upper())
            except ValueError:
                raise TraceError(f"Unknown opcode: {name}", line_number) from None

            try:
                operands = tuple(int(f) for f in fields)
            except ValueError:
                raise TraceError(f"Non-integer operand in: {line}", line_number) from None

            try:
                ops.append(TraceOp(opcode=opcode, operands=operands))
            except ValidationError as e:
                raise TraceError(e.errors()[0]["msg"], line_number) from None

        return cls(ops=ops)

    def save(self, path: Union[str, Path]) -> Path:
        """Write the trace to a text file"""
        path = Path(path)
        path.write_text(self.to_text())
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "OpTrace":
        """Read a trace written by save()"""
        return cls.from_text(Path(path).read_text())


# ==================== Benchmark Models ====================

class BenchOperation(str, Enum):
    """Operations the bench can time"""
    ADD = "add"
    CONTAINS_HIT = "contains-hit"
    CONTAINS_MISS = "contains-miss"
    REMOVE = "remove"
    REMOVE_ALL = "removeAll"
    SORT = "sort"
    GET = "get"


ChunkSizeSpec = Union[int, Literal["sqrt"]]


class BenchConfig(BaseModel):
    """Benchmark run configuration"""
    sizes: List[int] = Field(..., min_length=1)
    chunk_sizes: List[ChunkSizeSpec] = Field(
        default_factory=lambda: [settings.bench_chunk_size, SQRT_TOKEN]
    )
    operations: List[BenchOperation] = Field(..., min_length=1)
    repetitions: int = Field(default_factory=lambda: settings.bench_repetitions, ge=1)
    seed: int = Field(default_factory=lambda: settings.bench_seed)
    parallel: bool = True
    workers: Optional[int] = Field(default=None, ge=1)
    output_path: Optional[Path] = None
    format: Literal["csv", "markdown"] = "csv"

    @field_validator("sizes")
    @classmethod
    def validate_sizes(cls, v: List[int]) -> List[int]:
        """Element counts must be positive"""
        bad = [n for n in v if n < 1]
        if bad:
            raise ValueError(f"Invalid sizes: {bad} (each must be >= 1)")
        return v

    @field_validator("chunk_sizes")
    @classmethod
    def validate_chunk_sizes(cls, v: List[ChunkSizeSpec]) -> List[ChunkSizeSpec]:
        """Explicit chunk sizes must be positive"""
        if not v:
            raise ValueError("At least one chunk size is required")
        bad = [c for c in v if isinstance(c, int) and c < 1]
        if bad:
            raise ValueError(f"Invalid chunk sizes: {bad} (each must be >= 1 or 'sqrt')")
        return v

    def parallel_options(self) -> ParallelOptions:
        """Options for the chunk lists built by this run"""
        overrides: Dict[str, Any] = {"parallel": self.parallel}
        if self.workers is not None:
            overrides["workers"] = self.workers
        return ParallelOptions.from_settings(**overrides)


class BenchRow(BaseModel):
    """Timing row for one (structure, n, chunk size, operation) cell"""
    structure: str
    n: int
    chunk_size: int
    operation: str
    median_ns: int
    min_ns: int
    max_ns: int
    speedup: float


class BenchReport(BaseModel):
    """Benchmark report: rows plus environment metadata"""
    rows: List[BenchRow] = Field(default_factory=list)
    environment: Dict[str, str] = Field(default_factory=dict)

