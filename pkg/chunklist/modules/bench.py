"""
Benchmark Module

Times chunk lists (explicit chunk size and sqrt(N) chunk size) against a flat
array list on the same seeded data, cross-checks every structure's result
against the flat list, and renders the report as CSV or markdown.
"""
import csv
import io
import logging
import os
import platform
import random
import statistics
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from pydantic import ValidationError

from chunklist.core.errors import BenchConfigError, BenchMismatchError, ReportWriteError
from chunklist.core.monitoring import BenchEventLogger
from chunklist.core.workers import gil_enabled
from chunklist.data.models import (
    SQRT_TOKEN,
    BenchConfig,
    BenchOperation,
    BenchReport,
    BenchRow,
    ParallelOptions,
)
from chunklist.modules.chunk_list import ChunkList, recommended_chunk_size
from chunklist.modules.oracle import OracleList

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["structure", "n", "chunk_size", "operation", "median_ns", "min_ns", "max_ns", "speedup"]

BASELINE_LABEL = "array_list"
CHUNK_LIST_LABEL = "chunk_list"
SQRT_LABEL = "chunk_list_sqrt"

# Generated elements are drawn from [0, ELEMENT_DOMAIN); MISS_SENTINEL is outside it
ELEMENT_DOMAIN = 2**31
MISS_SENTINEL = -1

Structure = Union[ChunkList, OracleList]


def build_config(**values: Any) -> BenchConfig:
    """
    Validate raw values into a BenchConfig

    Raises:
        BenchConfigError: Any field is invalid
    """
    try:
        return BenchConfig(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise BenchConfigError(f"Invalid bench config: {problems}") from e


# ==================== Operations ====================

def _draw_operand(operation: BenchOperation, values: List[int], rng: random.Random) -> Any:
    """Per-repetition operand: probe value, index, new element or nothing"""
    if operation in (BenchOperation.CONTAINS_HIT, BenchOperation.REMOVE, BenchOperation.REMOVE_ALL):
        return rng.choice(values)
    if operation == BenchOperation.CONTAINS_MISS:
        return MISS_SENTINEL
    if operation == BenchOperation.GET:
        return rng.randrange(len(values))
    if operation == BenchOperation.ADD:
        return rng.randrange(ELEMENT_DOMAIN)
    return None


_RUNNERS: Dict[BenchOperation, Callable[[Structure, Any], Any]] = {
    BenchOperation.ADD: lambda s, x: s.add(x),
    BenchOperation.CONTAINS_HIT: lambda s, x: s.contains(x),
    BenchOperation.CONTAINS_MISS: lambda s, x: s.contains(x),
    BenchOperation.REMOVE: lambda s, x: s.remove(x),
    BenchOperation.REMOVE_ALL: lambda s, x: s.remove_all(x),
    BenchOperation.SORT: lambda s, x: s.sort(),
    BenchOperation.GET: lambda s, x: s.get(x),
}


def _outcome(operation: BenchOperation, structure: Structure, returned: Any) -> Any:
    """Value compared across structures for the warm-up run"""
    if operation == BenchOperation.SORT:
        return structure.get_list()
    if operation == BenchOperation.ADD:
        return structure.size()
    if operation == BenchOperation.REMOVE_ALL:
        return returned, structure.size()
    return returned


# ==================== Harness ====================

def _build_structures(
    config: BenchConfig, values: List[int], options: ParallelOptions
) -> List[Tuple[str, int, Structure]]:
    """Populated (label, chunk size, structure) triples; baseline last"""
    n = len(values)
    structures: List[Tuple[str, int, Structure]] = []
    for spec in config.chunk_sizes:
        if spec == SQRT_TOKEN:
            label, chunk_size = SQRT_LABEL, recommended_chunk_size(n)
        else:
            label, chunk_size = CHUNK_LIST_LABEL, int(spec)
        structures.append((label, chunk_size, ChunkList.from_iterable(values, chunk_size, options)))
    structures.append((BASELINE_LABEL, 0, OracleList(values)))
    return structures


def _time_cell(
    operation: BenchOperation, structure: Structure, operands: List[Any]
) -> Tuple[Any, List[int]]:
    """
    Warm up once, then time one run per operand on a fresh copy

    Returns:
        (warm-up outcome, per-repetition wall times in ns)
    """
    run = _RUNNERS[operation]

    warm = structure.copy()
    outcome = _outcome(operation, warm, run(warm, operands[0]))

    timings: List[int] = []
    for operand in operands[1:]:
        fresh = structure.copy()
        start = time.perf_counter_ns()
        run(fresh, operand)
        timings.append(time.perf_counter_ns() - start)
    return outcome, timings


def environment_metadata(config: BenchConfig) -> Dict[str, str]:
    """Machine and run details recorded alongside the timings"""
    options = config.parallel_options()
    return {
        "cpu_count": str(os.cpu_count() or 1),
        "python": platform.python_version(),
        "implementation": platform.python_implementation(),
        "platform": platform.platform(),
        "parallel": "on" if options.parallel else "off",
        "gil": "on" if gil_enabled() else "off",
        "gil_fallback": "on" if options.gil_fallback else "off",
        "workers": str(options.workers),
        "repetitions": str(config.repetitions),
        "seed": str(config.seed),
    }


def run_bench(config: BenchConfig) -> BenchReport:
    """
    Run every (structure, N, operation) cell sequentially

    Each N gets one seeded population shared by all structures; each
    repetition runs on a copy of it, so timing excludes setup.

    Args:
        config: Validated bench configuration

    Returns:
        BenchReport with |structures| x |sizes| x |operations| rows

    Raises:
        BenchMismatchError: A chunk list disagreed with the flat list
    """
    options = config.parallel_options()
    report = BenchReport(environment=environment_metadata(config))
    logger.info(
        f"Bench start: sizes={config.sizes} chunk_sizes={config.chunk_sizes} "
        f"ops={[op.value for op in config.operations]} reps={config.repetitions} "
        f"parallel={options.parallel} workers={options.workers}"
    )

    for n in config.sizes:
        data_rng = random.Random(f"{config.seed}:{n}")
        values = [data_rng.randrange(ELEMENT_DOMAIN) for _ in range(n)]
        structures = _build_structures(config, values, options)
        logger.info(f"Populated {len(structures)} structures with {n} elements")

        for operation in config.operations:
            op_rng = random.Random(f"{config.seed}:{n}:{operation.value}")
            # operands[0] is the warm-up run
            operands = [_draw_operand(operation, values, op_rng) for _ in range(config.repetitions + 1)]

            measured = []
            for label, chunk_size, structure in structures:
                outcome, timings = _time_cell(operation, structure, operands)
                measured.append((label, chunk_size, outcome, timings))

            baseline_outcome = measured[-1][2]
            baseline_median = statistics.median(measured[-1][3])

            for label, chunk_size, outcome, timings in measured:
                if outcome != baseline_outcome:
                    raise BenchMismatchError(
                        f"{label} (chunk size {chunk_size}) disagrees with {BASELINE_LABEL} "
                        f"on {operation.value} at n={n}"
                    )
                median = statistics.median(timings)
                row = BenchRow(
                    structure=label,
                    n=n,
                    chunk_size=chunk_size,
                    operation=operation.value,
                    median_ns=int(median),
                    min_ns=min(timings),
                    max_ns=max(timings),
                    speedup=1.0 if label == BASELINE_LABEL else baseline_median / max(median, 1),
                )
                report.rows.append(row)
                BenchEventLogger.log_cell(row)

    logger.info(f"Bench finished with {len(report.rows)} rows")
    return report


# ==================== Report Output ====================

def _cells(row: BenchRow) -> List[str]:
    return [
        row.structure,
        str(row.n),
        str(row.chunk_size),
        row.operation,
        str(row.median_ns),
        str(row.min_ns),
        str(row.max_ns),
        f"{row.speedup:.2f}",
    ]


def render_report(report: BenchReport, format: str = "csv") -> str:
    """
    Render a report as CSV (header + one line per row) or a markdown table

    Raises:
        ValueError: Empty report or unknown format
    """
    if not report.rows:
        raise ValueError("Cannot render an empty report")

    if format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in report.rows:
            writer.writerow(_cells(row))
        return buffer.getvalue()

    if format == "markdown":
        lines = [
            "| " + " | ".join(CSV_COLUMNS) + " |",
            "|" + "|".join("---" for _ in CSV_COLUMNS) + "|",
        ]
        lines.extend("| " + " | ".join(_cells(row)) + " |" for row in report.rows)
        if report.environment:
            meta = ", ".join(f"{k}={v}" for k, v in report.environment.items())
            lines.append("")
            lines.append(f"<!-- environment: {meta} -->")
        return "\n".join(lines) + "\n"

    raise ValueError(f"Unknown report format: {format}")


def check_output_path(path: Union[str, Path]) -> Path:
    """
    Fail early when a report could not be written to `path`

    Raises:
        ReportWriteError: Parent directory missing or not writable, or path is a directory
    """
    path = Path(path)
    parent = path.parent if str(path.parent) else Path(".")
    if path.is_dir():
        raise ReportWriteError(path, "path is a directory")
    if not parent.is_dir():
        raise ReportWriteError(path, f"directory {parent} does not exist")
    if not os.access(parent, os.W_OK):
        raise ReportWriteError(path, f"directory {parent} is not writable")
    return path


def emit_report(report: BenchReport, format: str, path: Union[str, Path]) -> Path:
    """
    Write a rendered report to a file

    Raises:
        ReportWriteError: The file could not be written
    """
    path = Path(path)
    text = render_report(report, format)
    try:
        path.write_text(text)
    except OSError as e:
        logger.error(f"Failed to write report to {path}: {e}")
        raise ReportWriteError(path, e) from e

    logger.info(f"Wrote {len(report.rows)} rows to {path} ({format})")
    return path


def parse_report_csv(source: Union[str, Path], text: Optional[str] = None) -> List[BenchRow]:
    """
    Read an emitted CSV report back into rows

    Args:
        source: CSV file path (used for error messages when `text` is given)
        text: CSV content; read from `source` when omitted

    Raises:
        ValueError: Header does not match CSV_COLUMNS
    """
    content = Path(source).read_text() if text is None else text
    reader = csv.DictReader(io.StringIO(content))
    if reader.fieldnames != CSV_COLUMNS:
        raise ValueError(f"Unexpected CSV header in {source}: {reader.fieldnames}")
    return [BenchRow(**record) for record in reader]
