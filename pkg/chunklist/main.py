"""
`bench` command-line entry point

Example:
    bench --sizes 10000,100000,1000000 --chunk-sizes sqrt,1000 \
        --ops add,contains-hit,contains-miss,remove,sort --reps 7 --seed 42 \
        --parallel on --format csv --out report.csv
"""
import argparse
import logging
import sys
from typing import List, Optional

from chunklist.core.config import settings
from chunklist.core.errors import BenchConfigError, BenchMismatchError, ReportWriteError
from chunklist.core.logger import setup_logging
from chunklist.core.monitoring import initialize_monitoring
from chunklist.modules.bench import (
    build_config,
    check_output_path,
    emit_report,
    render_report,
    run_bench,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO_ERROR = 1
EXIT_CONFIG_ERROR = 2
EXIT_RESULT_MISMATCH = 3


def _csv_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments"""
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Compare chunk lists against a flat array list",
    )
    parser.add_argument("--sizes", type=_csv_list, required=True,
                        help="Comma-separated element counts, e.g. 10000,100000")
    parser.add_argument("--chunk-sizes", type=_csv_list,
                        default=[str(settings.bench_chunk_size), "sqrt"],
                        help="Comma-separated chunk sizes; 'sqrt' sizes by sqrt(N)")
    parser.add_argument("--ops", type=_csv_list, required=True,
                        help="add,contains-hit,contains-miss,remove,removeAll,sort,get")
    parser.add_argument("--reps", type=int, default=settings.bench_repetitions,
                        help="Timed repetitions per cell")
    parser.add_argument("--seed", type=int, default=settings.bench_seed)
    parser.add_argument("--parallel", choices=["on", "off"],
                        default="on" if settings.parallel_enabled else "off")
    parser.add_argument("--workers", type=int, default=None,
                        help="Worker threads (defaults to CHUNKLIST_WORKER_COUNT / CPU count)")
    parser.add_argument("--format", choices=["csv", "markdown"], default="csv")
    parser.add_argument("--out", default=None, help="Output file (stdout when omitted)")
    parser.add_argument("--log-level", default=None)
    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    """Run the benchmark and emit the report"""
    args = parse_args(argv)
    # stdout may carry the report
    setup_logging(args.log_level, stream=sys.stderr)

    try:
        config = build_config(
            sizes=args.sizes,
            chunk_sizes=args.chunk_sizes,
            operations=args.ops,
            repetitions=args.reps,
            seed=args.seed,
            parallel=args.parallel == "on",
            workers=args.workers,
            output_path=args.out,
            format=args.format,
        )
    except BenchConfigError as e:
        print(f"bench: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    if config.output_path is not None:
        try:
            check_output_path(config.output_path)
        except ReportWriteError as e:
            print(f"bench: {e}", file=sys.stderr)
            return EXIT_IO_ERROR

    initialize_monitoring()

    try:
        report = run_bench(config)
    except BenchMismatchError as e:
        logger.error(f"Result mismatch: {e}")
        print(f"bench: {e}", file=sys.stderr)
        return EXIT_RESULT_MISMATCH

    if config.output_path is None:
        sys.stdout.write(render_report(report, config.format))
        return EXIT_OK

    try:
        emit_report(report, config.format, config.output_path)
    except ReportWriteError as e:
        print(f"bench: {e}", file=sys.stderr)
        return EXIT_IO_ERROR

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
