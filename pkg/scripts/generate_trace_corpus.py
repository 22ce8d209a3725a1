"""
Generate a corpus of seeded operation traces and replay each one differentially

Writes one trace file per seed (trace_<seed>.txt) so that a failing seed can be
reproduced with OpTrace.load(). Every trace is replayed against a chunk list
and the flat oracle; violations are logged and counted.
"""
import argparse
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from chunklist.core.logger import setup_logging
from chunklist.data.models import OpTrace, ParallelOptions
from chunklist.modules.chunk_list import ChunkList
from chunklist.modules.oracle import DEFAULT_DOMAIN, differential_replay, generate_trace

logger = setup_logging()


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="traces", help="Directory for trace files")
    parser.add_argument("--seeds", type=int, default=200, help="Seeds 0..N-1")
    parser.add_argument("--length", type=int, default=10_000, help="Ops per trace")
    parser.add_argument("--domain", type=int, default=DEFAULT_DOMAIN, help="Element values 0..domain-1")
    parser.add_argument("--chunk-size", type=int, default=16, help="Initial chunk size")
    parser.add_argument("--probes", type=int, default=100, help="contains() probes per trace")
    parser.add_argument("--sequential", action="store_true", help="Disable internal parallelism")
    return parser.parse_args()


def main():
    """Generate, save and replay the corpus"""
    args = parse_args()

    print("\n" + "=" * 60)
    print("TRACE CORPUS")
    print("=" * 60 + "\n")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    options = ParallelOptions.sequential() if args.sequential else ParallelOptions.from_settings()
    probes = range(-1, min(args.probes, args.domain + 1) - 1)
    failed = 0

    for seed in range(args.seeds):
        trace = generate_trace(
            seed, args.length, domain=args.domain, initial_chunk_size=args.chunk_size
        )
        path = trace.save(out_dir / f"trace_{seed}.txt")

        # Round-trip through the file so the replayed trace is exactly what was stored
        result = differential_replay(
            OpTrace.load(path),
            ChunkList(args.chunk_size, options),
            probes=probes,
        )

        if result.ok:
            logger.debug(f"seed {seed}: ok ({len(result.chunk_snapshot.items)} elements)")
            continue

        failed += 1
        logger.error(f"seed {seed}: {len(result.violations)} violation(s), trace at {path}")
        for violation in result.violations[:10]:
            logger.error(f"  {violation}")

    print(f"\nReplayed {args.seeds} traces of {args.length} ops: {failed} failed")
    print(f"Traces written to {out_dir.resolve()}\n")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
