#!/usr/bin/env python3
"""Time the full pipeline at increasing log sizes.

Generates logs with every cause injected, round-trips them through CSV,
and measures load, discovery, decomposition and report building together.
"""
import argparse
import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from wtminer.ingest import load_log
from wtminer.pipeline import run_pipeline
from wtminer.report import build_report
from wtminer.synth import InjectionSpec, generate, write_files


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[50, 200, 900],
                        help="case counts to try (default: 50 200 900)")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    print(f"{'cases':>6} {'instances':>10} {'seconds':>8} {'inst/s':>8}")
    with tempfile.TemporaryDirectory() as tmp:
        for n_cases in args.sizes:
            spec = InjectionSpec.from_bits("11111", n_cases=n_cases,
                                           seed=args.seed)
            csv_path = Path(tmp) / f"scale_{n_cases}.csv"
            write_files(generate(spec), csv_path)
            started = time.monotonic()
            loaded = load_log(csv_path)
            result = run_pipeline(loaded.log)
            build_report(result, ingest_stats=loaded.stats)
            elapsed = time.monotonic() - started
            n_instances = len(loaded.log.instances)
            rate = n_instances / elapsed if elapsed else float("inf")
            print(f"{n_cases:>6} {n_instances:>10} {elapsed:>8.2f} {rate:>8.0f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
