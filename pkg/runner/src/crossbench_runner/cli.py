"""Command-line entry point::

    crossbench-run runs/set_<id> --backend local:7 --shots 4000 --out counts0.json

Exit code 0 on success, 2 on any runner or input error (diagnostic on
stderr), mirroring the generator CLI's conventions.
"""

from __future__ import annotations

import argparse
import sys

from .errors import RunnerError
from .runner import RunnerConfig, run_set


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="crossbench-run",
        description="Execute a benchmark circuit set on a backend and write counts.")
    parser.add_argument("benchmark", help="set directory (or its metadata.json)")
    parser.add_argument("--backend", default="local",
                        help="backend identifier: local[:seed] or qiskit:<name> "
                             "(default local)")
    parser.add_argument("--shots", type=int, default=None,
                        help="shots per circuit (default: the set config)")
    parser.add_argument("--out", required=True, help="counts JSON to write")
    parser.add_argument("--enable-optimization", action="store_true",
                        help="allow the backend to optimize (normally left off; "
                             "a changed gate tally is still a hard error)")
    parser.add_argument("--retries", type=int, default=3,
                        help="retries per circuit on transient backend errors "
                             "(default 3)")
    parser.add_argument("--retry-wait", type=float, default=1.0,
                        help="base wait between retries, seconds (default 1.0)")
    args = parser.parse_args(argv)

    try:
        config = RunnerConfig(
            benchmark_dir=args.benchmark,
            backend=args.backend,
            shots=args.shots,
            out_path=args.out,
            optimization_disabled=not args.enable_optimization,
            max_retries=args.retries,
            retry_wait_s=args.retry_wait,
        )
        doc = run_set(config)
    except (RunnerError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"executed {len(doc['results'])} circuits x {doc['shots']} shots "
          f"on {args.backend} -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
