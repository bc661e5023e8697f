"""Command-line entry points: generate, simulate, report.

Typical session::

    crossbench generate --topology device.json --gates gates.json --out runs/
    crossbench simulate runs/set_<id> --noise-model noise.json --out counts0.json
    crossbench report counts*.json --metadata runs/set_<id> --out report/

The seed is taken from --seed, falling back to the CROSSBENCH_SEED
environment variable.  Failures exit nonzero with a diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analysis import (build_report, control_baseline, load_counts, table_from_counts,
                       write_report)
from .circuits import BenchmarkConfig, build_benchmark_set
from .device import load_gate_set, load_topology
from .emit import load_benchmark_set, load_metadata, write_benchmark_dir
from .errors import CrossBenchError
from .gates import parse_prep_states
from .noise import load_noise_model, simulate_set

SEED_ENV_VAR = "CROSSBENCH_SEED"


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CrossBenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossbench",
        description="Generate, simulate, and analyze crosstalk benchmark circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build a benchmark set and write circuit files")
    gen.add_argument("--topology", required=True, help="device topology JSON")
    gen.add_argument("--gates", required=True, help="gate set JSON")
    gen.add_argument("--out", required=True, help="output directory (set dir created inside)")
    gen.add_argument("--delta", type=float, default=0.1,
                     help="duty-cycle factor for the driver depth (default 0.1)")
    gen.add_argument("--seed", type=int, default=None,
                     help=f"master seed (default: ${SEED_ENV_VAR} or 0)")
    gen.add_argument("--shots", type=int, default=10000,
                     help="shots recorded in the set config (default 10000)")
    gen.add_argument("--states", default=None,
                     help="comma-separated preparation states (default: all six)")
    gen.add_argument("--driver-threshold", type=int, default=None,
                     help="driver group target for pass 1 (needs --spectator-threshold)")
    gen.add_argument("--spectator-threshold", type=int, default=None,
                     help="spectator group target for pass 2 (needs --driver-threshold)")
    gen.add_argument("--skip-fill-passes", action="store_true",
                     help="do not run the unbounded fill passes")
    gen.set_defaults(func=cmd_generate)

    sim = sub.add_parser("simulate", help="sample counts for a benchmark set under a noise model")
    sim.add_argument("benchmark", help="set directory (or its metadata.json)")
    sim.add_argument("--noise-model", required=True, help="noise model JSON")
    sim.add_argument("--out", required=True, help="counts JSON to write")
    sim.add_argument("--shots", type=int, default=None,
                     help="shots per circuit (default: the set config)")
    sim.add_argument("--seed", type=int, default=None,
                     help=f"sampling seed (default: ${SEED_ENV_VAR} or the model's seed)")
    sim.set_defaults(func=cmd_simulate)

    rep = sub.add_parser("report", help="aggregate counts files into tables and a report")
    rep.add_argument("counts", nargs="+", help="counts JSON files, one per run")
    rep.add_argument("--metadata", required=True, help="set directory or metadata.json")
    rep.add_argument("--baseline", default="id_driver",
                     choices=["id_driver", "min_driver", "control"],
                     help="crosstalk baseline mode (default id_driver)")
    rep.add_argument("--control-counts", default=None,
                     help="driver-free control counts JSON (required for --baseline control)")
    rep.add_argument("--out", required=True, help="report output directory")
    rep.set_defaults(func=cmd_report)
    return parser


def _resolve_seed(flag_value: int | None) -> int | None:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{SEED_ENV_VAR}={env!r} is not an integer") from None
    return None


def cmd_generate(args) -> int:
    topology = load_topology(args.topology)
    gate_set = load_gate_set(args.gates)
    if (args.driver_threshold is None) != (args.spectator_threshold is None):
        raise ValueError("--driver-threshold and --spectator-threshold must be given together")
    thresholds = None
    if args.driver_threshold is not None:
        thresholds = (args.driver_threshold, args.spectator_threshold)
    states = parse_prep_states(args.states) if args.states else BenchmarkConfig().prep_states

    config = BenchmarkConfig(
        delta=args.delta,
        shots=args.shots,
        prep_states=states,
        seed=_resolve_seed(args.seed) or 0,
        thresholds=thresholds,
        fill_passes=not args.skip_fill_passes,
    )
    bench = build_benchmark_set(topology, gate_set, config)
    set_dir = write_benchmark_dir(bench, args.out)

    print(f"driver depth: {bench.driver_depth}")
    print(f"wrote {len(bench.circuits)} circuits to {set_dir}")
    n = topology.num_qubits
    for c in bench.circuits:
        drivers = c.assignment.driver_qubits
        spectators = c.assignment.spectator_qubits
        used = len(drivers) + len(spectators)
        print(f"  {c.key}: {len(c.assignment.driver_groups)} driver groups "
              f"({len(drivers)} qubits), {len(c.assignment.spectator_groups)} spectator groups "
              f"({len(spectators)} qubits), utilization {used}/{n}")
    return 0


def cmd_simulate(args) -> int:
    bench = load_benchmark_set(args.benchmark)
    model = load_noise_model(args.noise_model)
    seed = _resolve_seed(args.seed)
    counts = simulate_set(bench, model, shots=args.shots, seed=seed)
    out = Path(args.out)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(counts, indent=2) + "\n")
    print(f"sampled {len(counts['results'])} circuits x {counts['shots']} shots -> {out}")
    return 0


def cmd_report(args) -> int:
    metadata = load_metadata(args.metadata)
    tables = []
    for path in args.counts:
        doc = load_counts(path)
        if doc["set_id"] != metadata["set_id"]:
            raise CrossBenchError(
                f"counts file {path} is for set {doc['set_id']!r}, "
                f"metadata describes {metadata['set_id']!r}")
        tables.append(table_from_counts(doc, metadata))

    mode = {"control": "control_counts"}.get(args.baseline, args.baseline)
    control = None
    if mode == "control_counts":
        if args.control_counts is None:
            raise CrossBenchError("--baseline control requires --control-counts")
        control = control_baseline(load_counts(args.control_counts), metadata)

    report = build_report(tables, baseline_mode=mode, control=control,
                          set_id=metadata["set_id"])
    written = write_report(report, args.out)
    print(f"aggregated {len(tables)} run(s); wrote {len(written)} files to {args.out}")
    if not report["se_available"]:
        print("note: single run -- standard errors and t-tests unavailable")
    return 0


if __name__ == "__main__":
    sys.exit(main())
