"""Executing a benchmark set on a backend and writing analysis-ready counts.

The whole pipeline is one call::

    from crossbench_runner import RunnerConfig, run_set

    doc = run_set(RunnerConfig(benchmark_dir="runs/set_ab12cd34",
                               backend="local:7", shots=4000,
                               out_path="counts0.json"))

Circuits are submitted sequentially in metadata order, with bounded retry
on transient backend failures.  After each job the executed operation tally
is compared against the parsed source; any difference is a hard
:class:`TranspilationError`, because the benchmark is only meaningful if
the idle and identity-equivalent structure reached the device untouched.

Bitstring convention of the output document: position ``i`` of every counts
key is classical bit ``i``, which measures ``spectator_qubits[i]`` from the
set metadata.  Backends report whatever order is native to them;
:func:`remap_counts` converts, so the written file is schema-identical to
the noise simulator's output and the analyzer cannot tell the source.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

from .backends import ExecutionResult, resolve_backend
from .errors import (BackendUnavailableError, BenchmarkLayoutError, RunnerError,
                     TransientBackendError, TranspilationError)
from .qasm import parse_qasm


@dataclass(frozen=True)
class RunnerConfig:
    """Everything run_set needs; optimization stays disabled unless forced.

    The default matters: rewriting away "useless" identity gates or idle
    time is exactly what these circuits must survive, so optimization is
    off unless a caller deliberately flips it (and then the gate-tally
    guard still decides whether the result is usable).
    """

    benchmark_dir: str | Path
    backend: str = "local"
    shots: int | None = None
    out_path: str | Path | None = None
    optimization_disabled: bool = True
    max_retries: int = 3
    retry_wait_s: float = 1.0

    def __post_init__(self):
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"shots must be positive, got {self.shots}")
        if self.max_retries < 0:
            raise ValueError(f"max_retries must be >= 0, got {self.max_retries}")
        if self.retry_wait_s < 0:
            raise ValueError(f"retry_wait_s must be >= 0, got {self.retry_wait_s}")


def run_set(config: RunnerConfig, backend=None) -> dict:
    """Execute every circuit of a set; returns (and optionally writes) counts.

    ``backend`` overrides the identifier lookup with a ready instance --
    tests and embedding applications inject doubles this way.
    """
    set_dir, metadata = _load_set(config.benchmark_dir)
    shots = config.shots
    if shots is None:
        shots = int(metadata.get("config", {}).get("shots", 10000))
    if backend is None:
        backend = resolve_backend(config.backend)
    optimize = not config.optimization_disabled

    results = {}
    for key, record in metadata["circuits"].items():
        spectators = record.get("spectator_qubits")
        if spectators is None:
            raise BenchmarkLayoutError(f"circuit {key}: metadata record has no "
                                       "spectator_qubits")
        path = set_dir / f"{key}.qasm"
        try:
            text = path.read_text()
        except OSError as exc:
            raise BenchmarkLayoutError(f"cannot read circuit file {path}: {exc}") from exc
        parsed = parse_qasm(text, source=path.name)
        if parsed.measure_map != tuple(spectators):
            raise BenchmarkLayoutError(
                f"{path.name}: measurement map {list(parsed.measure_map)} does not "
                f"match the metadata spectator order {list(spectators)}")

        expected = parsed.gate_counts()
        result = _execute_with_retry(backend, parsed, shots, optimize, config)
        if result.executed_ops != expected:
            raise TranspilationError(_describe_drift(key, expected, result.executed_ops))

        counts = remap_counts(result.counts, backend.bit_order, len(spectators))
        total = sum(counts.values())
        if total != shots:
            raise RunnerError(f"backend returned {total} shots for {key}, "
                              f"expected {shots}")
        results[key] = counts

    doc = {"set_id": metadata["set_id"], "shots": shots, "results": results}
    if config.out_path is not None:
        out = Path(config.out_path)
        if out.parent != Path(""):
            out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(doc, indent=2) + "\n")
    return doc


def remap_counts(counts: dict, bit_order: str, width: int) -> dict:
    """Convert native-order counts to metadata order (clbit 0 leftmost)."""
    if bit_order not in ("lsb0", "msb0"):
        raise RunnerError(f"unknown backend bit order {bit_order!r}")
    out: dict[str, int] = {}
    for bits, n in counts.items():
        if len(bits) != width or set(bits) - {"0", "1"}:
            raise RunnerError(f"backend bitstring {bits!r} is not {width} binary digits")
        key = bits[::-1] if bit_order == "lsb0" else bits
        out[key] = out.get(key, 0) + int(n)
    return dict(sorted(out.items()))


def _load_set(benchmark_dir) -> tuple[Path, dict]:
    set_dir = Path(benchmark_dir)
    meta_path = set_dir
    if set_dir.is_dir():
        meta_path = set_dir / "metadata.json"
    else:
        set_dir = meta_path.parent
    try:
        metadata = json.loads(meta_path.read_text())
    except OSError as exc:
        raise BenchmarkLayoutError(f"cannot read metadata {meta_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BenchmarkLayoutError(f"metadata {meta_path} is not valid JSON: {exc}") from exc
    missing = {"set_id", "circuits"} - metadata.keys()
    if missing:
        raise BenchmarkLayoutError(f"metadata document missing fields: {sorted(missing)}")
    return set_dir, metadata


def _execute_with_retry(backend, parsed, shots: int, optimize: bool,
                        config: RunnerConfig) -> ExecutionResult:
    last = None
    for attempt in range(config.max_retries + 1):
        if attempt and config.retry_wait_s > 0:
            time.sleep(config.retry_wait_s * 2 ** (attempt - 1))
        try:
            return backend.execute(parsed, shots, optimize=optimize)
        except TransientBackendError as exc:
            last = exc
    raise BackendUnavailableError(
        f"{getattr(backend, 'name', backend)}: still failing after "
        f"{config.max_retries + 1} attempt(s): {last}") from last


def _describe_drift(key: str, expected: dict, executed: dict) -> str:
    names = sorted(set(expected) | set(executed))
    drift = ", ".join(f"{n}: {expected.get(n, 0)} -> {executed.get(n, 0)}"
                      for n in names if expected.get(n, 0) != executed.get(n, 0))
    return (f"circuit {key}: executed gate counts differ from source ({drift}); "
            "transpilation or optimization rewrote the circuit")
