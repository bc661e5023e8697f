"""Closed-form stochastic noise model and seeded counts sampling.

The model treats each spectator qubit independently: a measured '1' arises
from state-preparation/measurement error, from accumulated spectator-gate
error, or from crosstalk injected by each adjacent driver qubit on every
driver-gate application.  The per-qubit flip probability is

    p(q) = 1 - (1 - spam) * (1 - gate_error[g_s])**d_s
                          * (1 - crosstalk[g_D])**(d_D * n_D(q))

with n_D(q) the number of driver qubits adjacent to q.  Sampling draws
independent Bernoulli(p(q)) bits per shot.  Each circuit samples from its own
PRNG stream derived from (seed, circuit key, block index), so results do not
depend on evaluation order and would survive parallel execution.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .circuits import BenchmarkCircuit, BenchmarkSet
from .device import DeviceTopology
from .errors import SchemaError
from .rng import derive_seed, fnv1a64


@dataclass(frozen=True)
class NoiseModel:
    """Per-gate stochastic error rates plus a sampling seed."""

    spam_error: float
    gate_error: Mapping[str, float] = field(default_factory=dict)
    crosstalk: Mapping[str, float] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        for label, value in [("spam_error", self.spam_error),
                             *[(f"gate_error[{k}]", v) for k, v in self.gate_error.items()],
                             *[(f"crosstalk[{k}]", v) for k, v in self.crosstalk.items()]]:
            if not (0.0 <= value < 1.0):
                raise SchemaError(f"noise model {label} must be in [0, 1), got {value}")


def load_noise_model(source) -> NoiseModel:
    """Read a noise model from a JSON file path or parsed dict."""
    if isinstance(source, Mapping):
        doc = source
    else:
        path = Path(source)
        try:
            doc = json.loads(path.read_text())
        except OSError as exc:
            raise SchemaError(f"cannot read noise model {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"noise model {path} is not valid JSON: {exc}") from exc
    unknown = doc.keys() - {"spam_error", "gate_error", "crosstalk", "seed"}
    if unknown:
        raise SchemaError(f"noise model has unknown fields: {sorted(unknown)}")
    return NoiseModel(
        spam_error=doc.get("spam_error", 0.0),
        gate_error=dict(doc.get("gate_error", {})),
        crosstalk=dict(doc.get("crosstalk", {})),
        seed=doc.get("seed", 0),
    )


def expected_error_rate(circuit: BenchmarkCircuit, topology: DeviceTopology,
                        model: NoiseModel) -> tuple[dict[int, float], float]:
    """Closed-form per-spectator-qubit flip probabilities and their mean."""
    s_name = circuit.spectator_gate.name
    d_name = circuit.driver_gate.name
    try:
        gate_err = model.gate_error[s_name]
    except KeyError:
        raise SchemaError(f"noise model has no gate_error entry for gate {s_name!r}") from None
    try:
        kappa = model.crosstalk[d_name]
    except KeyError:
        raise SchemaError(f"noise model has no crosstalk entry for gate {d_name!r}") from None

    driver_qubits = set(circuit.assignment.driver_qubits)
    survival_spec = (1.0 - gate_err) ** circuit.spectator_depth
    per_qubit: dict[int, float] = {}
    for q in circuit.spectator_qubits:
        n_d = sum(1 for v in topology.adjacent(q) if v in driver_qubits)
        survival = (1.0 - model.spam_error) * survival_spec \
            * (1.0 - kappa) ** (circuit.driver_depth * n_d)
        per_qubit[q] = 1.0 - survival
    mean = math.fsum(per_qubit.values()) / len(per_qubit)
    return per_qubit, mean


def sample_counts(circuit: BenchmarkCircuit, topology: DeviceTopology, model: NoiseModel,
                  shots: int, seed: int | None = None) -> dict[str, int]:
    """Draw measurement counts for one circuit.

    Bitstring position i corresponds to spectator_qubits[i] (leftmost is
    index 0).  `seed` overrides model.seed, e.g. to emulate repeated runs.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    per_qubit, _ = expected_error_rate(circuit, topology, model)
    probs = np.array([per_qubit[q] for q in circuit.spectator_qubits])

    base = model.seed if seed is None else seed
    stream = derive_seed(base, fnv1a64(circuit.key), 0)  # single shot block
    rng = np.random.default_rng(stream)
    flips = rng.random((shots, len(probs))) < probs

    width = len(probs)
    if width <= 63:
        # Pack each shot into one integer; a 1-D unique is much faster than a
        # row-wise one and yields the same lexicographically sorted keys.
        weights = 1 << np.arange(width - 1, -1, -1, dtype=np.int64)
        codes = flips @ weights
        values, tallies = np.unique(codes, return_counts=True)
        return {format(int(v), f"0{width}b"): int(n) for v, n in zip(values, tallies)}
    rows, tallies = np.unique(flips, axis=0, return_counts=True)
    return {
        "".join("1" if bit else "0" for bit in row): int(n)
        for row, n in zip(rows, tallies)
    }


def simulate_set(bench: BenchmarkSet, model: NoiseModel, shots: int | None = None,
                 seed: int | None = None) -> dict:
    """Sample every circuit of a set; returns an analysis-ready counts document."""
    shots = bench.config.shots if shots is None else shots
    results = {
        circuit.key: sample_counts(circuit, bench.topology, model, shots, seed=seed)
        for circuit in bench.circuits
    }
    return {"set_id": bench.set_id, "shots": shots, "results": results}
