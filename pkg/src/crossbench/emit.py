"""Rendering benchmark sets to circuit files and the set metadata document.

Output layout for one set::

    <out>/<set_id>/<spectator>_<driver>.qasm   one file per gate pair
    <out>/<set_id>/metadata.json               everything needed downstream

The metadata document embeds the topology, the gate set, and per-circuit
placement records, so simulation, hardware runners, and reporting only ever
need the set directory.  All output is byte-deterministic for a given seed:
no timestamps, fixed ordering, fixed float formatting.

Circuit files are OpenQASM 3.0 restricted to a deliberately small grammar:
register declarations, stdgates calls, `delay[<int>ns]`, whole-register
barriers, and `c[i] = measure q[j]`.  Classical bit i always measures
`spectator_qubits[i]` from the metadata record.
"""

from __future__ import annotations

import json
from pathlib import Path

from .circuits import BenchmarkCircuit, BenchmarkConfig, BenchmarkSet
from .device import DeviceTopology, load_gate_set, load_topology
from .errors import EmissionError, SchemaError
from .gates import PREP_EMIT_NAMES, PrepState, prep_sequence, unprep_sequence
from .placement import GateGroup, Role, RoleAssignment

FORMAT_VERSION = 1


def render_qasm(circuit: BenchmarkCircuit, set_id: str) -> str:
    """Render one benchmark circuit as OpenQASM 3.0 text."""
    for gate in (circuit.spectator_gate, circuit.driver_gate):
        if not gate.emit_name:
            raise EmissionError(f"gate {gate.name} has no emit_name; cannot render circuit")

    num_qubits = len(circuit.assignment.roles)
    spectators = circuit.spectator_qubits
    delay_ns = round(circuit.delay_ns)

    lines = [
        "OPENQASM 3.0;",
        'include "stdgates.inc";',
        "",
        f"// crosstalk benchmark {circuit.key} (set {set_id})",
        f"// driver depth {circuit.driver_depth}, spectator depth {circuit.spectator_depth}, "
        f"delay {delay_ns} ns",
        f"qubit[{num_qubits}] q;",
        f"bit[{len(spectators)}] c;",
        "",
    ]

    for i, q in enumerate(spectators):
        for name in prep_sequence(circuit.prep_states[i]):
            lines.append(f"{PREP_EMIT_NAMES[name]} q[{q}];")
    lines.append("barrier q;")

    for group in circuit.assignment.spectator_groups:
        call = _gate_call(circuit.spectator_gate.emit_name, group)
        lines.extend([call] * circuit.spectator_depth)
    if delay_ns > 0:
        for q in spectators:
            lines.append(f"delay[{delay_ns}ns] q[{q}];")
    for group in circuit.assignment.driver_groups:
        call = _gate_call(circuit.driver_gate.emit_name, group)
        lines.extend([call] * circuit.driver_depth)

    lines.append("barrier q;")
    for i, q in enumerate(spectators):
        for name in unprep_sequence(circuit.prep_states[i]):
            lines.append(f"{PREP_EMIT_NAMES[name]} q[{q}];")
    for i, q in enumerate(spectators):
        lines.append(f"c[{i}] = measure q[{q}];")
    return "\n".join(lines) + "\n"


def _gate_call(emit_name: str, group: GateGroup) -> str:
    args = ", ".join(f"q[{q}]" for q in group.qubits)
    return f"{emit_name} {args};"


def set_metadata(bench: BenchmarkSet) -> dict:
    """Self-contained JSON document describing one benchmark set."""
    return {
        "format_version": FORMAT_VERSION,
        "set_id": bench.set_id,
        "driver_depth": bench.driver_depth,
        "topology": bench.topology.to_doc(),
        "gate_set": bench.gate_set.to_doc(),
        "config": {
            "delta": bench.config.delta,
            "shots": bench.config.shots,
            "prep_states": [s.value for s in bench.config.prep_states],
            "seed": bench.config.seed,
            "thresholds": list(bench.config.thresholds) if bench.config.thresholds else None,
            "fill_passes": bench.config.fill_passes,
        },
        "circuits": {c.key: _circuit_record(c) for c in bench.circuits},
    }


def _circuit_record(circuit: BenchmarkCircuit) -> dict:
    a = circuit.assignment
    return {
        "spectator_gate": circuit.spectator_gate.name,
        "driver_gate": circuit.driver_gate.name,
        "driver_depth": circuit.driver_depth,
        "spectator_depth": circuit.spectator_depth,
        "delay_ns": circuit.delay_ns,
        "depth_overflow": circuit.depth_overflow,
        "seed": circuit.seed,
        "spectator_qubits": list(a.spectator_qubits),
        "spectator_count": len(a.spectator_qubits),
        "prep_states": [s.value for s in circuit.prep_states],
        "driver_groups": [_group_doc(g) for g in a.driver_groups],
        "spectator_groups": [_group_doc(g) for g in a.spectator_groups],
        "thresholds": list(a.thresholds),
        "fill_passes": a.fill_passes,
    }


def _group_doc(group: GateGroup) -> dict:
    return {"qubits": list(group.qubits), "oriented": group.oriented}


def write_benchmark_dir(bench: BenchmarkSet, out_dir) -> Path:
    """Write all circuit files plus metadata.json; returns the set directory."""
    set_dir = Path(out_dir) / bench.set_id
    set_dir.mkdir(parents=True, exist_ok=True)
    for circuit in bench.circuits:
        (set_dir / f"{circuit.key}.qasm").write_text(render_qasm(circuit, bench.set_id))
    (set_dir / "metadata.json").write_text(
        json.dumps(set_metadata(bench), indent=2) + "\n")
    return set_dir


def load_metadata(source) -> dict:
    """Read a metadata document from a set directory, file path, or dict."""
    if isinstance(source, dict):
        doc = source
    else:
        path = Path(source)
        if path.is_dir():
            path = path / "metadata.json"
        try:
            doc = json.loads(path.read_text())
        except OSError as exc:
            raise SchemaError(f"cannot read metadata {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"metadata {path} is not valid JSON: {exc}") from exc
    missing = {"set_id", "topology", "gate_set", "circuits"} - doc.keys()
    if missing:
        raise SchemaError(f"metadata document missing fields: {sorted(missing)}")
    return doc


def load_benchmark_set(source) -> BenchmarkSet:
    """Reconstruct a BenchmarkSet from a set directory or metadata document.

    The result is structurally identical to what build_benchmark_set
    produced, so simulation and re-emission work from the files alone.
    """
    doc = load_metadata(source)
    topology = load_topology(doc["topology"])
    gate_set = load_gate_set(doc["gate_set"])
    cfg = doc.get("config", {})
    prep_names = cfg.get("prep_states") or [s.value for s in PrepState]
    config = BenchmarkConfig(
        delta=cfg.get("delta", 0.1),
        shots=cfg.get("shots", 10000),
        prep_states=tuple(PrepState(s) for s in prep_names),
        seed=cfg.get("seed", 0),
        thresholds=tuple(cfg["thresholds"]) if cfg.get("thresholds") else None,
        fill_passes=cfg.get("fill_passes", True),
    )

    circuits = []
    for key, record in doc["circuits"].items():
        circuits.append(_circuit_from_record(key, record, topology, gate_set))
    return BenchmarkSet(
        set_id=doc["set_id"],
        topology=topology,
        gate_set=gate_set,
        config=config,
        driver_depth=doc["driver_depth"],
        circuits=tuple(circuits),
    )


def _circuit_from_record(key: str, record: dict, topology: DeviceTopology,
                         gate_set) -> BenchmarkCircuit:
    try:
        s_gate = gate_set.gate(record["spectator_gate"])
        d_gate = gate_set.gate(record["driver_gate"])
    except KeyError as exc:
        raise SchemaError(f"circuit {key}: {exc}") from exc

    driver_groups = tuple(
        GateGroup(tuple(g["qubits"]), bool(g.get("oriented", False)))
        for g in record["driver_groups"])
    spectator_groups = tuple(
        GateGroup(tuple(g["qubits"]), bool(g.get("oriented", False)))
        for g in record["spectator_groups"])

    roles = [Role.UNASSIGNED] * topology.num_qubits
    for g in driver_groups:
        for q in g.qubits:
            roles[q] = Role.DRIVER
    for g in spectator_groups:
        for q in g.qubits:
            roles[q] = Role.SPECTATOR

    assignment = RoleAssignment(
        driver_groups=driver_groups,
        spectator_groups=spectator_groups,
        roles=tuple(roles),
        seed=record["seed"],
        thresholds=tuple(record["thresholds"]),
        fill_passes=record["fill_passes"],
    )
    return BenchmarkCircuit(
        spectator_gate=s_gate,
        driver_gate=d_gate,
        driver_depth=record["driver_depth"],
        spectator_depth=record["spectator_depth"],
        delay_ns=record["delay_ns"],
        depth_overflow=record["depth_overflow"],
        assignment=assignment,
        prep_states=tuple(PrepState(s) for s in record["prep_states"]),
        seed=record["seed"],
    )
