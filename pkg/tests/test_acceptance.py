"""Acceptance checks for the full benchmark pipeline.

One test per criterion; each prints a single ``[PASS]`` line with the
measured quantities when it succeeds.  Tolerances are pinned in the
assertions themselves.
"""

import json
import random
import time

import numpy as np

from crossbench.analysis import build_report, table_from_counts, write_report
from crossbench.circuits import (
    ALL_PREP_STATES,
    BenchmarkConfig,
    build_benchmark_set,
    identity_fidelity,
    spectator_depth,
)
from crossbench.cli import main
from crossbench.device import load_gate_set, load_topology
from crossbench.emit import set_metadata
from crossbench.gates import prep_matrix, unprep_matrix
from crossbench.noise import NoiseModel, expected_error_rate, load_noise_model, simulate_set
from crossbench.placement import assign_roles, validate_assignment
from crossbench.rng import derive_seed

from conftest import DATA_DIR, make_cz, make_x, random_connected_topology

GATE_NAMES = ("CZ", "ID", "SX", "X")

# Reference spectator-row x driver-column error rates used by criterion 6.
REFERENCE_VALUES = {
    "CZ": {"CZ": 0.365, "ID": 0.324, "SX": 0.317, "X": 0.334},
    "ID": {"CZ": 0.145, "ID": 0.135, "SX": 0.161, "X": 0.151},
    "SX": {"CZ": 0.182, "ID": 0.200, "SX": 0.207, "X": 0.212},
    "X": {"CZ": 0.261, "ID": 0.244, "SX": 0.244, "X": 0.236},
}


def _bundled():
    return (load_topology(DATA_DIR / "heavyhex20.json"),
            load_gate_set(DATA_DIR / "gates_default.json"))


def test_criterion_1_placement_valid_on_random_devices():
    """100 seeded random connected devices (10-156 qubits, directed and
    undirected) x all four spectator/driver arity combinations: every
    assignment passes validation, all inside a 10 s budget."""
    gates = {1: make_x(), 2: make_cz()}
    rng = random.Random(20250825)
    start = time.monotonic()
    checked = 0
    for i in range(100):
        n = rng.randrange(10, 157)
        directed = bool(rng.getrandbits(1))
        topo = random_connected_topology(rng, n, directed)
        for s_arity in (1, 2):
            for d_arity in (1, 2):
                assignment = assign_roles(topo, gates[s_arity], gates[d_arity], seed=i)
                problems = validate_assignment(topo, assignment)
                assert problems == [], (
                    f"{n} qubits, directed={directed}, arities "
                    f"s={s_arity}/d={d_arity}, seed={i}: {problems}")
                checked += 1
    elapsed = time.monotonic() - start
    assert checked == 400
    assert elapsed < 10.0, f"placement sweep took {elapsed:.2f}s, budget 10s"
    print(f"[PASS] criterion 1: 400/400 random-device assignments valid in {elapsed:.2f}s")


def test_criterion_2_depths_and_wall_time_exact():
    """Error budget 0.001 at duty cycle 0.1 gives driver depth 100, spectator
    depth 100 for every gate, and every circuit pads its spectator lines to
    exactly the driver wall time (equality, no tolerance)."""
    topo, gate_set = _bundled()
    bench = build_benchmark_set(topo, gate_set, BenchmarkConfig(seed=1))
    assert bench.driver_depth == 100
    wall = gate_set.longest().duration_ns * 100  # 68 ns CZ -> 6800 ns
    for circuit in bench.circuits:
        assert circuit.spectator_depth == 100, circuit.key
        total = circuit.spectator_gate.duration_ns * circuit.spectator_depth + circuit.delay_ns
        assert total == wall, f"{circuit.key}: {total} != {wall}"
        assert not circuit.depth_overflow
    print("[PASS] criterion 2: driver depth 100, all spectator depths 100, "
          "16/16 circuits pad exactly to 6800 ns")


def test_criterion_3_identity_property():
    """Every preparation state survives every gate's spectator sequence: the
    matrix product unprep . gate^depth . prep returns |0..0> with fidelity
    >= 1 - 1e-9 (single-qubit gates over 6 states, two-qubit gates over all
    36 state pairs), and the same holds for every generated circuit."""
    topo, gate_set = _bundled()
    floor = 1.0 - 1e-9
    zero = np.zeros(2, dtype=complex)
    zero[0] = 1.0
    checked = 0
    for gate in gate_set.gates:
        depth = spectator_depth(gate.order, 100)
        body = np.linalg.matrix_power(gate.unitary, depth)
        if gate.arity == 1:
            combos = [(s,) for s in ALL_PREP_STATES]
        else:
            combos = [(a, b) for a in ALL_PREP_STATES for b in ALL_PREP_STATES]
        for states in combos:
            prep = np.eye(1, dtype=complex)
            unprep = np.eye(1, dtype=complex)
            for s in states:
                prep = np.kron(prep, prep_matrix(s))
                unprep = np.kron(unprep, unprep_matrix(s))
            amp = (unprep @ body @ prep)[0, 0]
            fidelity = abs(amp) ** 2
            assert fidelity >= floor, f"{gate.name} x {states}: {fidelity}"
            checked += 1

    bench = build_benchmark_set(topo, gate_set, BenchmarkConfig(seed=2))
    for circuit in bench.circuits:
        assert identity_fidelity(circuit) >= floor, circuit.key
    assert checked == 6 * 3 + 36
    print(f"[PASS] criterion 3: {checked} state/gate combinations and 16 circuits "
          f"return to |0..0> with fidelity >= 1-1e-9")


def test_criterion_4_end_to_end_crosstalk_recovery():
    """Seven simulated runs x 10000 shots on the bundled 20-qubit device:
    per-driver averages recover the injected crosstalk ordering
    CZ > X > SX > ID, the CZ-vs-ID Welch test hits p < 0.05 on at least 3 of
    4 spectator rows, and identity-baseline estimates land within +-30% of
    the closed-form deltas -- all inside a 60 s budget."""
    start = time.monotonic()
    topo, gate_set = _bundled()
    model = load_noise_model(DATA_DIR / "noise_example.json")
    bench = build_benchmark_set(topo, gate_set, BenchmarkConfig(seed=20250825))
    metadata = set_metadata(bench)

    tables = [
        table_from_counts(
            simulate_set(bench, model, shots=10000, seed=derive_seed(424242, run)),
            metadata)
        for run in range(7)
    ]
    report = build_report(tables, set_id=bench.set_id)

    means = {entry["driver"]: entry["mean"] for entry in report["per_driver"]}
    assert means["CZ"] > means["X"] > means["SX"] > means["ID"], means

    cz_vs_id = [w for w in report["welch_tests"]
                if {w["driver_a"], w["driver_b"]} == {"CZ", "ID"}]
    assert len(cz_vs_id) == 4
    significant = sum(w["p"] < 0.05 for w in cz_vs_id)
    assert significant >= 3, [w["p"] for w in cz_vs_id]

    spectators = report["spectator_gates"]
    drivers = report["driver_gates"]
    estimates = report["crosstalk"]["values"]
    for i, s in enumerate(spectators):
        baseline = expected_error_rate(bench.circuit(s, "ID"), topo, model)[1]
        for j, d in enumerate(drivers):
            if d == "ID":
                assert estimates[i][j] == 0.0
                continue
            truth = expected_error_rate(bench.circuit(s, d), topo, model)[1] - baseline
            assert abs(estimates[i][j] - truth) <= 0.30 * abs(truth), (
                f"{s}/{d}: estimate {estimates[i][j]:.4f} vs closed form {truth:.4f}")

    elapsed = time.monotonic() - start
    assert elapsed < 60.0, f"end-to-end run took {elapsed:.2f}s, budget 60s"
    print(f"[PASS] criterion 4: ordering recovered, {significant}/4 rows significant, "
          f"estimates within 30% of closed form, {elapsed:.2f}s")


def test_criterion_5_null_device_false_positive_rate():
    """With all crosstalk rates set to zero (SPAM and spectator gate error
    kept), 50 seeded replications of the 7-run protocol produce p < 0.05 in
    at most 10% of all driver-pair Welch tests.  The bound is read as the
    pooled fraction across replications and pairs, the statistically stable
    form of the requirement."""
    topo, gate_set = _bundled()
    example = load_noise_model(DATA_DIR / "noise_example.json")
    null_model = NoiseModel(
        spam_error=example.spam_error,
        gate_error=dict(example.gate_error),
        crosstalk={name: 0.0 for name in example.crosstalk},
    )

    false_positives = 0
    total = 0
    for rep in range(50):
        bench = build_benchmark_set(topo, gate_set,
                                    BenchmarkConfig(seed=derive_seed(987, rep)))
        metadata = set_metadata(bench)
        tables = [
            table_from_counts(
                simulate_set(bench, null_model, shots=10000,
                             seed=derive_seed(555, rep, run)),
                metadata)
            for run in range(7)
        ]
        for w in build_report(tables)["welch_tests"]:
            total += 1
            false_positives += w["p"] < 0.05

    assert total == 50 * 24  # 4 spectator rows x 6 driver pairs per replication
    rate = false_positives / total
    assert rate <= 0.10, f"null device flagged {false_positives}/{total} = {rate:.1%}"
    print(f"[PASS] criterion 5: {false_positives}/{total} null-device tests "
          f"below p=0.05 ({rate:.2%} <= 10%)")


def test_criterion_6_report_reproduces_reference_table(tmp_path):
    """Seven synthetic runs whose counts realize the published error-rate
    table exactly aggregate back to that table bit-for-bit, with zero
    standard error, in the written CSV output."""
    shots = 10000
    metadata = {
        "set_id": "set_reference",
        "gate_set": {"gates": [{"name": g} for g in GATE_NAMES]},
        "circuits": {f"{s}_{d}": {"spectator_count": 1}
                     for s in GATE_NAMES for d in GATE_NAMES},
    }
    results = {}
    for s in GATE_NAMES:
        for d in GATE_NAMES:
            ones = round(REFERENCE_VALUES[s][d] * shots)
            results[f"{s}_{d}"] = {"0": shots - ones, "1": ones}
    counts = {"set_id": "set_reference", "shots": shots, "results": results}

    tables = [table_from_counts(counts, metadata) for _ in range(7)]
    report = build_report(tables, set_id="set_reference")
    write_report(report, tmp_path)

    data = json.loads((tmp_path / "report.json").read_text())
    for i, s in enumerate(GATE_NAMES):
        for j, d in enumerate(GATE_NAMES):
            assert data["aggregate"]["mean"][i][j] == REFERENCE_VALUES[s][d], (s, d)
            assert data["aggregate"]["stderr"][i][j] == 0.0

    mean_csv = (tmp_path / "aggregate_mean.csv").read_text().splitlines()
    assert mean_csv[0] == "spectator," + ",".join(GATE_NAMES)
    for line, s in zip(mean_csv[1:], GATE_NAMES):
        cells = line.split(",")
        assert cells[0] == s
        assert [float(v) for v in cells[1:]] == [REFERENCE_VALUES[s][d] for d in GATE_NAMES]
    stderr_csv = (tmp_path / "aggregate_stderr.csv").read_text().splitlines()
    for line in stderr_csv[1:]:
        assert line.split(",")[1:] == ["0", "0", "0", "0"]
    print("[PASS] criterion 6: aggregate of 7 synthetic runs equals the reference "
          "table exactly with zero standard error")


def test_criterion_7_generation_is_byte_deterministic(tmp_path):
    """Running the generate command twice with the same seed produces
    byte-identical set directories (circuit files and metadata)."""
    args = ["generate",
            "--topology", str(DATA_DIR / "heavyhex20.json"),
            "--gates", str(DATA_DIR / "gates_default.json"),
            "--seed", "20250825"]
    assert main([*args, "--out", str(tmp_path / "a")]) == 0
    assert main([*args, "--out", str(tmp_path / "b")]) == 0

    (dir_a,) = (tmp_path / "a").iterdir()
    (dir_b,) = (tmp_path / "b").iterdir()
    assert dir_a.name == dir_b.name
    names_a = sorted(p.name for p in dir_a.iterdir())
    names_b = sorted(p.name for p in dir_b.iterdir())
    assert names_a == names_b
    assert len(names_a) == 17  # 16 circuit files + metadata.json
    for name in names_a:
        assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes(), name
    print(f"[PASS] criterion 7: {len(names_a)} files byte-identical across regenerations")
