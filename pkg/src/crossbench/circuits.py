"""Benchmark circuit construction: depths, delays, and the full pair grid.

One benchmark set holds one circuit per ordered (spectator gate, driver gate)
pair, including same-gate pairs.  In each circuit the driver groups apply
their gate `driver_depth` times while every spectator group runs an
identity-equivalent sequence of its own gate followed by a delay that pads
the spectator line to exactly the driver wall time:

    duration(g_s) * spectator_depth + delay == duration(g_max) * driver_depth

where g_max is the longest gate in the set.  The driver depth targets a
cumulative error budget: the error budget E is rounded up to the next power
of ten and the depth is that reciprocal scaled by the duty-cycle factor
delta, i.e. depth = round(delta * 10**ceil(log10(1/E))), never below one
application.  The spectator depth is the largest multiple of the gate's
identity order that fits under the driver depth (or a single order's worth
when even one does not fit, which is flagged).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .device import DeviceTopology, GateSet, GateSpec
from .gates import PrepState, prep_matrix, unprep_matrix
from .placement import RoleAssignment, assign_roles
from .rng import SplitMix64, derive_seed

_MASK64 = (1 << 64) - 1

ALL_PREP_STATES: tuple[PrepState, ...] = tuple(PrepState)


def driver_depth(max_error: float, delta: float) -> int:
    """Number of driver-gate applications for an error budget and duty cycle.

    Equals delta / max_error when max_error is an exact power of ten.
    """
    if not (0.0 < max_error < 1.0):
        raise ValueError(f"max_error must be in (0, 1), got {max_error}")
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    # The small slack keeps exact powers of ten from ceiling one step too far
    # (log10 of a float like 0.001 can land a hair above the integer).
    exponent = math.ceil(-math.log10(max_error) - 1e-12)
    return max(1, round(delta * 10**exponent))


def spectator_depth(order: int, depth: int) -> int:
    """Largest multiple of `order` at most `depth`, or `order` if none fits."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if order > depth:
        return order
    return order * (depth // order)


def delay_time(gate_set: GateSet, spectator_gate: GateSpec,
               drv_depth: int, spec_depth: int) -> float:
    """Idle time (ns) padding a spectator line to the driver wall time.

    Clamped to zero (with a warning) when the spectator sequence already runs
    longer, which can happen when the gate order exceeds the driver depth.
    """
    longest = gate_set.longest()
    delay = longest.duration_ns * drv_depth - spectator_gate.duration_ns * spec_depth
    if delay < 0:
        warnings.warn(
            f"spectator line for {spectator_gate.name} overruns the driver wall time "
            f"by {-delay:.1f} ns; delay clamped to 0", stacklevel=2)
        return 0.0
    return float(delay)


@dataclass(frozen=True)
class BenchmarkConfig:
    """Knobs for building one benchmark set."""

    delta: float = 0.1
    shots: int = 10000
    prep_states: tuple[PrepState, ...] = ALL_PREP_STATES
    seed: int = 0
    thresholds: tuple[int, int] | None = None
    fill_passes: bool = True

    def __post_init__(self):
        if not (0.0 < self.delta <= 1.0):
            raise ValueError(f"delta must be in (0, 1], got {self.delta}")
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        if not self.prep_states:
            raise ValueError("at least one preparation state is required")


@dataclass(frozen=True)
class BenchmarkCircuit:
    """One (spectator gate, driver gate) circuit of a benchmark set."""

    spectator_gate: GateSpec
    driver_gate: GateSpec
    driver_depth: int
    spectator_depth: int
    delay_ns: float
    depth_overflow: bool  # spectator order exceeded the driver depth
    assignment: RoleAssignment
    prep_states: tuple[PrepState, ...]  # aligned with spectator_qubits
    seed: int

    @property
    def key(self) -> str:
        """Identifier used for filenames and counts entries."""
        return f"{self.spectator_gate.name}_{self.driver_gate.name}"

    @property
    def spectator_qubits(self) -> tuple[int, ...]:
        return self.assignment.spectator_qubits

    def prep_for(self, qubit: int) -> PrepState:
        return self.prep_states[self.spectator_qubits.index(qubit)]


@dataclass(frozen=True)
class BenchmarkSet:
    """All circuits generated for one topology + gate set + config."""

    set_id: str
    topology: DeviceTopology
    gate_set: GateSet
    config: BenchmarkConfig
    driver_depth: int
    circuits: tuple[BenchmarkCircuit, ...] = field(default_factory=tuple)

    def circuit(self, spectator: str, driver: str) -> BenchmarkCircuit:
        for c in self.circuits:
            if c.spectator_gate.name == spectator and c.driver_gate.name == driver:
                return c
        raise KeyError(f"no circuit {spectator}_{driver} in set {self.set_id}")


def build_benchmark_set(topology: DeviceTopology, gate_set: GateSet,
                        config: BenchmarkConfig | None = None) -> BenchmarkSet:
    """Build the full |gates|^2 grid of benchmark circuits.

    Each ordered pair gets its own seed mixed from (config.seed, spectator
    index, driver index), so layouts are independent across pairs and stable
    when gates are appended to the set.
    """
    config = config or BenchmarkConfig()
    d_drv = driver_depth(gate_set.max_error, config.delta)

    circuits = []
    for si, s_gate in enumerate(gate_set.gates):
        d_spec = spectator_depth(s_gate.order, d_drv)
        overflow = s_gate.order > d_drv
        delay = delay_time(gate_set, s_gate, d_drv, d_spec)
        for di, d_gate in enumerate(gate_set.gates):
            pair_seed = derive_seed(config.seed, si, di)
            assignment = assign_roles(
                topology, s_gate, d_gate,
                thresholds=config.thresholds,
                fill_passes=config.fill_passes,
                seed=pair_seed,
            )
            prep_rng = SplitMix64(derive_seed(pair_seed, 1))
            preps = tuple(
                config.prep_states[prep_rng.randbelow(len(config.prep_states))]
                for _ in assignment.spectator_qubits
            )
            circuits.append(BenchmarkCircuit(
                spectator_gate=s_gate,
                driver_gate=d_gate,
                driver_depth=d_drv,
                spectator_depth=d_spec,
                delay_ns=delay,
                depth_overflow=overflow,
                assignment=assignment,
                prep_states=preps,
                seed=pair_seed,
            ))

    return BenchmarkSet(
        set_id=f"set_{config.seed & _MASK64:016x}",
        topology=topology,
        gate_set=gate_set,
        config=config,
        driver_depth=d_drv,
        circuits=tuple(circuits),
    )


def identity_fidelity(circuit: BenchmarkCircuit) -> float:
    """Worst-case |0..0> return fidelity over the circuit's spectator groups.

    Simulates unprep . gate^spectator_depth . prep for each spectator group
    with the declared unitaries; an identity-equivalent body gives 1.0 up to
    roundoff.  Requires the spectator gate to carry a unitary.
    """
    gate = circuit.spectator_gate
    if gate.unitary is None:
        raise ValueError(f"gate {gate.name} has no unitary; cannot check the identity property")
    body = np.linalg.matrix_power(gate.unitary, circuit.spectator_depth)
    worst = 1.0
    for group in circuit.assignment.spectator_groups:
        prep = np.eye(1, dtype=complex)
        unprep = np.eye(1, dtype=complex)
        for q in group.qubits:
            state = circuit.prep_for(q)
            prep = np.kron(prep, prep_matrix(state))
            unprep = np.kron(unprep, unprep_matrix(state))
        total = unprep @ body @ prep
        worst = min(worst, float(abs(total[0, 0]) ** 2))
    return worst
