"""Execution backends: the built-in statevector simulator and the registry.

A backend exposes three things::

    name       human-readable identifier
    bit_order  "lsb0" (classical bit 0 is the RIGHTMOST key character,
               the common vendor convention) or "msb0"
    execute(circuit, shots, optimize=False) -> ExecutionResult

Backends report counts in their *native* bit order together with the tally
of operations they actually executed; ``run_set`` owns the reordering to
the metadata convention and the source-vs-executed comparison.

The statevector backend is noiseless and exact: it holds the full 2^n
amplitude vector, so it is meant for functional checks on small devices,
not the 100+ qubit topologies the generator supports.  Its ``optimize``
flag applies the canonical naive rewrite (dropping identity gates and
delays) precisely so that enabling optimization has observable,
guard-detectable consequences.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import BackendUnavailableError, UnsupportedCircuitError
from .qasm import ParsedCircuit, QasmOp


@dataclass(frozen=True)
class ExecutionResult:
    """Counts in the backend's native bit order plus the executed-op tally."""

    counts: dict[str, int]
    executed_ops: dict[str, int]


_SQ2 = 1.0 / math.sqrt(2.0)
_T_PHASE = complex(_SQ2, _SQ2)

_GATES_1Q = {
    "id": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.diag([1, -1]).astype(complex),
    "h": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "s": np.diag([1, 1j]).astype(complex),
    "sdg": np.diag([1, -1j]).astype(complex),
    "t": np.diag([1, _T_PHASE]).astype(complex),
    "tdg": np.diag([1, _T_PHASE.conjugate()]).astype(complex),
    "sx": np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2,
    "sxdg": np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]], dtype=complex) / 2,
}

_GATES_2Q = {
    "cx": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                   dtype=complex),
    "cz": np.diag([1, 1, 1, -1]).astype(complex),
    "swap": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                     dtype=complex),
}


class StatevectorBackend:
    """Noiseless full-statevector execution of parsed circuits.

    Sampling draws from one generator created at construction, so two
    backends built with the same seed replay identical count sequences;
    an unseeded backend is nondeterministic like real hardware.
    """

    name = "statevector"
    bit_order = "lsb0"

    def __init__(self, seed: int | None = None):
        self._rng = np.random.default_rng(seed)

    def execute(self, circuit: ParsedCircuit, shots: int, *,
                optimize: bool = False) -> ExecutionResult:
        if shots < 1:
            raise ValueError(f"shots must be positive, got {shots}")
        ops = _strip_identity_ops(circuit.ops) if optimize else circuit.ops
        state = _evolve(circuit.num_qubits, ops)
        probs = _measured_probabilities(state, circuit)
        draws = self._rng.multinomial(shots, probs)

        width = circuit.num_clbits
        counts = {}
        for idx in np.flatnonzero(draws):
            # flat index has clbit 0 as the most significant bit; native
            # keys are little-endian, so the string is reversed.
            counts[format(int(idx), f"0{width}b")[::-1]] = int(draws[idx])
        tally: Counter[str] = Counter()
        for op in ops:
            if op.kind == "gate":
                tally[op.name] += 1
            elif op.kind == "delay":
                tally["delay"] += 1
        return ExecutionResult(counts=dict(sorted(counts.items())),
                               executed_ops=dict(tally))


def _strip_identity_ops(ops: tuple[QasmOp, ...]) -> tuple[QasmOp, ...]:
    """The rewrite a naive optimizer makes: no identity gates, no idling."""
    return tuple(op for op in ops
                 if op.kind != "delay" and not (op.kind == "gate" and op.name == "id"))


def _evolve(num_qubits: int, ops: tuple[QasmOp, ...]) -> np.ndarray:
    state = np.zeros((2,) * num_qubits, dtype=complex)
    state[(0,) * num_qubits] = 1.0
    for op in ops:
        if op.kind != "gate":
            continue  # barriers, delays, and terminal measures are no-ops here
        if (u := _GATES_1Q.get(op.name)) is not None:
            if len(op.qubits) != 1:
                raise UnsupportedCircuitError(
                    f"gate {op.name!r} expects 1 qubit, got {len(op.qubits)}")
            state = np.moveaxis(np.tensordot(u, state, axes=([1], [op.qubits[0]])),
                                0, op.qubits[0])
        elif (u := _GATES_2Q.get(op.name)) is not None:
            if len(op.qubits) != 2:
                raise UnsupportedCircuitError(
                    f"gate {op.name!r} expects 2 qubits, got {len(op.qubits)}")
            a, b = op.qubits
            state = np.moveaxis(
                np.tensordot(u.reshape(2, 2, 2, 2), state, axes=([2, 3], [a, b])),
                (0, 1), (a, b))
        else:
            raise UnsupportedCircuitError(
                f"gate {op.name!r} is not in this backend's gate table")
    return state


def _measured_probabilities(state: np.ndarray, circuit: ParsedCircuit) -> np.ndarray:
    """Marginal outcome probabilities over the measured qubits, clbit order."""
    if circuit.num_clbits == 0:
        raise UnsupportedCircuitError("circuit has no measurements to sample")
    measured = circuit.measure_map
    probs = np.abs(state) ** 2
    unmeasured = tuple(q for q in range(circuit.num_qubits) if q not in set(measured))
    if unmeasured:
        probs = probs.sum(axis=unmeasured)
    remaining = sorted(measured)  # axis order after the sum
    probs = probs.transpose([remaining.index(q) for q in measured]).reshape(-1)
    return probs / probs.sum()


def resolve_backend(identifier: str):
    """Map a backend identifier to a backend instance.

    Grammar::

        local           built-in noiseless statevector simulator
        local:<seed>    same, with a fixed sampling seed
        qiskit:<name>   vendor SDK adapter ('aer' or a hosted backend name)
    """
    kind, _, rest = identifier.partition(":")
    if kind == "local":
        if not rest:
            return StatevectorBackend()
        try:
            return StatevectorBackend(seed=int(rest))
        except ValueError:
            raise BackendUnavailableError(
                f"local backend seed must be an integer, got {rest!r}") from None
    if kind == "qiskit":
        from .vendor import QiskitBackend
        return QiskitBackend(rest or "aer")
    raise BackendUnavailableError(
        f"unknown backend identifier {identifier!r}; expected 'local[:seed]' "
        "or 'qiskit:<backend>'")
