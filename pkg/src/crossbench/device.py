"""Device topology and gate-set descriptions.

A topology is a set of qubits plus coupler edges.  Undirected couplers are
expanded to both ordered pairs internally so that placement and validation
only ever reason about ordered pairs; on directed devices the stored pairs
are exactly the orientations a multi-qubit gate may use.

A gate is described by its name, arity, duration, and its *order*: the
smallest n for which gate^n equals the identity up to global phase.  The
order is what lets spectator sequences be folded back to the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import SchemaError

#: Tolerance (max absolute entry difference) for unitarity and order checks.
ORDER_TOL = 1e-9


class DeviceTopology:
    """Qubit connectivity graph with ordered coupler pairs.

    Args:
        num_qubits: number of qubits, indexed 0..num_qubits-1.
        edges: coupler list.  For undirected devices each coupler appears
            once and is expanded to both orientations; for directed devices
            each listed pair is taken literally.
        directed: whether edge orientation is meaningful.
    """

    def __init__(self, num_qubits: int, edges: Iterable[tuple[int, int]], directed: bool = False):
        if not isinstance(num_qubits, int) or num_qubits < 1:
            raise SchemaError(f"num_qubits must be a positive integer, got {num_qubits!r}")
        self.num_qubits = num_qubits
        self.directed = bool(directed)

        normalized: set[tuple[int, int]] = set()
        adjacency: dict[int, set[int]] = {q: set() for q in range(num_qubits)}
        for raw in edges:
            pair = tuple(raw)
            if len(pair) != 2:
                raise SchemaError(f"edge {raw!r} is not a pair")
            a, b = pair
            for endpoint in (a, b):
                if not isinstance(endpoint, int) or not (0 <= endpoint < num_qubits):
                    raise SchemaError(
                        f"edge ({a}, {b}) has endpoint {endpoint} outside 0..{num_qubits - 1}"
                    )
            if a == b:
                raise SchemaError(f"self-loop ({a}, {b}) is not allowed")
            expansion = [(a, b)] if self.directed else [(a, b), (b, a)]
            for ordered in expansion:
                if ordered in normalized:
                    raise SchemaError(f"duplicate edge ({a}, {b})")
                normalized.add(ordered)
            adjacency[a].add(b)
            adjacency[b].add(a)

        self.edges: frozenset[tuple[int, int]] = frozenset(normalized)
        # Sorted adjacency lists give deterministic iteration, which the
        # seeded placement shuffles rely on.
        self._adj: dict[int, tuple[int, ...]] = {
            q: tuple(sorted(nbrs)) for q, nbrs in adjacency.items()
        }

    def neighbors(self, qubit: int) -> frozenset[int]:
        """Adjacent qubits, ignoring edge orientation."""
        return frozenset(self.adjacent(qubit))

    def adjacent(self, qubit: int) -> tuple[int, ...]:
        """Adjacent qubits as a sorted tuple (deterministic order)."""
        if not (0 <= qubit < self.num_qubits):
            raise SchemaError(f"qubit {qubit} outside 0..{self.num_qubits - 1}")
        return self._adj[qubit]

    def has_edge(self, a: int, b: int) -> bool:
        """True when the ordered pair (a, b) is a normalized edge."""
        return (a, b) in self.edges

    def to_doc(self) -> dict:
        """JSON-serializable form (undirected edges listed once, a < b)."""
        if self.directed:
            edge_list = sorted(self.edges)
        else:
            edge_list = sorted({(min(a, b), max(a, b)) for a, b in self.edges})
        return {
            "num_qubits": self.num_qubits,
            "directed": self.directed,
            "edges": [list(e) for e in edge_list],
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, DeviceTopology):
            return NotImplemented
        return (
            self.num_qubits == other.num_qubits
            and self.directed == other.directed
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"DeviceTopology({self.num_qubits} qubits, {len(self.edges)} ordered pairs, {kind})"


def load_topology(source) -> DeviceTopology:
    """Build a DeviceTopology from a JSON document, path, or parsed dict."""
    doc = _read_doc(source, "topology")
    missing = {"num_qubits", "edges"} - doc.keys()
    if missing:
        raise SchemaError(f"topology document missing fields: {sorted(missing)}")
    edges = [tuple(e) if isinstance(e, (list, tuple)) else e for e in doc["edges"]]
    return DeviceTopology(doc["num_qubits"], edges, directed=doc.get("directed", False))


@dataclass(eq=False)
class GateSpec:
    """One benchmarkable gate.

    Attributes:
        name: label used in tables, filenames, and counts keys.
        arity: number of qubits the gate acts on.
        duration_ns: wall time of one application; the identity gate is an
            ordinary order-1 gate with a nonzero duration.
        order: smallest n with unitary**n proportional to the identity.
        emit_name: identifier written to circuit files (None disables emission).
        unitary: optional 2^arity x 2^arity matrix for verification.
    """

    name: str
    arity: int
    duration_ns: float
    order: int
    emit_name: str | None = None
    unitary: np.ndarray | None = None

    def __eq__(self, other) -> bool:
        if not isinstance(other, GateSpec):
            return NotImplemented
        if (self.name, self.arity, self.duration_ns, self.order, self.emit_name) != (
                other.name, other.arity, other.duration_ns, other.order, other.emit_name):
            return False
        if (self.unitary is None) != (other.unitary is None):
            return False
        return self.unitary is None or bool(np.array_equal(self.unitary, other.unitary))

    def validate(self) -> None:
        if not self.name:
            raise SchemaError("gate name must be nonempty")
        if self.arity < 1:
            raise SchemaError(f"gate {self.name}: arity must be >= 1, got {self.arity}")
        if not (self.duration_ns > 0):
            raise SchemaError(f"gate {self.name}: duration_ns must be positive")
        if self.order < 1:
            raise SchemaError(f"gate {self.name}: order must be >= 1, got {self.order}")
        if self.unitary is not None:
            dim = 2**self.arity
            if self.unitary.shape != (dim, dim):
                raise SchemaError(
                    f"gate {self.name}: unitary shape {self.unitary.shape} != ({dim}, {dim})"
                )
            deviation = np.max(np.abs(self.unitary.conj().T @ self.unitary - np.eye(dim)))
            if deviation > ORDER_TOL:
                raise SchemaError(f"gate {self.name}: matrix is not unitary (dev {deviation:.2e})")
            power = np.linalg.matrix_power(self.unitary, self.order)
            if not _proportional_to_identity(power, ORDER_TOL):
                raise SchemaError(
                    f"gate {self.name}: unitary**{self.order} is not proportional to identity"
                )


@dataclass(eq=False)
class GateSet:
    """The gates under test plus the target cumulative error budget."""

    gates: list[GateSpec]
    max_error: float

    def __post_init__(self):
        if not self.gates:
            raise SchemaError("gate set must contain at least one gate")
        names = [g.name for g in self.gates]
        if len(set(names)) != len(names):
            raise SchemaError(f"gate names must be unique, got {names}")
        if not (0.0 < self.max_error < 1.0):
            raise SchemaError(f"max_error must be in (0, 1), got {self.max_error}")
        for gate in self.gates:
            gate.validate()

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.gates)

    def gate(self, name: str) -> GateSpec:
        for g in self.gates:
            if g.name == name:
                return g
        raise KeyError(f"no gate named {name!r} in gate set {self.names}")

    def longest(self) -> GateSpec:
        """The gate with the maximum duration (sets the spectator wall time)."""
        return max(self.gates, key=lambda g: g.duration_ns)

    def to_doc(self) -> dict:
        return {
            "max_error": self.max_error,
            "gates": [
                {
                    "name": g.name,
                    "arity": g.arity,
                    "duration_ns": g.duration_ns,
                    "order": g.order,
                    "emit_name": g.emit_name,
                    "unitary": _matrix_to_doc(g.unitary),
                }
                for g in self.gates
            ],
        }


def load_gate_set(source) -> GateSet:
    """Build a GateSet from a JSON document, path, or parsed dict."""
    doc = _read_doc(source, "gate set")
    missing = {"max_error", "gates"} - doc.keys()
    if missing:
        raise SchemaError(f"gate set document missing fields: {sorted(missing)}")
    gates = []
    for entry in doc["gates"]:
        try:
            gates.append(
                GateSpec(
                    name=entry["name"],
                    arity=entry["arity"],
                    duration_ns=entry["duration_ns"],
                    order=entry["order"],
                    emit_name=entry.get("emit_name"),
                    unitary=_matrix_from_doc(entry.get("unitary")),
                )
            )
        except KeyError as exc:
            raise SchemaError(f"gate entry {entry.get('name', '?')!r} missing field {exc}") from exc
    return GateSet(gates=gates, max_error=doc["max_error"])


def verify_order(gate: GateSpec) -> bool:
    """Check that gate.order is the *minimal* identity-returning power.

    Returns False either when unitary**order is not proportional to the
    identity or when some smaller positive power already is.
    """
    if gate.unitary is None:
        raise ValueError(f"gate {gate.name} has no unitary; order cannot be verified")
    if gate.order < 1:
        return False
    power = np.eye(gate.unitary.shape[0], dtype=complex)
    for m in range(1, gate.order + 1):
        power = power @ gate.unitary
        if _proportional_to_identity(power, ORDER_TOL):
            return m == gate.order
    return False


def _proportional_to_identity(matrix: np.ndarray, tol: float) -> bool:
    phase = matrix[0, 0]
    if abs(abs(phase) - 1.0) > tol:
        return False
    dim = matrix.shape[0]
    return bool(np.max(np.abs(matrix - phase * np.eye(dim))) <= tol)


def _matrix_from_doc(doc) -> np.ndarray | None:
    """Parse a matrix given as nested [re, im] pairs."""
    if doc is None:
        return None
    try:
        rows = [[complex(cell[0], cell[1]) for cell in row] for row in doc]
    except (TypeError, IndexError) as exc:
        raise SchemaError(f"malformed unitary entry: {exc}") from exc
    return np.array(rows, dtype=complex)


def _matrix_to_doc(matrix: np.ndarray | None):
    if matrix is None:
        return None
    return [[[float(cell.real), float(cell.imag)] for cell in row] for row in matrix]


def _read_doc(source, label: str) -> Mapping:
    if isinstance(source, Mapping):
        return source
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {label} file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{label} file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{label} file {path} must contain a JSON object")
    return doc
