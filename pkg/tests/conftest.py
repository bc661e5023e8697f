"""Shared fixtures: reference gates, small topologies, random graph builder."""

from __future__ import annotations

import random
from pathlib import Path

import numpy as np
import pytest

from crossbench.device import DeviceTopology, GateSet, GateSpec

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

# Reference matrices, written out independently of the package's own tables.
X_MATRIX = np.array([[0, 1], [1, 0]], dtype=complex)
SX_MATRIX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
CZ_MATRIX = np.diag([1, 1, 1, -1]).astype(complex)
ID_MATRIX = np.eye(2, dtype=complex)


def make_x(**kw):
    base = dict(name="X", arity=1, duration_ns=36.0, order=2, emit_name="x", unitary=X_MATRIX)
    base.update(kw)
    return GateSpec(**base)


def make_sx(**kw):
    base = dict(name="SX", arity=1, duration_ns=36.0, order=4, emit_name="sx", unitary=SX_MATRIX)
    base.update(kw)
    return GateSpec(**base)


def make_cz(**kw):
    base = dict(name="CZ", arity=2, duration_ns=68.0, order=2, emit_name="cz", unitary=CZ_MATRIX)
    base.update(kw)
    return GateSpec(**base)


def make_id(**kw):
    base = dict(name="ID", arity=1, duration_ns=36.0, order=1, emit_name="id", unitary=ID_MATRIX)
    base.update(kw)
    return GateSpec(**base)


def line_topology(n: int, directed: bool = False) -> DeviceTopology:
    return DeviceTopology(n, [(i, i + 1) for i in range(n - 1)], directed=directed)


def random_connected_topology(rng: random.Random, num_qubits: int,
                              directed: bool) -> DeviceTopology:
    """Random connected graph: a random attachment tree plus extra couplers."""
    edges: set[tuple[int, int]] = set()
    for q in range(1, num_qubits):
        edges.add((rng.randrange(q), q))
    wanted_extra = num_qubits // 3
    for _ in range(10 * num_qubits):
        if wanted_extra == 0:
            break
        a, b = rng.randrange(num_qubits), rng.randrange(num_qubits)
        if a == b or (a, b) in edges or (b, a) in edges:
            continue
        edges.add((a, b))
        wanted_extra -= 1
    edge_list = sorted(edges)
    if directed:
        edge_list = [(b, a) if rng.random() < 0.5 else (a, b) for a, b in edge_list]
    return DeviceTopology(num_qubits, edge_list, directed=directed)


@pytest.fixture
def default_gate_set() -> GateSet:
    return GateSet(gates=[make_x(), make_sx(), make_cz(), make_id()], max_error=0.001)


@pytest.fixture
def heavyhex20() -> DeviceTopology:
    from crossbench.device import load_topology

    return load_topology(DATA_DIR / "heavyhex20.json")
