"""Shared fixtures: a small generated benchmark set, produced through the
generator's CLI in a subprocess so this suite only touches the published
interfaces (files in, files out)."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

WORKSPACE = Path(__file__).resolve().parents[2]
GATES_PATH = WORKSPACE / "data" / "gates_default.json"

RING6 = {
    "num_qubits": 6,
    "directed": False,
    "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [0, 5]],
}


def run_crossbench(*args) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "crossbench.cli", *map(str, args)],
                          capture_output=True, text=True)


@pytest.fixture(scope="session")
def bench_dir(tmp_path_factory) -> Path:
    """A 16-circuit set on a 6-qubit ring -- small enough for exact simulation."""
    root = tmp_path_factory.mktemp("bench")
    topo = root / "ring6.json"
    topo.write_text(json.dumps(RING6))
    proc = run_crossbench("generate", "--topology", topo, "--gates", GATES_PATH,
                          "--seed", 11, "--out", root / "sets")
    assert proc.returncode == 0, proc.stderr
    (set_dir,) = (root / "sets").iterdir()
    return set_dir


@pytest.fixture(scope="session")
def metadata(bench_dir) -> dict:
    return json.loads((bench_dir / "metadata.json").read_text())
