"""Backend execution runner for crosstalk benchmark circuit sets.

Reads a generated set directory (QASM files + metadata.json), executes
every circuit on a backend with optimization disabled, and writes counts
in the analyzer's JSON format.
"""

from .backends import ExecutionResult, StatevectorBackend, resolve_backend
from .errors import (BackendUnavailableError, BenchmarkLayoutError, QasmSyntaxError,
                     RunnerError, TransientBackendError, TranspilationError,
                     UnsupportedCircuitError)
from .qasm import ParsedCircuit, QasmOp, parse_qasm
from .runner import RunnerConfig, remap_counts, run_set

__version__ = "0.1.0"

__all__ = [
    "BackendUnavailableError",
    "BenchmarkLayoutError",
    "ExecutionResult",
    "ParsedCircuit",
    "QasmOp",
    "QasmSyntaxError",
    "RunnerConfig",
    "RunnerError",
    "StatevectorBackend",
    "TransientBackendError",
    "TranspilationError",
    "UnsupportedCircuitError",
    "parse_qasm",
    "remap_counts",
    "resolve_backend",
    "run_set",
    "__version__",
]
