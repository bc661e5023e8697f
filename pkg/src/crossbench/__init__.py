"""Crosstalk benchmark generation and analysis for quantum devices.

The workflow has three stages, available as a library and via the
``crossbench`` command line tool:

1. generate -- place driver/spectator roles on a device topology and emit one
   OpenQASM circuit per ordered (spectator gate, driver gate) pair;
2. run -- execute the circuits on hardware, a vendor simulator, or the
   built-in stochastic noise model, producing counts documents;
3. report -- reduce counts to spectator error-rate tables, compare driver
   gates with Welch's t-test, and estimate crosstalk against a baseline.
"""

from .analysis import (Aggregate, ErrorRateTable, TTestResult, aggregate_runs, build_report,
                       control_baseline, crosstalk_estimate, error_rate, load_counts,
                       per_driver_average, table_from_counts, welch_t_test, write_report)
from .circuits import (BenchmarkCircuit, BenchmarkConfig, BenchmarkSet, build_benchmark_set,
                       delay_time, driver_depth, identity_fidelity, spectator_depth)
from .device import (DeviceTopology, GateSet, GateSpec, load_gate_set, load_topology,
                     verify_order)
from .emit import load_benchmark_set, load_metadata, render_qasm, set_metadata, write_benchmark_dir
from .errors import (AnalysisError, CrossBenchError, EmissionError, InsufficientTopologyError,
                     InvalidThresholdError, SchemaError)
from .gates import PrepState, parse_prep_states
from .noise import NoiseModel, expected_error_rate, load_noise_model, sample_counts, simulate_set
from .placement import (GateGroup, PlacementState, Role, RoleAssignment, assign_roles,
                        default_thresholds, try_assign_driver, try_assign_spectator,
                        validate_assignment)

__version__ = "0.1.0"
