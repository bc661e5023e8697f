"""Exception types raised by the runner."""


class RunnerError(Exception):
    """Base class for all errors raised by this package."""


class BenchmarkLayoutError(RunnerError):
    """A benchmark set directory is unreadable, incomplete, or inconsistent."""


class QasmSyntaxError(RunnerError):
    """A circuit file falls outside the supported OpenQASM 3 subset."""


class UnsupportedCircuitError(RunnerError):
    """The circuit uses a gate or feature the selected backend cannot execute."""


class BackendUnavailableError(RunnerError):
    """The backend identifier is unknown, unreachable, or its SDK is missing."""


class TransientBackendError(RunnerError):
    """A submission failed in a way that is worth retrying (timeouts, drops)."""


class TranspilationError(RunnerError):
    """The executed gate tally differs from the circuit source.

    This is a hard error: the benchmark's conclusions assume the idle and
    identity-equivalent structure of every spectator line was physically
    executed, so any rewrite invalidates the run.
    """
