"""Turning measurement counts into error-rate tables, tests, and reports.

The primary observable is the spectator error rate of one circuit: the
fraction of measured bits that came back '1', pooled over all spectator
qubits and shots.  Rates from repeated runs are aggregated cell-wise into
mean / sample stddev / standard error, compared pairwise across driver gates
with Welch's unequal-variance t-test, and reduced to crosstalk estimates by
subtracting one of three baselines:

* ``id_driver``   -- subtract the identity-driver column (sign-preserving),
* ``min_driver``  -- subtract each row's minimum (a non-negative lower bound),
* ``control_counts`` -- subtract rates from a separate driver-free control run.

Counts documents look like::

    {"set_id": ..., "shots": N, "results": {"<spec>_<drv>": {"0100...": c}}}

where bitstring position i (leftmost = 0) is spectator_qubits[i] from the
set metadata.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from scipy import stats as _scipy_stats

from .errors import AnalysisError, SchemaError

#: Variance substituted when both samples are degenerate but means differ,
#: so the statistic stays finite and the p-value underflows to ~0.
_EPS_VAR = 1e-300

BASELINE_MODES = ("id_driver", "min_driver", "control_counts")


def load_counts(source) -> dict:
    """Read and structurally validate a counts document."""
    if isinstance(source, Mapping):
        doc = source
    else:
        path = Path(source)
        try:
            doc = json.loads(path.read_text())
        except OSError as exc:
            raise SchemaError(f"cannot read counts file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"counts file {path} is not valid JSON: {exc}") from exc
    missing = {"set_id", "shots", "results"} - doc.keys()
    if missing:
        raise SchemaError(f"counts document missing fields: {sorted(missing)}")
    if not isinstance(doc["shots"], int) or doc["shots"] < 1:
        raise SchemaError(f"counts shots must be a positive integer, got {doc['shots']!r}")
    for key, entry in doc["results"].items():
        for bits, n in entry.items():
            if not bits or set(bits) - {"0", "1"}:
                raise SchemaError(f"counts[{key}]: {bits!r} is not a bitstring")
            if not isinstance(n, int) or n < 0:
                raise SchemaError(f"counts[{key}][{bits}]: {n!r} is not a non-negative count")
    return doc


def error_rate(counts: Mapping[str, int], spectator_count: int,
               shots: int | None = None) -> float:
    """Fraction of '1' outcomes over all spectator bits and shots."""
    if spectator_count < 1:
        raise AnalysisError(f"spectator_count must be >= 1, got {spectator_count}")
    ones = 0
    total = 0
    for bits, n in counts.items():
        if len(bits) != spectator_count:
            raise AnalysisError(
                f"bitstring {bits!r} has {len(bits)} bits, expected {spectator_count}")
        ones += bits.count("1") * n
        total += n
    if shots is not None and total != shots:
        raise AnalysisError(f"counts sum to {total}, expected {shots} shots")
    if total == 0:
        raise AnalysisError("counts are empty")
    return ones / (total * spectator_count)


@dataclass(frozen=True)
class ErrorRateTable:
    """Spectator-gate rows x driver-gate columns of error rates."""

    spectators: tuple[str, ...]
    drivers: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]  # row-major, values[row][col]

    def cell(self, spectator: str, driver: str) -> float:
        return self.values[self.spectators.index(spectator)][self.drivers.index(driver)]

    def row(self, spectator: str) -> tuple[float, ...]:
        return self.values[self.spectators.index(spectator)]

    def column(self, driver: str) -> tuple[float, ...]:
        j = self.drivers.index(driver)
        return tuple(row[j] for row in self.values)


def table_from_counts(counts_doc: Mapping, metadata: Mapping) -> ErrorRateTable:
    """Build the per-run error-rate table for one counts document."""
    gate_names = [g["name"] for g in metadata["gate_set"]["gates"]]
    shots = counts_doc["shots"]
    rows = []
    for s in gate_names:
        row = []
        for d in gate_names:
            key = f"{s}_{d}"
            if key not in counts_doc["results"]:
                raise AnalysisError(f"counts document has no entry for circuit {key}")
            if key not in metadata["circuits"]:
                raise AnalysisError(f"set metadata has no circuit {key}")
            spectator_count = metadata["circuits"][key]["spectator_count"]
            row.append(error_rate(counts_doc["results"][key], spectator_count, shots))
        rows.append(tuple(row))
    names = tuple(gate_names)
    return ErrorRateTable(spectators=names, drivers=names, values=tuple(rows))


@dataclass(frozen=True)
class Aggregate:
    """Cell-wise statistics over repeated runs."""

    mean: ErrorRateTable
    stddev: ErrorRateTable
    stderr: ErrorRateTable
    num_runs: int
    se_available: bool  # False for a single run (stddev/stderr are 0 by convention)


def aggregate_runs(tables: Sequence[ErrorRateTable]) -> Aggregate:
    """Element-wise mean, sample stddev, and SE = stddev/sqrt(n) across runs.

    statistics.mean/stdev work in exact rational arithmetic, so identical
    runs aggregate to exactly their common value with exactly zero spread.
    """
    if not tables:
        raise AnalysisError("no run tables to aggregate")
    first = tables[0]
    for t in tables[1:]:
        if t.spectators != first.spectators or t.drivers != first.drivers:
            raise AnalysisError(
                f"run tables disagree on gate axes: {t.spectators}x{t.drivers} "
                f"vs {first.spectators}x{first.drivers}")
    n = len(tables)
    means, stds, errs = [], [], []
    for i in range(len(first.spectators)):
        mrow, srow, erow = [], [], []
        for j in range(len(first.drivers)):
            cell = [t.values[i][j] for t in tables]
            m = statistics.mean(cell)
            s = statistics.stdev(cell) if n > 1 else 0.0
            mrow.append(m)
            srow.append(s)
            erow.append(s / math.sqrt(n))
        means.append(tuple(mrow))
        stds.append(tuple(srow))
        errs.append(tuple(erow))

    def _table(rows):
        return ErrorRateTable(first.spectators, first.drivers, tuple(rows))

    return Aggregate(mean=_table(means), stddev=_table(stds), stderr=_table(errs),
                     num_runs=n, se_available=n > 1)


@dataclass(frozen=True)
class DriverAverage:
    driver: str
    mean: float
    by_spectator: tuple[tuple[str, float], ...]


def per_driver_average(table: ErrorRateTable) -> tuple[DriverAverage, ...]:
    """Unweighted column means: average impact of each driver gate."""
    out = []
    for d in table.drivers:
        col = table.column(d)
        out.append(DriverAverage(
            driver=d,
            mean=statistics.mean(col),
            by_spectator=tuple(zip(table.spectators, col)),
        ))
    return tuple(out)


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: float
    p: float
    mean_a: float
    mean_b: float


def welch_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Two-sided Welch's t-test with Welch-Satterthwaite degrees of freedom.

    Identical samples give t=0, p=1.  When both samples have zero variance
    but different means, the variance is replaced by a tiny epsilon so the
    result reports certainty (p ~ 0) instead of dividing by zero.
    """
    n1, n2 = len(a), len(b)
    if n1 < 2 or n2 < 2:
        raise AnalysisError(f"Welch's t-test needs >= 2 points per sample, got {n1} and {n2}")
    m1 = math.fsum(a) / n1
    m2 = math.fsum(b) / n2
    v1 = math.fsum((x - m1) ** 2 for x in a) / (n1 - 1)
    v2 = math.fsum((x - m2) ** 2 for x in b) / (n2 - 1)
    se2 = v1 / n1 + v2 / n2
    if se2 == 0.0:
        df = float(n1 + n2 - 2)
        if m1 == m2:
            return TTestResult(t=0.0, df=df, p=1.0, mean_a=m1, mean_b=m2)
        t = (m1 - m2) / math.sqrt(_EPS_VAR)
    else:
        df = se2**2 / ((v1 / n1) ** 2 / (n1 - 1) + (v2 / n2) ** 2 / (n2 - 1))
        t = (m1 - m2) / math.sqrt(se2)
    p = float(2.0 * _scipy_stats.t.sf(abs(t), df))
    return TTestResult(t=t, df=df, p=p, mean_a=m1, mean_b=m2)


def crosstalk_estimate(table: ErrorRateTable, mode: str, *, baseline_driver: str = "ID",
                       control: Mapping[str, float] | None = None) -> ErrorRateTable:
    """Subtract a per-row baseline from every cell.

    id_driver keeps signs (its own column becomes exactly zero); min_driver
    is non-negative with each row's minimum mapped to zero; control_counts
    subtracts externally supplied driver-free rates per spectator gate.
    """
    if mode not in BASELINE_MODES:
        raise AnalysisError(f"unknown baseline mode {mode!r}; expected one of {BASELINE_MODES}")
    baselines = []
    if mode == "id_driver":
        if baseline_driver not in table.drivers:
            raise AnalysisError(
                f"baseline driver {baseline_driver!r} not in driver gates {table.drivers}")
        j = table.drivers.index(baseline_driver)
        baselines = [row[j] for row in table.values]
    elif mode == "min_driver":
        baselines = [min(row) for row in table.values]
    else:  # control_counts
        if control is None:
            raise AnalysisError("control_counts baseline requires control rates")
        try:
            baselines = [control[s] for s in table.spectators]
        except KeyError as exc:
            raise AnalysisError(f"control rates missing spectator gate {exc}") from exc
    rows = tuple(
        tuple(v - baselines[i] for v in row) for i, row in enumerate(table.values))
    return ErrorRateTable(table.spectators, table.drivers, rows)


def control_baseline(counts_doc: Mapping, metadata: Mapping) -> dict[str, float]:
    """Per-spectator-gate rates from a driver-free control run.

    Control entries may be keyed either "<spectator>_<anything known>" or
    just "<spectator>"; all entries matching a spectator gate are averaged.
    Bitstring length doubles as the spectator count.
    """
    gate_names = [g["name"] for g in metadata["gate_set"]["gates"]]
    shots = counts_doc.get("shots")
    out: dict[str, float] = {}
    for s in gate_names:
        keys = [k for k in counts_doc["results"]
                if k == s or any(k == f"{s}_{d}" for d in gate_names) or k == f"{s}_none"]
        if not keys:
            raise AnalysisError(f"control counts have no entry for spectator gate {s!r}")
        rates = []
        for k in sorted(keys):
            entry = counts_doc["results"][k]
            width = len(next(iter(entry)))
            rates.append(error_rate(entry, width, shots))
        out[s] = statistics.mean(rates)
    return out


def build_report(tables: Sequence[ErrorRateTable], *, baseline_mode: str = "id_driver",
                 baseline_driver: str = "ID", control: Mapping[str, float] | None = None,
                 set_id: str | None = None) -> dict:
    """Assemble the full analysis report as a JSON-serializable dict."""
    agg = aggregate_runs(tables)
    n = agg.num_runs

    driver_means = per_driver_average(agg.mean)
    # Per-run column means feed the driver-average standard errors.
    per_run_cols = {
        d: [statistics.mean(t.column(d)) for t in tables] for d in agg.mean.drivers
    }
    per_driver = []
    for da in driver_means:
        col_runs = per_run_cols[da.driver]
        se = statistics.stdev(col_runs) / math.sqrt(n) if n > 1 else 0.0
        per_driver.append({
            "driver": da.driver,
            "mean": da.mean,
            "stderr": se,
            "by_spectator": {s: v for s, v in da.by_spectator},
        })

    welch = []
    if n > 1:
        for s in agg.mean.spectators:
            for ja, da in enumerate(agg.mean.drivers):
                for db in agg.mean.drivers[ja + 1:]:
                    sample_a = [t.cell(s, da) for t in tables]
                    sample_b = [t.cell(s, db) for t in tables]
                    r = welch_t_test(sample_a, sample_b)
                    welch.append({
                        "spectator": s, "driver_a": da, "driver_b": db,
                        "t": r.t, "df": r.df, "p": r.p,
                        "mean_a": r.mean_a, "mean_b": r.mean_b,
                    })

    estimate = crosstalk_estimate(agg.mean, baseline_mode,
                                  baseline_driver=baseline_driver, control=control)

    report = {
        "format_version": 1,
        "set_id": set_id,
        "num_runs": n,
        "se_available": agg.se_available,
        "spectator_gates": list(agg.mean.spectators),
        "driver_gates": list(agg.mean.drivers),
        "aggregate": {
            "mean": [list(r) for r in agg.mean.values],
            "stddev": [list(r) for r in agg.stddev.values],
            "stderr": [list(r) for r in agg.stderr.values],
        },
        "per_run": [[list(r) for r in t.values] for t in tables],
        "per_driver": per_driver,
        "welch_tests": welch,
        "crosstalk": {
            "baseline_mode": baseline_mode,
            "values": [list(r) for r in estimate.values],
        },
    }
    return report


def write_report(report: Mapping, out_dir) -> list[Path]:
    """Write report.json plus CSV tables; byte-deterministic for equal input."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def _write(name: str, text: str):
        path = out / name
        path.write_text(text)
        written.append(path)

    _write("report.json", json.dumps(report, indent=2) + "\n")

    spectators = report["spectator_gates"]
    drivers = report["driver_gates"]

    def _matrix_csv(rows) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["spectator", *drivers])
        for s, row in zip(spectators, rows):
            writer.writerow([s, *(_fmt(v) for v in row)])
        return buf.getvalue()

    _write("aggregate_mean.csv", _matrix_csv(report["aggregate"]["mean"]))
    _write("aggregate_stderr.csv", _matrix_csv(report["aggregate"]["stderr"]))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["driver", "mean", "stderr"])
    for entry in report["per_driver"]:
        writer.writerow([entry["driver"], _fmt(entry["mean"]), _fmt(entry["stderr"])])
    _write("per_driver.csv", buf.getvalue())

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["spectator", "driver_a", "driver_b", "t", "df", "p"])
    for row in report["welch_tests"]:
        writer.writerow([row["spectator"], row["driver_a"], row["driver_b"],
                         _fmt(row["t"]), _fmt(row["df"]), _fmt(row["p"])])
    _write("welch_tests.csv", buf.getvalue())

    _write(f"crosstalk_{report['crosstalk']['baseline_mode']}.csv",
           _matrix_csv(report["crosstalk"]["values"]))
    return written


def _fmt(value: float) -> str:
    return format(value, ".12g")
