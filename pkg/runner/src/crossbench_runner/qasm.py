"""Parser for the restricted OpenQASM 3 subset the benchmark generator emits.

The grammar is deliberately small and line-oriented, one statement per line::

    OPENQASM 3.0;
    include "stdgates.inc";
    // comments and blank lines anywhere
    qubit[20] q;
    bit[8] c;
    sx q[4];
    cz q[3], q[5];
    delay[3200ns] q[4];
    barrier q;
    c[0] = measure q[4];

Anything outside this subset raises :class:`QasmSyntaxError` naming the
offending line.  Two structural rules beyond the line grammar are enforced
because the whole pipeline relies on them: measurements form the final
section of the program (no gate may follow one), and every classical bit is
written exactly once.  Gate names are *not* vocabulary-checked here -- the
parser captures structure, the backend owns the gate set.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

from .errors import QasmSyntaxError

_VERSION_RE = re.compile(r"OPENQASM\s+(\d+)(?:\.(\d+))?;")
_INCLUDE_RE = re.compile(r'include\s+"([^"]*)";')
_QREG_RE = re.compile(r"qubit\[(\d+)\]\s+([A-Za-z_]\w*);")
_CREG_RE = re.compile(r"bit\[(\d+)\]\s+([A-Za-z_]\w*);")
_BARRIER_RE = re.compile(r"barrier\s+([A-Za-z_]\w*);")
_DELAY_RE = re.compile(r"delay\[(\d+(?:\.\d+)?)(ns|us|ms|s)\]\s+([A-Za-z_]\w*)\[(\d+)\];")
_MEASURE_RE = re.compile(r"([A-Za-z_]\w*)\[(\d+)\]\s*=\s*measure\s+([A-Za-z_]\w*)\[(\d+)\];")
_GATE_RE = re.compile(r"([a-z]\w*)\s+(.+);")
_ARG_RE = re.compile(r"([A-Za-z_]\w*)\[(\d+)\]")

_NS_PER_UNIT = {"ns": 1.0, "us": 1e3, "ms": 1e6, "s": 1e9}


@dataclass(frozen=True)
class QasmOp:
    """One executable statement: kind is 'gate', 'delay', 'barrier', or 'measure'."""

    kind: str
    name: str
    qubits: tuple[int, ...]
    duration_ns: float = 0.0
    clbit: int = -1


@dataclass(frozen=True)
class ParsedCircuit:
    num_qubits: int
    num_clbits: int
    ops: tuple[QasmOp, ...]
    source: str = "<qasm>"

    @cached_property
    def measure_map(self) -> tuple[int, ...]:
        """Qubit measured into each classical bit, ordered by bit index."""
        by_clbit = {op.clbit: op.qubits[0] for op in self.ops if op.kind == "measure"}
        return tuple(by_clbit[i] for i in range(self.num_clbits))

    def gate_counts(self) -> dict[str, int]:
        """Tally of executable ops by name; delays count under 'delay'.

        Barriers and measurements are excluded: barriers are scheduling
        fences with no physical action, and measurement is not subject to
        the rewrites the transpilation guard watches for.
        """
        tally: Counter[str] = Counter()
        for op in self.ops:
            if op.kind == "gate":
                tally[op.name] += 1
            elif op.kind == "delay":
                tally["delay"] += 1
        return dict(tally)


@dataclass
class _ParseState:
    source: str
    qreg: tuple[str, int] | None = None
    creg: tuple[str, int] | None = None
    version_seen: bool = False
    measuring: bool = False
    measured_clbits: set = field(default_factory=set)
    measured_qubits: set = field(default_factory=set)
    ops: list = field(default_factory=list)


def parse_qasm(text: str, *, source: str = "<qasm>") -> ParsedCircuit:
    """Parse one circuit file; raises QasmSyntaxError outside the subset."""
    state = _ParseState(source)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        _parse_statement(state, line, lineno)

    if state.qreg is None:
        raise QasmSyntaxError(f"{source}: no qubit register declared")
    num_clbits = state.creg[1] if state.creg else 0
    unwritten = set(range(num_clbits)) - state.measured_clbits
    if unwritten:
        raise QasmSyntaxError(f"{source}: classical bits never measured: {sorted(unwritten)}")
    return ParsedCircuit(num_qubits=state.qreg[1], num_clbits=num_clbits,
                         ops=tuple(state.ops), source=source)


def _parse_statement(state: _ParseState, line: str, lineno: int) -> None:
    where = f"{state.source}:{lineno}"

    if m := _VERSION_RE.fullmatch(line):
        if state.version_seen:
            raise QasmSyntaxError(f"{where}: duplicate OPENQASM version line")
        if int(m.group(1)) != 3:
            raise QasmSyntaxError(f"{where}: unsupported OpenQASM version {m.group(1)}")
        state.version_seen = True
        return
    if not state.version_seen:
        raise QasmSyntaxError(f"{where}: expected 'OPENQASM 3...;' before any statement")

    if m := _INCLUDE_RE.fullmatch(line):
        if m.group(1) != "stdgates.inc":
            raise QasmSyntaxError(f"{where}: unsupported include {m.group(1)!r}")
        return
    if m := _QREG_RE.fullmatch(line):
        if state.qreg is not None:
            raise QasmSyntaxError(f"{where}: multiple qubit registers are not supported")
        state.qreg = (m.group(2), int(m.group(1)))
        return
    if m := _CREG_RE.fullmatch(line):
        if state.creg is not None:
            raise QasmSyntaxError(f"{where}: multiple bit registers are not supported")
        state.creg = (m.group(2), int(m.group(1)))
        return

    if m := _BARRIER_RE.fullmatch(line):
        qreg = _require_qreg(state, where)
        if m.group(1) != qreg[0]:
            raise QasmSyntaxError(f"{where}: barrier on undeclared register {m.group(1)!r}")
        _forbid_after_measure(state, where, "barrier")
        state.ops.append(QasmOp("barrier", "barrier", tuple(range(qreg[1]))))
        return

    if m := _DELAY_RE.fullmatch(line):
        q = _resolve_qubit(state, m.group(3), int(m.group(4)), where)
        _forbid_after_measure(state, where, "delay")
        ns = float(m.group(1)) * _NS_PER_UNIT[m.group(2)]
        state.ops.append(QasmOp("delay", "delay", (q,), duration_ns=ns))
        return

    if m := _MEASURE_RE.fullmatch(line):
        _parse_measure(state, m, where)
        return

    if m := _GATE_RE.fullmatch(line):
        _parse_gate(state, m, where)
        return

    raise QasmSyntaxError(f"{where}: unsupported statement {line!r}")


def _parse_measure(state: _ParseState, m: re.Match, where: str) -> None:
    if state.creg is None or m.group(1) != state.creg[0]:
        raise QasmSyntaxError(f"{where}: measurement into undeclared register {m.group(1)!r}")
    clbit = int(m.group(2))
    if clbit >= state.creg[1]:
        raise QasmSyntaxError(f"{where}: classical bit c[{clbit}] out of range")
    if clbit in state.measured_clbits:
        raise QasmSyntaxError(f"{where}: classical bit c[{clbit}] already written")
    q = _resolve_qubit(state, m.group(3), int(m.group(4)), where)
    if q in state.measured_qubits:
        raise QasmSyntaxError(f"{where}: qubit q[{q}] measured twice")
    state.measuring = True
    state.measured_clbits.add(clbit)
    state.measured_qubits.add(q)
    state.ops.append(QasmOp("measure", "measure", (q,), clbit=clbit))


def _parse_gate(state: _ParseState, m: re.Match, where: str) -> None:
    name, argtext = m.group(1), m.group(2)
    _forbid_after_measure(state, where, f"gate {name!r}")
    qubits = []
    for arg in argtext.split(","):
        am = _ARG_RE.fullmatch(arg.strip())
        if not am:
            raise QasmSyntaxError(f"{where}: malformed gate argument {arg.strip()!r}")
        qubits.append(_resolve_qubit(state, am.group(1), int(am.group(2)), where))
    if len(set(qubits)) != len(qubits):
        raise QasmSyntaxError(f"{where}: gate arguments must be distinct qubits")
    state.ops.append(QasmOp("gate", name, tuple(qubits)))


def _require_qreg(state: _ParseState, where: str) -> tuple[str, int]:
    if state.qreg is None:
        raise QasmSyntaxError(f"{where}: statement before the qubit register declaration")
    return state.qreg


def _resolve_qubit(state: _ParseState, reg: str, index: int, where: str) -> int:
    qreg = _require_qreg(state, where)
    if reg != qreg[0]:
        raise QasmSyntaxError(f"{where}: reference to undeclared register {reg!r}")
    if index >= qreg[1]:
        raise QasmSyntaxError(f"{where}: qubit {reg}[{index}] out of range (register size {qreg[1]})")
    return index


def _forbid_after_measure(state: _ParseState, where: str, what: str) -> None:
    if state.measuring:
        raise QasmSyntaxError(f"{where}: {what} after measurement; "
                              "measurements must form the final section")
