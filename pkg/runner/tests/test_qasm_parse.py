"""Parser tests: the emitted grammar round-trips, everything else is rejected."""

import pytest

from crossbench_runner import QasmSyntaxError, parse_qasm

HEADER = 'OPENQASM 3.0;\ninclude "stdgates.inc";\n'


def program(*body: str, qubits: int = 3, clbits: int = 2,
            measures: str = "c[0] = measure q[0];\nc[1] = measure q[1];") -> str:
    lines = [HEADER, f"qubit[{qubits}] q;", f"bit[{clbits}] c;", *body, measures]
    return "\n".join(lines) + "\n"


class TestGrammar:
    def test_minimal_program_structure(self):
        parsed = parse_qasm(program("h q[0];", "cz q[0], q[1];", "barrier q;"))
        assert parsed.num_qubits == 3
        assert parsed.num_clbits == 2
        kinds = [(op.kind, op.name, op.qubits) for op in parsed.ops]
        assert kinds == [
            ("gate", "h", (0,)),
            ("gate", "cz", (0, 1)),
            ("barrier", "barrier", (0, 1, 2)),
            ("measure", "measure", (0,)),
            ("measure", "measure", (1,)),
        ]

    def test_measure_map_orders_by_classical_bit(self):
        text = program(measures="c[1] = measure q[2];\nc[0] = measure q[0];")
        assert parse_qasm(text).measure_map == (0, 2)

    def test_delay_units_normalize_to_ns(self):
        parsed = parse_qasm(program("delay[3200ns] q[1];", "delay[2us] q[0];"))
        delays = [op.duration_ns for op in parsed.ops if op.kind == "delay"]
        assert delays == [3200.0, 2000.0]

    def test_comments_and_blank_lines_are_skipped(self):
        text = HEADER + "\n// a note\n\nqubit[1] q;\nbit[1] c;\n// more\nc[0] = measure q[0];\n"
        assert parse_qasm(text).num_qubits == 1

    def test_gate_counts_tally_delays_but_not_barriers(self):
        parsed = parse_qasm(program("x q[0];", "x q[0];", "barrier q;",
                                    "delay[10ns] q[0];", "sx q[1];"))
        assert parsed.gate_counts() == {"x": 2, "delay": 1, "sx": 1}

    def test_no_classical_register_is_allowed_grammatically(self):
        text = HEADER + "qubit[2] q;\nx q[0];\n"
        parsed = parse_qasm(text)
        assert parsed.num_clbits == 0 and parsed.measure_map == ()


class TestRejections:
    def test_version_line_must_come_first(self):
        with pytest.raises(QasmSyntaxError, match="before any statement"):
            parse_qasm('include "stdgates.inc";\nOPENQASM 3.0;\n')

    def test_wrong_major_version(self):
        with pytest.raises(QasmSyntaxError, match="unsupported OpenQASM version 2"):
            parse_qasm("OPENQASM 2.0;\nqubit[1] q;\n")

    def test_unknown_include(self):
        with pytest.raises(QasmSyntaxError, match="unsupported include"):
            parse_qasm('OPENQASM 3.0;\ninclude "qelib1.inc";\n')

    def test_gate_before_register_declaration(self):
        with pytest.raises(QasmSyntaxError, match="before the qubit register"):
            parse_qasm(HEADER + "x q[0];\n")

    def test_qubit_index_out_of_range(self):
        with pytest.raises(QasmSyntaxError, match=r"q\[5\] out of range"):
            parse_qasm(program("x q[5];"))

    def test_duplicate_gate_arguments(self):
        with pytest.raises(QasmSyntaxError, match="distinct"):
            parse_qasm(program("cz q[1], q[1];"))

    def test_classical_bit_written_twice(self):
        with pytest.raises(QasmSyntaxError, match=r"c\[0\] already written"):
            parse_qasm(program(measures="c[0] = measure q[0];\nc[0] = measure q[1];"))

    def test_classical_bit_never_written(self):
        with pytest.raises(QasmSyntaxError, match="never measured"):
            parse_qasm(program(measures="c[0] = measure q[0];"))

    def test_gate_after_measurement(self):
        text = program() + "x q[2];\n"
        with pytest.raises(QasmSyntaxError, match="after measurement"):
            parse_qasm(text)

    def test_unsupported_statement_names_the_line(self):
        with pytest.raises(QasmSyntaxError, match="fixture.qasm:6"):
            parse_qasm(program("if (c[0]) x q[0];"), source="fixture.qasm")

    def test_second_qubit_register(self):
        with pytest.raises(QasmSyntaxError, match="multiple qubit registers"):
            parse_qasm(HEADER + "qubit[2] q;\nqubit[2] r;\n")

    def test_bad_delay_unit(self):
        with pytest.raises(QasmSyntaxError, match="unsupported statement"):
            parse_qasm(program("delay[10ks] q[0];"))

    def test_measuring_one_qubit_twice(self):
        with pytest.raises(QasmSyntaxError, match="measured twice"):
            parse_qasm(program(measures="c[0] = measure q[0];\nc[1] = measure q[0];"))


class TestAgainstGeneratedSet:
    def test_every_emitted_circuit_parses_and_matches_metadata(self, bench_dir, metadata):
        emit_names = {g["name"]: g["emit_name"] for g in metadata["gate_set"]["gates"]}
        for key, record in metadata["circuits"].items():
            parsed = parse_qasm((bench_dir / f"{key}.qasm").read_text(), source=key)
            assert parsed.num_qubits == metadata["topology"]["num_qubits"]
            assert parsed.num_clbits == record["spectator_count"]
            assert parsed.measure_map == tuple(record["spectator_qubits"])

    def test_body_tallies_follow_the_placement_record(self, bench_dir, metadata):
        # sx and cz never appear in preparation sequences, so their tallies
        # are exactly depth x group-count.
        record = metadata["circuits"]["SX_CZ"]
        parsed = parse_qasm((bench_dir / "SX_CZ.qasm").read_text())
        tally = parsed.gate_counts()
        assert tally["sx"] == record["spectator_depth"] * len(record["spectator_groups"])
        assert tally["cz"] == record["driver_depth"] * len(record["driver_groups"])
        if record["delay_ns"] > 0:
            assert tally["delay"] == record["spectator_count"]
