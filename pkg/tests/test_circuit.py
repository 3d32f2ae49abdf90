import math

import numpy as np
import pytest

from ketsim import (
    CapacityExceeded,
    CircuitProgram,
    Instruction,
    InvalidInput,
    ParseError,
    RngStream,
    StateVector,
    TruthTable,
    bell_pair,
    parse_circuit,
    render_circuit,
    run_program,
    states_equivalent,
)

TABLES = {"f": TruthTable(1, (0, 1)), "g2": TruthTable(2, (0, 1, 1, 0))}


class TestParse:
    def test_bell_preparation(self):
        program = parse_circuit("h 0\ncnot 0 1")
        assert program.num_qubits == 2
        assert [ins.opcode for ins in program.instructions] == ["H", "CNOT"]
        final = run_program(program)
        assert states_equivalent(final, bell_pair(0, 0), tol=1e-9)

    def test_empty_program_valid(self):
        program = parse_circuit("")
        assert program == CircuitProgram(num_qubits=0, instructions=())

    def test_comments_and_blank_lines(self):
        program = parse_circuit("# nothing\n\nqubits 1\n  x 0  # flip\n")
        assert program.instructions == (Instruction("X", (0,)),)

    def test_declared_width_enforced(self):
        with pytest.raises(ParseError) as err:
            parse_circuit("qubits 2\nx 5")
        assert err.value.line == 2
        assert "out of range" in str(err.value)

    def test_width_inferred_without_directive(self):
        assert parse_circuit("x 5").num_qubits == 6

    def test_unknown_opcode(self):
        with pytest.raises(ParseError) as err:
            parse_circuit("qubits 1\nfoo 0")
        assert err.value.line == 2

    def test_arity_mismatch(self):
        with pytest.raises(ParseError):
            parse_circuit("cnot 0")

    def test_duplicate_target(self):
        with pytest.raises(ParseError):
            parse_circuit("cnot 1 1")

    def test_u2_params(self):
        program = parse_circuit("u2 0 a=0.1 b=0.2 c=0.3 d=0.4")
        assert program.instructions[0].params == (0.1, 0.2, 0.3, 0.4)

    def test_u2_params_any_order(self):
        program = parse_circuit("u2 0 d=4 c=3 b=2 a=1")
        assert program.instructions[0].params == (1.0, 2.0, 3.0, 4.0)

    def test_u2_missing_param(self):
        with pytest.raises(ParseError) as err:
            parse_circuit("u2 0 a=0.1 b=0.2 c=0.3")
        assert "missing" in str(err.value)

    def test_oracle_requires_loaded_table(self):
        with pytest.raises(ParseError):
            parse_circuit("oracle f 0 1")
        program = parse_circuit("oracle f 0 1", TABLES)
        assert program.instructions[0].table == "f"

    def test_oracle_arity_checked(self):
        with pytest.raises(ParseError):
            parse_circuit("oracle g2 0 1", TABLES)

    def test_measure_all_only_trailing(self):
        with pytest.raises(ParseError) as err:
            parse_circuit("qubits 2\nmeasure\nx 0")
        assert err.value.line == 3
        parse_circuit("qubits 2\nmeasure 0\nx 0")  # subset measure is fine

    def test_duplicate_qubits_directive(self):
        with pytest.raises(ParseError):
            parse_circuit("qubits 2\nqubits 3")


class TestRender:
    PROGRAMS = [
        CircuitProgram(2, (Instruction("H", (0,)), Instruction("CNOT", (0, 1)))),
        CircuitProgram(
            3,
            (
                Instruction("U2", (1,), params=(0.1, -2.5, math.pi, 4e-3)),
                Instruction("ORACLE", (0, 1), table="f"),
                Instruction("MEASURE", (2,)),
                Instruction("TOFFOLI", (0, 1, 2)),
                Instruction("MEASURE", ()),
            ),
        ),
        CircuitProgram(1, ()),
    ]

    @pytest.mark.parametrize("program", PROGRAMS)
    def test_round_trip(self, program):
        assert parse_circuit(render_circuit(program), TABLES) == program

    def test_random_round_trip(self):
        rng = RngStream(1)
        opcodes = ["X", "Y", "Z", "H", "CNOT", "TOFFOLI", "U2"]
        for _ in range(25):
            n = 4
            instructions = []
            for _ in range(6):
                op = opcodes[rng.next_u64() % len(opcodes)]
                arity = {"CNOT": 2, "TOFFOLI": 3}.get(op, 1)
                targets = []
                while len(targets) < arity:
                    t = int(rng.next_u64() % n)
                    if t not in targets:
                        targets.append(t)
                params = (
                    tuple(rng.uniform() * 7 - 3 for _ in range(4)) if op == "U2" else ()
                )
                instructions.append(Instruction(op, tuple(targets), params=params))
            program = CircuitProgram(n, tuple(instructions))
            assert parse_circuit(render_circuit(program), TABLES) == program


class TestRun:
    def test_deterministic_final_state(self):
        program = parse_circuit("qubits 1\nh 0\nz 0\nh 0")
        final = run_program(program)
        assert isinstance(final, StateVector)
        assert np.allclose(final.amplitudes, [0, 1], atol=1e-12)

    def test_bell_counts(self):
        program = parse_circuit("qubits 2\nh 0\ncnot 0 1\nmeasure")
        hist = run_program(program, shots=2000, seed=7)
        assert set(hist.counts) == {"00", "11"}
        assert sum(hist.counts.values()) == 2000

    def test_mid_circuit_measurement(self):
        # measuring one half of the pair makes the other classical
        program = parse_circuit("qubits 2\nh 0\ncnot 0 1\nmeasure 0\nmeasure 1")
        hist = run_program(program, shots=500, seed=1)
        assert set(hist.counts) <= {"00", "11"}

    def test_oracle_instruction(self):
        program = parse_circuit("qubits 2\nx 0\noracle f 0 1", TABLES)
        final = run_program(program, TABLES)
        assert np.array_equal(np.abs(final.amplitudes), [0, 0, 0, 1])

    def test_seed_determinism(self):
        program = parse_circuit("qubits 3\nh 0\nh 1\ntoffoli 0 1 2\nmeasure")
        a = run_program(program, shots=300, seed=5)
        b = run_program(program, shots=300, seed=5)
        assert a == b

    def test_zero_qubits_rejected(self):
        with pytest.raises(InvalidInput):
            run_program(CircuitProgram(0, ()))

    def test_cap_enforced(self):
        program = parse_circuit("qubits 6\nx 0")
        with pytest.raises(CapacityExceeded):
            run_program(program, cap=4)
