import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from ewl.games import PRISONERS_DILEMMA
from ewl.qasm import (Gate, QasmError, circuit_distribution, emit_ewl_qasm, entangler_decomposition,
                      ewl_circuit, matches_su2, parse_qasm, simulate_shots, to_ibm_params,
                      u3_matrix, unitary_of)
from ewl.quantum import IDENTITY, IX, UnitaryStrategy, entangler, final_state, outcome_distribution, su2_matrix
from ewl.reproduce import REFERENCE_LISTING

PI = math.pi
SHIFT = UnitaryStrategy(PI / 2, 0, -PI / 2)
HALF = UnitaryStrategy(PI / 2)
angles = st.floats(-2 * PI, 2 * PI)
strategies_ = st.builds(UnitaryStrategy, st.floats(0, PI), angles, angles)
HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def equal_up_to_phase(a, b, tol):
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    phase = a[k] / b[k]
    return abs(abs(phase) - 1) < tol and np.allclose(a, phase * b, atol=tol)


def three_sigma(count, shots, p):
    return abs(count - shots * p) <= 3 * math.sqrt(shots * p * (1 - p)) + 1e-9


class TestIbmParams:
    def test_u3_convention(self):
        m = u3_matrix(0.7, 0.2, -1.1)
        assert np.isclose(m[1, 1], np.exp(1j * (0.2 - 1.1)) * math.cos(0.35))

    def test_reference_u2(self):
        g, phase = to_ibm_params(SHIFT)
        assert g.name == "u2" and np.allclose(g.params, (PI, PI), atol=1e-12) and phase == 0
        g, phase = to_ibm_params(HALF)
        assert g.name == "u2" and np.allclose(g.params, (PI / 2, -PI / 2), atol=1e-12) and phase == 0
        assert equal_up_to_phase(Gate("u2", (PI, PI), (0,)).matrix(), su2_matrix(SHIFT), 1e-12)
        assert equal_up_to_phase(Gate("u2", (PI / 2, -PI / 2), (0,)).matrix(), su2_matrix(HALF), 1e-12)

    def test_identity(self):
        g, phase = to_ibm_params(IDENTITY)
        assert g.name == "u1" and matches_su2(g, phase, IDENTITY)

    @settings(max_examples=300, deadline=None)
    @given(strategies_)
    def test_phase_exact(self, s):
        g, phase = to_ibm_params(s)
        assert np.allclose(np.exp(1j * phase) * g.matrix(), su2_matrix(s), atol=1e-12)
        assert all(-PI < p <= PI for p in g.params[-2:]) if g.name != "u1" else True

    def test_gate_validation(self):
        with pytest.raises(ValueError):
            Gate("u2", (1.0,), (0,))
        with pytest.raises(ValueError):
            Gate("cx", (), (1, 1))


class TestEntangler:
    def test_decomposition(self):
        j, j_dag = entangler_decomposition()
        uj, uj_dag = unitary_of(j), unitary_of(j_dag)
        # unitary_of is little-endian (qubit 0 lowest); J is symmetric under the swap
        assert equal_up_to_phase(uj, entangler(2), 1e-10)
        assert equal_up_to_phase(uj_dag, entangler(2).conj().T, 1e-10)
        assert equal_up_to_phase(uj_dag @ uj, np.eye(4), 1e-12)
        assert equal_up_to_phase(uj @ [1, 0, 0, 0], np.array([1, 0, 0, 1j]) / math.sqrt(2), 1e-12)


class TestEmit:
    def test_appendix_byte_for_byte(self):
        assert emit_ewl_qasm((SHIFT, HALF)) == REFERENCE_LISTING

    def test_identity_profile(self):
        dist = circuit_distribution(parse_qasm(emit_ewl_qasm((IDENTITY, IDENTITY))))
        assert dist["00"] == pytest.approx(1.0) and sum(dist.values()) == pytest.approx(1.0)

    def test_shift_vs_identity(self):
        dist = circuit_distribution(ewl_circuit((SHIFT, IDENTITY)))
        assert dist["00"] == pytest.approx(0.5) and dist["01"] == pytest.approx(0.5)

    @settings(max_examples=200, deadline=None)
    @given(strategies_, strategies_)
    def test_round_trip_and_distribution(self, s1, s2):
        text = emit_ewl_qasm((s1, s2))
        circuit = parse_qasm(text)
        assert circuit.to_qasm() == text
        dist = circuit_distribution(circuit)
        engine = outcome_distribution(final_state(PRISONERS_DILEMMA, [s1, s2]))
        # key c1 c0 is (player 1 bit, player 2 bit), the engine's basis label j1 j2
        for k in range(4):
            assert abs(dist.get(format(k, "02b"), 0.0) - engine[k]) < 1e-12


class TestParse:
    def test_appendix(self):
        c = parse_qasm(REFERENCE_LISTING)
        assert (c.qreg_size, c.creg_size) == (15, 5)
        assert len(c.gates) == 8 and c.measurements == [(0, 0), (1, 1)]
        assert c.touched_qubits() == [0, 1]

    def test_out_of_range(self):
        with pytest.raises(QasmError) as info:
            parse_qasm(HEADER + "qreg q[2];\ncreg c[2];\nx q[5];\n")
        assert info.value.line == 5 and info.value.column == 1
        with pytest.raises(QasmError) as info:
            parse_qasm("OPENQASM 2.0; qreg q[2]; x q[5];")
        assert info.value.line == 1 and info.value.column == 26

    def test_errors(self):
        cases = {
            "qreg q[2];": "OPENQASM",
            HEADER + "qreg q[2];\ncreg c[2];\nh q[0];\n": "unsupported",
            HEADER + "qreg q[2];\ncreg c[2];\nu2(1) q[0];\n": "u2",
            HEADER + "qreg q[2];\ncreg c[2];\nu1(0) q[0]\n": "missing",
            HEADER + "qreg q[2];\ncreg c[2];\nmeasure q[0] -> c[0];\nx q[0];\n": "after",
            HEADER + "qreg q[2];\ncreg c[2];\nbarrier;\n": "syntax",
        }
        for text, fragment in cases.items():
            with pytest.raises(QasmError, match=fragment):
                parse_qasm(text)

    def test_comments_and_x(self):
        c = parse_qasm(HEADER + "// flip\nqreg q[1];\ncreg c[1];\nx q[0];\nmeasure q[0] -> c[0];\n")
        assert circuit_distribution(c) == pytest.approx({"0": 0.0, "1": 1.0})


class TestShots:
    def test_reference_histograms(self):
        h = simulate_shots(parse_qasm(REFERENCE_LISTING), 8192, seed=42)
        assert h.counts == {"01": 8192}
        for other in (IDENTITY, IX):
            h = simulate_shots(ewl_circuit((SHIFT, other)), 8192, seed=42)
            assert set(h.counts) == {"00", "01"} and sum(h.counts.values()) == 8192
            assert three_sigma(h.counts["00"], 8192, 0.5)

    def test_deterministic(self):
        c = ewl_circuit((UnitaryStrategy(1.0, 0.4, 2.0), UnitaryStrategy(2.0, 1.0, 0.3)))
        assert simulate_shots(c, 1000, 7) == simulate_shots(c, 1000, 7)
        assert simulate_shots(c, 1000, 7).algorithm == "PCG64"

    def test_csv(self, tmp_path):
        h = simulate_shots(ewl_circuit((SHIFT, IDENTITY)), 100, 1)
        h.write_csv(tmp_path / "h.csv")
        lines = (tmp_path / "h.csv").read_text().splitlines()
        assert lines[0] == "bitstring,count"
        assert sum(int(l.split(",")[1]) for l in lines[1:]) == 100

    def test_validation(self):
        with pytest.raises(ValueError):
            simulate_shots(ewl_circuit((IDENTITY, IDENTITY)), 0)

    def test_within_three_sigma(self):
        rng = np.random.default_rng(42)
        for _ in range(30):
            t = rng.uniform(0, PI, 2)
            a, b = rng.uniform(0, 2 * PI, (2, 2))
            c = ewl_circuit((UnitaryStrategy(t[0], a[0], b[0]), UnitaryStrategy(t[1], a[1], b[1])))
            h = simulate_shots(c, 8192, seed=42)
            for k, p in circuit_distribution(c).items():
                assert three_sigma(h.counts.get(k, 0), 8192, p)
