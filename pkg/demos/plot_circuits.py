"""
EWL games as OpenQASM circuits
==============================

A two-player EWL game compiles to a short circuit of IBM ``u2`` and ``cx``
gates. This demo emits the circuit for one profile, parses it back and
samples measurement outcomes.
"""
import math

from ewl import IDENTITY, IX, UnitaryStrategy, emit_ewl_qasm, parse_qasm, simulate_shots, to_ibm_params
from ewl.qasm import circuit_distribution

###############################################################################
# Strategies as IBM gates
# -----------------------
# ``to_ibm_params`` returns the gate and the global phase it drops.

shift = UnitaryStrategy(math.pi / 2, 0, -math.pi / 2)
half = UnitaryStrategy(math.pi / 2, 0, 0)
for s in (shift, half, IDENTITY):
    gate, phase = to_ibm_params(s)
    print(f"{s.literal:18s} -> {gate.qasm()}  phase {phase}")

###############################################################################
# The circuit
# -----------
# Player 1 acts on ``q[1]`` and player 2 on ``q[0]``, between the entangler
# and its inverse.

text = emit_ewl_qasm((shift, half))
print(text)

###############################################################################
# Measurement statistics
# ----------------------
# Keys read ``c[1] c[0]``, that is player 1's bit first.

for other in (half, IDENTITY, IX):
    circuit = parse_qasm(emit_ewl_qasm((shift, other)))
    exact = {k: round(p, 6) for k, p in circuit_distribution(circuit).items() if p > 1e-12}
    hist = simulate_shots(circuit, shots=8192, seed=42)
    print(other.literal, exact, hist.counts)
