"""IBM gate conversion, OpenQASM 2.0 emission/parsing and shot sampling.

Circuits follow the two-qubit EWL layout used on IBM hardware: qubit
``q[1]`` carries player 1 and ``q[0]`` player 2, so a histogram key
``c[1]c[0]`` reads as (player 1 bit, player 2 bit).
"""

from dataclasses import dataclass, field
import math
import re
from pathlib import Path

import numpy as np

from ._expr import eval_real, split_top_level
from .quantum import su2_matrix

MAX_SIM_QUBITS = 8
RNG_ALGORITHM = "PCG64"
HALF_PI = math.pi / 2
GATE_ARITY = {"u1": (1, 1), "u2": (2, 1), "u3": (3, 1), "x": (0, 1), "cx": (0, 2)}


def _wrap(x):
    # Reduce to (-pi, pi]; exact multiples of pi/2 stay exact.
    r = math.remainder(x, 2 * math.pi)
    return math.pi if r <= -math.pi else r


@dataclass(frozen=True)
class Gate:
    """One gate application: ``name`` in u1/u2/u3/x/cx with its angles and qubits."""

    name: str
    params: tuple = ()
    qubits: tuple = (0,)

    def __post_init__(self):
        if self.name not in GATE_ARITY:
            raise ValueError(f"unsupported gate {self.name!r}")
        n_params, n_qubits = GATE_ARITY[self.name]
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.params) != n_params or len(self.qubits) != n_qubits:
            raise ValueError(f"{self.name} takes {n_params} parameters and {n_qubits} qubits")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate operands must be distinct")

    def on(self, *qubits):
        return Gate(self.name, self.params, qubits)

    def matrix(self):
        """Unitary for single-qubit gates, cx as a 4x4 on (control, target)."""
        if self.name == "cx":
            return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
        if self.name == "x":
            return np.array([[0, 1], [1, 0]], dtype=complex)
        if self.name == "u1":
            return u3_matrix(0.0, 0.0, self.params[0])
        if self.name == "u2":
            return u3_matrix(HALF_PI, *self.params)
        return u3_matrix(*self.params)

    def qasm(self, qreg="q"):
        ops = ", ".join(f"{qreg}[{q}]" for q in self.qubits)
        if self.params:
            return f"{self.name}({', '.join(repr(p) for p in self.params)}) {ops};"
        return f"{self.name} {ops};"


def u3_matrix(theta, phi, lam):
    """IBM ``u3`` with ``cos(theta/2)`` in both diagonal entries."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -np.exp(1j * lam) * s],
                     [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]])


def to_ibm_params(s, qubit=0):
    """IBM gate realising ``U(theta, alpha, beta)`` up to a global phase.

    Returns ``(gate, phase)`` with ``exp(i phase) * gate.matrix() ==
    su2_matrix(s)``. ``u2`` is used when ``theta == pi/2`` and ``u1`` when
    ``theta == 0``.
    """
    phi = _wrap(HALF_PI - s.alpha - s.beta)
    lam = _wrap(s.beta - s.alpha - HALF_PI)
    if s.theta == 0.0:
        gate = Gate("u1", (_wrap(phi + lam),), (qubit,))
    elif s.theta == HALF_PI:
        gate = Gate("u2", (phi, lam), (qubit,))
    else:
        gate = Gate("u3", (s.theta, phi, lam), (qubit,))
    return gate, s.alpha


def entangler_decomposition():
    """Gate lists for J and J^dagger on qubits 0 (control) and 1."""
    cx = Gate("cx", (), (0, 1))
    j = [cx, Gate("u2", (HALF_PI, -HALF_PI), (0,)), cx]
    j_dag = [cx, Gate("u2", (-HALF_PI, HALF_PI), (0,)), cx]
    return j, j_dag


@dataclass
class QasmCircuit:
    qreg_size: int
    creg_size: int
    gates: list = field(default_factory=list)
    measurements: list = field(default_factory=list)  # (qubit, clbit) in program order
    qreg: str = "q"
    creg: str = "c"
    include: str = "qelib1.inc"

    def __post_init__(self):
        for g in self.gates:
            if any(not 0 <= q < self.qreg_size for q in g.qubits):
                raise ValueError(f"gate {g.qasm(self.qreg)} addresses a qubit outside {self.qreg}")
        for q, c in self.measurements:
            if not (0 <= q < self.qreg_size and 0 <= c < self.creg_size):
                raise ValueError(f"measurement {q}->{c} outside the registers")

    def to_qasm(self):
        lines = ["OPENQASM 2.0;"]
        if self.include is not None:
            lines.append(f'include "{self.include}";')
        lines += [f"qreg {self.qreg}[{self.qreg_size}];", f"creg {self.creg}[{self.creg_size}];"]
        lines += [g.qasm(self.qreg) for g in self.gates]
        lines += [f"measure {self.qreg}[{q}] -> {self.creg}[{c}];" for q, c in self.measurements]
        return "\n".join(lines) + "\n"

    def touched_qubits(self):
        used = {q for g in self.gates for q in g.qubits} | {q for q, _ in self.measurements}
        return sorted(used)


def ewl_circuit(profile):
    """Two-player EWL circuit in the register layout of the IBM listing."""
    s1, s2 = profile
    j, j_dag = entangler_decomposition()
    g2, _ = to_ibm_params(s2, qubit=0)
    g1, _ = to_ibm_params(s1, qubit=1)
    return QasmCircuit(15, 5, j + [g2, g1] + j_dag, [(0, 0), (1, 1)])


def emit_ewl_qasm(profile):
    return ewl_circuit(profile).to_qasm()


class QasmError(ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column


_ID = r"[A-Za-z_]\w*"
_ARG = rf"({_ID})\s*\[\s*(\d+)\s*\]"
_PATTERNS = [
    ("header", re.compile(r"OPENQASM\s+(\d+\.\d+)")),
    ("include", re.compile(r'include\s+"([^"]*)"')),
    ("qreg", re.compile(rf"qreg\s+{_ARG}")),
    ("creg", re.compile(rf"creg\s+{_ARG}")),
    ("measure", re.compile(rf"measure\s+{_ARG}\s*->\s*{_ARG}")),
    ("gate", re.compile(rf"({_ID})\s*(?:\((.*)\))?\s+(.+)", re.S)),
]
_OPERAND = re.compile(rf"^\s*{_ARG}\s*$")


def _statements(text):
    """Yield ``(statement, line, column)`` for each ``;``-terminated statement."""
    line, col = 1, 1
    buf, start = [], None
    k = 0
    while k < len(text):
        ch = text[k]
        if text.startswith("//", k):
            while k < len(text) and text[k] != "\n":
                k += 1
            continue
        if ch == ";":
            yield "".join(buf).strip(), start or (line, col)
            buf, start = [], None
        else:
            if start is None and not ch.isspace():
                start = (line, col)
            if start is not None:
                buf.append(ch)
        if ch == "\n":
            line, col = line + 1, 1
        else:
            col += 1
        k += 1
    if "".join(buf).strip():
        raise QasmError("missing ';' at end of statement", *start)


def parse_qasm(text):
    """Parse the OpenQASM 2.0 subset used for EWL circuits.

    Accepted statements: the header, ``include``, one ``qreg`` and one
    ``creg``, ``u1``/``u2``/``u3``/``x``/``cx`` gates and ``measure``.
    Measurements must come after all gates.
    """
    regs, include, header = {}, None, False
    gates, measures = [], []
    for stmt, (line, col) in _statements(text):
        kind, match = next(((k, p.fullmatch(stmt)) for k, p in _PATTERNS if p.fullmatch(stmt)),
                           (None, None))
        if kind is None:
            raise QasmError(f"syntax error in {stmt!r}", line, col)
        if not header and kind != "header":
            raise QasmError("program must start with 'OPENQASM 2.0;'", line, col)
        if kind == "header":
            if header or match.group(1) != "2.0":
                raise QasmError("expected a single 'OPENQASM 2.0' header", line, col)
            header = True
        elif kind == "include":
            include = match.group(1)
        elif kind in ("qreg", "creg"):
            if kind in regs:
                raise QasmError(f"only one {kind} is supported", line, col)
            regs[kind] = (match.group(1), int(match.group(2)))
        elif kind == "measure":
            q, c = _resolve(regs, "qreg", match.group(1), match.group(2), line, col), \
                _resolve(regs, "creg", match.group(3), match.group(4), line, col)
            measures.append((q, c))
        else:
            name, params, operands = match.group(1), match.group(2), match.group(3)
            if name not in GATE_ARITY:
                raise QasmError(f"unsupported gate {name!r}", line, col)
            if measures:
                raise QasmError("gates after measurement are not supported", line, col)
            try:
                values = [eval_real(p) for p in split_top_level(params)] if params else []
            except ValueError as exc:
                raise QasmError(str(exc), line, col) from None
            qubits = []
            for op in split_top_level(operands):
                m = _OPERAND.match(op)
                if not m:
                    raise QasmError(f"bad operand {op.strip()!r}", line, col)
                qubits.append(_resolve(regs, "qreg", m.group(1), m.group(2), line, col))
            n_params, n_qubits = GATE_ARITY[name]
            if len(values) != n_params or len(qubits) != n_qubits:
                raise QasmError(f"{name} takes {n_params} parameters and {n_qubits} qubits", line, col)
            try:
                gates.append(Gate(name, values, qubits))
            except ValueError as exc:
                raise QasmError(str(exc), line, col) from None
    if "qreg" not in regs or "creg" not in regs:
        raise QasmError("program declares no qreg/creg", 1, 1)
    (qname, qsize), (cname, csize) = regs["qreg"], regs["creg"]
    return QasmCircuit(qsize, csize, gates, measures, qname, cname, include)


def _resolve(regs, kind, name, index, line, col):
    if kind not in regs or regs[kind][0] != name:
        raise QasmError(f"unknown register {name!r}", line, col)
    index = int(index)
    if index >= regs[kind][1]:
        raise QasmError(f"{name}[{index}] out of range (size {regs[kind][1]})", line, col)
    return index


# --- simulation -----------------------------------------------------------------

def _apply(state, matrix, axes):
    k = len(axes)
    op = matrix.reshape((2,) * (2 * k))
    moved = np.tensordot(op, state, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(moved, list(range(k)), list(axes))


def circuit_state(circuit):
    """Final state over the touched qubits, one tensor axis per qubit (sorted)."""
    touched = circuit.touched_qubits()
    if len(touched) > MAX_SIM_QUBITS:
        raise ValueError(f"circuit touches {len(touched)} qubits, simulator limit is {MAX_SIM_QUBITS}")
    axis = {q: k for k, q in enumerate(touched)}
    state = np.zeros((2,) * len(touched), dtype=complex)
    state[(0,) * len(touched)] = 1.0
    for g in circuit.gates:
        state = _apply(state, g.matrix(), [axis[q] for q in g.qubits])
    return touched, state


def circuit_distribution(circuit):
    """Exact probability of each classical bitstring (highest clbit leftmost)."""
    touched, state = circuit_state(circuit)
    probs = np.abs(state) ** 2
    width = max(c for _, c in circuit.measurements) + 1 if circuit.measurements else 0
    axis = {q: k for k, q in enumerate(touched)}
    dist = {}
    for idx in np.ndindex(probs.shape):
        p = float(probs[idx])
        bits = ["0"] * width
        for q, c in circuit.measurements:
            bits[width - 1 - c] = str(idx[axis[q]])
        key = "".join(bits)
        dist[key] = dist.get(key, 0.0) + p
    return dict(sorted(dist.items()))


@dataclass
class ShotHistogram:
    shots: int
    counts: dict
    seed: int
    algorithm: str = RNG_ALGORITHM

    def frequencies(self):
        return {k: v / self.shots for k, v in self.counts.items()}

    def to_csv(self):
        return "bitstring,count\n" + "".join(f"{k},{v}\n" for k, v in sorted(self.counts.items()))

    def write_csv(self, path):
        with open(Path(path), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())


def simulate_shots(circuit, shots, seed=42):
    """Sample the measured register ``shots`` times with a seeded PCG64 generator."""
    if shots < 1:
        raise ValueError("shots must be positive")
    dist = circuit_distribution(circuit)
    keys = list(dist)
    probs = np.clip(np.array([dist[k] for k in keys]), 0.0, None)
    counts = np.random.default_rng(seed).multinomial(shots, probs / probs.sum())
    return ShotHistogram(shots, {k: int(n) for k, n in zip(keys, counts) if n}, seed)


def unitary_of(gates, n_qubits=2):
    """Dense unitary of a gate list; qubit 0 is the least significant bit."""
    dim = 2 ** n_qubits
    cols = []
    for k in range(dim):
        state = np.zeros((2,) * n_qubits, dtype=complex)
        # axis a holds qubit n-1-a so that the flattened index is little-endian
        bits = [(k >> (n_qubits - 1 - a)) & 1 for a in range(n_qubits)]
        state[tuple(bits)] = 1.0
        for g in gates:
            state = _apply(state, g.matrix(), [n_qubits - 1 - q for q in g.qubits])
        cols.append(state.reshape(-1))
    return np.column_stack(cols)


def matches_su2(gate, phase, s, tol=1e-12):
    return np.allclose(np.exp(1j * phase) * gate.matrix(), su2_matrix(s), atol=tol, rtol=0)
