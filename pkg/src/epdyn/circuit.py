"""Gate-level circuit representation and the synthesis primitives.

Gate set: RX, RY, RZ (R_a(t) = exp(-i t sigma_a / 2)), H, X and CNOT.
Qubit indexing is global and little-endian (qubit 0 = least significant bit of
the statevector index).  Circuit equivalences are always up to global phase.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliTerm

ROTATION_KINDS = ("RX", "RY", "RZ")
GATE_KINDS = ROTATION_KINDS + ("H", "X", "CNOT")

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULIS = {
    "RX": np.array([[0, 1], [1, 0]], dtype=complex),
    "RY": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "RZ": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == "CNOT":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("CNOT needs distinct control and target")
            if self.angle is not None:
                raise ValueError("CNOT takes no angle")
        else:
            if len(self.qubits) != 1:
                raise ValueError(f"{self.kind} acts on one qubit")
            if self.kind in ROTATION_KINDS and self.angle is None:
                raise ValueError(f"{self.kind} needs an angle")
            if self.kind in ("H", "X") and self.angle is not None:
                raise ValueError(f"{self.kind} takes no angle")

    def matrix(self) -> np.ndarray:
        """Unitary of the gate on its own qubits (first listed qubit = LSB)."""
        if self.kind == "H":
            return _H
        if self.kind == "X":
            return _X
        if self.kind in ROTATION_KINDS:
            p = _PAULIS[self.kind]
            return (np.cos(self.angle / 2) * np.eye(2)
                    - 1j * np.sin(self.angle / 2) * p)
        # CNOT, basis index = control_bit + 2 * target_bit
        m = np.zeros((4, 4), dtype=complex)
        for c in range(2):
            for t in range(2):
                m[c + 2 * (t ^ c), c + 2 * t] = 1.0
        return m

    def inverse(self) -> "Gate":
        if self.kind in ROTATION_KINDS:
            return Gate(self.kind, self.qubits, -self.angle)
        return self  # H, X and CNOT are involutions


@dataclass
class Circuit:
    n_qubits: int
    gates: list = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            self._check(g)

    def _check(self, gate: Gate):
        if any(q >= self.n_qubits or q < 0 for q in gate.qubits):
            raise ValueError(f"gate {gate} outside qubit range {self.n_qubits}")

    def add(self, kind: str, *qubits, angle: float | None = None):
        g = Gate(kind, tuple(qubits), angle)
        self._check(g)
        self.gates.append(g)
        return self

    def extend(self, other: "Circuit"):
        """Append another circuit's gates (same global index space)."""
        for g in other.gates:
            self._check(g)
            self.gates.append(g)
        return self

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits, [g.inverse() for g in reversed(self.gates)])

    def copy(self) -> "Circuit":
        return Circuit(self.n_qubits, list(self.gates))

    def __len__(self):
        return len(self.gates)


def gate_counts(circuit: Circuit) -> dict:
    """Tally gates by arity: {'cnot': n2, 'single_qubit': n1}."""
    cnot = sum(1 for g in circuit.gates if g.kind == "CNOT")
    return {"cnot": cnot, "single_qubit": len(circuit.gates) - cnot}


def apply_gate(state: np.ndarray, gate: Gate, n_qubits: int) -> np.ndarray:
    """Apply a gate to a statevector (or a batch stacked along the last axis).

    state has shape (2**n_qubits,) or (2**n_qubits, batch).
    """
    batched = state.ndim == 2
    batch = state.shape[1] if batched else 1
    t = state.reshape([2] * n_qubits + [batch])
    # qubit q lives on tensor axis (n_qubits - 1 - q)
    axes = [n_qubits - 1 - q for q in gate.qubits]
    t = np.moveaxis(t, axes, range(len(axes)))
    lead = t.shape[: len(axes)]
    mat = gate.matrix()
    if len(axes) == 2:
        # gate matrix index = q_first + 2 * q_second; after moveaxis the first
        # listed qubit is the slowest axis, so reorder to match
        mat = mat.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
    flat = t.reshape(int(np.prod(lead)), -1)
    flat = mat @ flat
    t = flat.reshape(lead + t.shape[len(axes):])
    t = np.moveaxis(t, range(len(axes)), axes)
    out = t.reshape(2 ** n_qubits, batch)
    return out if batched else out[:, 0]


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the circuit (n_qubits <= 12)."""
    if circuit.n_qubits > 12:
        raise ValueError(f"unitary extraction capped at 12 qubits, got {circuit.n_qubits}")
    u = np.eye(2 ** circuit.n_qubits, dtype=complex)
    for g in circuit.gates:
        u = apply_gate(u, g, circuit.n_qubits)
    return u


def pauli_exponential(term: PauliTerm, theta: float) -> Circuit:
    """Circuit for exp(-i theta P) with P a single Pauli string (unit coefficient).

    CNOT staircase: basis changes onto Z (H for X; RZ(-pi/2) then H for Y), a
    CNOT ladder collecting parity on the highest involved qubit, RZ(2 theta)
    and the mirror.  Weight-1 strings collapse to a single rotation.
    """
    if not term.factors:
        raise ValueError("empty Pauli term exponentiates to a global phase")
    qubits = sorted(term.factors)
    n = max(qubits) + 1
    circ = Circuit(n)
    if len(qubits) == 1:
        q = qubits[0]
        kind = {"X": "RX", "Y": "RY", "Z": "RZ"}[term.factors[q]]
        circ.add(kind, q, angle=2 * theta)
        return circ
    for q in qubits:
        p = term.factors[q]
        if p == "X":
            circ.add("H", q)
        elif p == "Y":
            circ.add("RZ", q, angle=-np.pi / 2)
            circ.add("H", q)
    for a, b in zip(qubits, qubits[1:]):
        circ.add("CNOT", a, b)
    circ.add("RZ", qubits[-1], angle=2 * theta)
    for a, b in reversed(list(zip(qubits, qubits[1:]))):
        circ.add("CNOT", a, b)
    for q in qubits:
        p = term.factors[q]
        if p == "X":
            circ.add("H", q)
        elif p == "Y":
            circ.add("H", q)
            circ.add("RZ", q, angle=np.pi / 2)
    return circ


def xy_block(i: int, j: int, theta: float) -> Circuit:
    """Two-qubit hopping block exp(-i (theta/2) (X_i X_j + Y_i Y_j)).

    Two CNOTs and four rotations: conjugating by CNOT(i,j) maps XX to X_i and
    YY to Z_i Y_j, and an RX(pi/2) frame on qubit i turns the pair into
    commuting single-qubit rotations.
    """
    if i == j:
        raise ValueError("xy_block needs distinct qubits")
    circ = Circuit(max(i, j) + 1)
    circ.add("RX", i, angle=np.pi / 2)
    circ.add("CNOT", i, j)
    circ.add("RX", i, angle=theta)
    circ.add("RY", j, angle=theta)
    circ.add("CNOT", i, j)
    circ.add("RX", i, angle=-np.pi / 2)
    return circ


def merge_rotations(circuit: Circuit, drop_tol: float = 0.0) -> Circuit:
    """Peephole pass: fuse same-kind rotations that are adjacent on a qubit's
    timeline (no intervening gate touching that qubit) and drop rotations whose
    fused angle is exactly zero (or below drop_tol).
    """
    out: list = []
    last_on_qubit: dict = {}  # qubit -> index into out
    for g in circuit.gates:
        if g.kind in ROTATION_KINDS:
            q = g.qubits[0]
            prev = last_on_qubit.get(q)
            if prev is not None and out[prev] is not None \
                    and out[prev].kind == g.kind:
                angle = out[prev].angle + g.angle
                if abs(angle) <= drop_tol:
                    out[prev] = None
                    last_on_qubit.pop(q, None)
                else:
                    out[prev] = Gate(g.kind, g.qubits, angle)
                continue
        out.append(g)
        for q in g.qubits:
            last_on_qubit[q] = len(out) - 1
    return Circuit(circuit.n_qubits, [g for g in out if g is not None])


def to_text(circuit: Circuit) -> str:
    """Line-oriented serialization, `qubits N` header then one gate per line."""
    lines = [f"qubits {circuit.n_qubits}"]
    for g in circuit.gates:
        parts = [g.kind] + [str(q) for q in g.qubits]
        if g.angle is not None:
            parts.append(repr(g.angle))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("qubits "):
        raise ValueError("missing 'qubits N' header")
    circ = Circuit(int(lines[0].split()[1]))
    for ln in lines[1:]:
        parts = ln.split()
        kind = parts[0]
        if kind == "CNOT":
            circ.add(kind, int(parts[1]), int(parts[2]))
        elif kind in ROTATION_KINDS:
            circ.add(kind, int(parts[1]), angle=float(parts[2]))
        else:
            circ.add(kind, int(parts[1]))
    return circ
