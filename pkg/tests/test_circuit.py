import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from epdyn.circuit import (Circuit, Gate, circuit_unitary, from_text,
                           gate_counts, merge_rotations, pauli_exponential,
                           to_text, xy_block)
from epdyn.pauli import PauliSum, PauliTerm, pauli_sum_matrix


def phase_distance(u, v):
    """Operator distance up to global phase."""
    tr = np.trace(v.conj().T @ u)
    if abs(tr) < 1e-14:
        return 2.0
    return float(np.abs(u - (tr / abs(tr)) * v).max())


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("SWAP", (0, 1))
    with pytest.raises(ValueError):
        Gate("CNOT", (1, 1))
    with pytest.raises(ValueError):
        Gate("CNOT", (0, 1), angle=0.3)
    with pytest.raises(ValueError):
        Gate("RX", (0,))
    with pytest.raises(ValueError):
        Gate("H", (0,), angle=0.1)
    with pytest.raises(ValueError):
        Circuit(1).add("X", 1)


def test_gate_matrices_unitary():
    for g in [Gate("H", (0,)), Gate("X", (0,)), Gate("RX", (0,), 0.7),
              Gate("RY", (0,), -1.2), Gate("RZ", (0,), 2.3),
              Gate("CNOT", (0, 1))]:
        m = g.matrix()
        assert np.allclose(m @ m.conj().T, np.eye(len(m)), atol=1e-12)
        inv = g.inverse().matrix()
        assert np.allclose(inv @ m, np.eye(len(m)), atol=1e-12)


def test_cnot_truth_table():
    # qubit 0 = control (LSB), qubit 1 = target
    c = Circuit(2).add("CNOT", 0, 1)
    u = circuit_unitary(c)
    expect = np.zeros((4, 4))
    for ctl in range(2):
        for tgt in range(2):
            expect[ctl + 2 * (tgt ^ ctl), ctl + 2 * tgt] = 1.0
    assert np.allclose(u, expect, atol=1e-12)


def test_cnot_reversed_qubit_order():
    # control on qubit 1, target on qubit 0
    u = circuit_unitary(Circuit(2).add("CNOT", 1, 0))
    expect = np.zeros((4, 4))
    for ctl in range(2):
        for tgt in range(2):
            expect[(tgt ^ ctl) + 2 * ctl, tgt + 2 * ctl] = 1.0
    assert np.allclose(u, expect, atol=1e-12)


def test_circuit_unitary_little_endian():
    # X on qubit 0 flips the least significant bit: |0> -> |1> (index 1)
    u = circuit_unitary(Circuit(2).add("X", 0))
    assert abs(u[1, 0] - 1.0) < 1e-12
    u = circuit_unitary(Circuit(2).add("X", 1))
    assert abs(u[2, 0] - 1.0) < 1e-12


def test_circuit_inverse():
    c = Circuit(2)
    c.add("H", 0).add("RY", 1, angle=0.4).add("CNOT", 0, 1).add("RZ", 0, angle=-1.1)
    u = circuit_unitary(c)
    ui = circuit_unitary(c.inverse())
    assert np.abs(ui @ u - np.eye(4)).max() < 1e-12


def test_gate_counts():
    c = Circuit(2).add("H", 0).add("CNOT", 0, 1).add("RZ", 1, angle=0.2)
    assert gate_counts(c) == {"cnot": 1, "single_qubit": 2}


@pytest.mark.parametrize("factors", [
    {0: "Z"}, {1: "X"}, {0: "Y"},
    {0: "X", 1: "Z"}, {0: "Y", 2: "Y"},
    {0: "X", 1: "Y", 2: "Z"}, {0: "Y", 1: "Y", 2: "X"},
])
def test_pauli_exponential_matches_expm(factors):
    theta = 0.37
    term = PauliTerm(1.0, factors)
    n = max(factors) + 1
    circ = pauli_exponential(term, theta)
    u = circuit_unitary(Circuit(n, list(circ.gates)))
    p = pauli_sum_matrix(PauliSum([term]), n)
    assert phase_distance(u, expm(-1j * theta * p)) < 1e-12


def test_pauli_exponential_cnot_count():
    for w in range(1, 5):
        term = PauliTerm(1.0, {q: "Z" for q in range(w)})
        counts = gate_counts(pauli_exponential(term, 0.1))
        assert counts["cnot"] == (0 if w == 1 else 2 * (w - 1))


def test_pauli_exponential_rejects_identity():
    with pytest.raises(ValueError):
        pauli_exponential(PauliTerm(1.0, {}), 0.1)


def test_xy_block_matches_expm():
    theta = 0.53
    u = circuit_unitary(xy_block(0, 1, theta))
    h = pauli_sum_matrix(PauliSum([PauliTerm(0.5, {0: "X", 1: "X"}),
                                   PauliTerm(0.5, {0: "Y", 1: "Y"})]), 2)
    assert phase_distance(u, expm(-1j * theta * h)) < 1e-12
    assert gate_counts(xy_block(0, 1, theta)) == {"cnot": 2, "single_qubit": 4}


def test_xy_block_conserves_excitation():
    u = circuit_unitary(xy_block(0, 1, 0.8))
    # basis states |01> (index 1) and |10> (index 2) mix only with each other
    block = np.zeros((4, 4), dtype=complex)
    block[np.ix_([1, 2], [1, 2])] = u[np.ix_([1, 2], [1, 2])]
    block[0, 0] = u[0, 0]
    block[3, 3] = u[3, 3]
    assert np.abs(u - block).max() < 1e-12


def test_merge_rotations_fuses_and_drops():
    c = Circuit(2)
    c.add("RZ", 0, angle=0.3).add("RZ", 0, angle=0.4)
    c.add("RX", 1, angle=0.5).add("RX", 1, angle=-0.5)
    merged = merge_rotations(c)
    assert len(merged) == 1
    assert merged.gates[0].kind == "RZ"
    assert abs(merged.gates[0].angle - 0.7) < 1e-15


def test_merge_rotations_respects_blockers():
    c = Circuit(2)
    c.add("RZ", 0, angle=0.3).add("CNOT", 0, 1).add("RZ", 0, angle=0.4)
    merged = merge_rotations(c)
    assert len(merged) == 3  # the CNOT blocks fusion


@settings(deadline=None, max_examples=25)
@given(st.lists(st.tuples(st.sampled_from(["RX", "RY", "RZ", "H", "X", "CNOT"]),
                          st.integers(0, 2),
                          st.floats(-3, 3, allow_nan=False)),
                max_size=12))
def test_merge_rotations_preserves_unitary(gate_list):
    c = Circuit(3)
    for kind, q, angle in gate_list:
        if kind == "CNOT":
            c.add(kind, q, (q + 1) % 3)
        elif kind in ("H", "X"):
            c.add(kind, q)
        else:
            c.add(kind, q, angle=angle)
    assert phase_distance(circuit_unitary(merge_rotations(c)),
                          circuit_unitary(c)) < 1e-10


def test_text_round_trip_bit_exact():
    c = Circuit(3)
    c.add("RY", 0, angle=0.1 + 0.2)  # not exactly representable
    c.add("H", 1).add("CNOT", 1, 2).add("RZ", 2, angle=-np.pi / 3).add("X", 0)
    text = to_text(c)
    back = from_text(text)
    assert back.n_qubits == 3
    assert back.gates == c.gates  # angles survive exactly via repr
    assert to_text(back) == text


def test_from_text_requires_header():
    with pytest.raises(ValueError):
        from_text("H 0\n")
