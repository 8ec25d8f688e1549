import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from epdyn.pauli import (PauliSum, PauliTerm, number_operator,
                         pauli_sum_matrix, position_like_operator,
                         position_transition_terms, projector_to_pauli,
                         transition_operator)


def tridiagonal_position(d):
    m = np.zeros((d, d))
    for k in range(d - 1):
        m[k, k + 1] = m[k + 1, k] = np.sqrt(k + 1)
    return m


def test_term_validation():
    with pytest.raises(ValueError):
        PauliTerm(1.0, {0: "Q"})
    with pytest.raises(ValueError):
        PauliTerm(1.0, {-1: "X"})
    with pytest.raises(ValueError):
        PauliTerm(1.0, {0: "X"}).with_factor(0, "Z")


def test_sum_merges_duplicates():
    s = PauliSum([PauliTerm(0.5, {0: "X"}), PauliTerm(0.25, {0: "X"}),
                  PauliTerm(1.0, {1: "Z"})])
    assert len(s) == 2
    coeffs = {t.key(): t.coefficient for t in s}
    assert coeffs[(((0, "X")),)] == 0.75


def test_sum_drops_cancelled_terms():
    s = PauliSum([PauliTerm(0.5, {0: "X"}), PauliTerm(-0.5, {0: "X"})])
    assert len(s) == 0


def test_projector_identities():
    for bra, ket, expect in [
            (0, 0, np.array([[1, 0], [0, 0]])),
            (1, 1, np.array([[0, 0], [0, 1]])),
            (0, 1, np.array([[0, 1], [0, 0]])),
            (1, 0, np.array([[0, 0], [1, 0]]))]:
        got = pauli_sum_matrix(projector_to_pauli(bra, ket, 0), 1)
        assert np.allclose(got, expect, atol=1e-12)


def test_transition_operator_matrix():
    # |1><2| on a two-qubit register: elementary matrix in level space
    got = pauli_sum_matrix(transition_operator(1, 2, [0, 1]), 2)
    expect = np.zeros((4, 4))
    expect[1, 2] = 1.0
    assert np.allclose(got, expect, atol=1e-12)


def test_first_transition_pair_strings():
    # |1><0| + |0><1| on a 2-qubit register = (X_a + X_a Z_b) / 2
    pair = (transition_operator(1, 0, [0, 1])
            + transition_operator(0, 1, [0, 1])).real_part()
    coeffs = {t.key(): t.coefficient for t in pair}
    assert coeffs == {((0, "X"),): 0.5, ((0, "X"), (1, "Z")): 0.5}


@pytest.mark.parametrize("n_x", [1, 2, 3, 4])
def test_position_like_operator_matrix(n_x):
    got = pauli_sum_matrix(position_like_operator(n_x, range(n_x)), n_x)
    assert np.abs(got - tridiagonal_position(2 ** n_x)).max() < 1e-12


@pytest.mark.parametrize("n_x", [1, 2, 3, 4])
def test_number_operator_matrix(n_x):
    got = pauli_sum_matrix(number_operator(n_x, range(n_x)), n_x)
    assert np.abs(got - np.diag(np.arange(2 ** n_x))).max() < 1e-12


@pytest.mark.parametrize("n_x", [1, 2, 3])
def test_transition_terms_same_operator(n_x):
    merged = pauli_sum_matrix(position_like_operator(n_x, range(n_x)), n_x)
    split = pauli_sum_matrix(PauliSum(position_transition_terms(n_x, range(n_x))),
                             n_x)
    assert np.abs(merged - split).max() < 1e-12


def test_position_operator_term_growth():
    # the Pauli decomposition stays polynomial: at most d^2 strings
    for n_x in range(1, 5):
        d = 2 ** n_x
        assert len(position_like_operator(n_x, range(n_x))) <= d * d


def test_real_part_rejects_complex():
    with pytest.raises(ValueError):
        PauliSum([PauliTerm(1j, {0: "X"})]).real_part()


def test_tensor_requires_disjoint_support():
    a = PauliSum([PauliTerm(1.0, {0: "X"})])
    with pytest.raises(ValueError):
        a.tensor(a)


def test_register_relabelling():
    # the register argument relabels qubits without changing the operator
    direct = pauli_sum_matrix(position_like_operator(1, [1]), 2)
    x1 = pauli_sum_matrix(PauliSum([PauliTerm(1.0, {1: "X"})]), 2)
    assert np.allclose(direct, x1, atol=1e-12)


@settings(deadline=None, max_examples=30)
@given(st.lists(st.tuples(st.integers(0, 3),
                          st.sampled_from("XYZ"),
                          st.floats(-2, 2, allow_nan=False)),
                min_size=1, max_size=6))
def test_sum_matrix_linear(terms):
    psum = PauliSum([PauliTerm(c, {q: p}) for q, p, c in terms])
    total = sum(c * pauli_sum_matrix(PauliSum([PauliTerm(1.0, {q: p})]), 4)
                for q, p, c in terms)
    assert np.abs(pauli_sum_matrix(psum, 4) - total).max() < 1e-10
