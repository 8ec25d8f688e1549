"""Pauli-string algebra and qubit encodings of site and oscillator operators.

Conventions: qubit |0> has sigma_z eigenvalue +1; oscillator level indices are
binary-encoded little-endian within each mode register (first register qubit =
least significant bit).
"""
from __future__ import annotations

import numpy as np

MERGE_TOL = 1e-12

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliTerm:
    """A scalar coefficient times a tensor product of single-qubit Paulis.

    factors maps global qubit index -> "X" | "Y" | "Z"; qubits absent from the
    map carry the identity.  An empty map is a scaled identity.
    """

    __slots__ = ("coefficient", "factors")

    def __init__(self, coefficient, factors=None):
        self.coefficient = complex(coefficient)
        self.factors = dict(factors or {})
        for q, p in self.factors.items():
            if q < 0:
                raise ValueError(f"negative qubit index {q}")
            if p not in ("X", "Y", "Z"):
                raise ValueError(f"invalid Pauli label {p!r}")

    def key(self):
        return tuple(sorted(self.factors.items()))

    @property
    def weight(self) -> int:
        return len(self.factors)

    def scaled(self, factor) -> "PauliTerm":
        return PauliTerm(self.coefficient * factor, self.factors)

    def with_factor(self, qubit: int, pauli: str) -> "PauliTerm":
        """Tensor an extra single-qubit Pauli onto a qubit not yet involved."""
        if qubit in self.factors:
            raise ValueError(f"qubit {qubit} already in term")
        f = dict(self.factors)
        f[qubit] = pauli
        return PauliTerm(self.coefficient, f)

    def __repr__(self):
        ops = " ".join(f"{p}{q}" for q, p in sorted(self.factors.items())) or "I"
        return f"PauliTerm({self.coefficient:g} * {ops})"


class PauliSum:
    """A sum of PauliTerms, merged on construction.

    Terms with identical factor maps are combined; terms whose coefficient
    magnitude falls below MERGE_TOL are dropped.  Insertion order of distinct
    factor maps is preserved, which makes downstream circuit generation
    deterministic.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged: dict = {}
        for t in terms:
            k = t.key()
            if k in merged:
                merged[k] = PauliTerm(merged[k].coefficient + t.coefficient,
                                      merged[k].factors)
            else:
                merged[k] = PauliTerm(t.coefficient, t.factors)
        self.terms = [t for t in merged.values() if abs(t.coefficient) > MERGE_TOL]

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        return PauliSum(list(self.terms) + list(other.terms))

    def scaled(self, factor) -> "PauliSum":
        return PauliSum([t.scaled(factor) for t in self.terms])

    def tensor(self, other: "PauliSum") -> "PauliSum":
        """Product of two sums with disjoint qubit support."""
        out = []
        for a in self.terms:
            for b in other.terms:
                f = dict(a.factors)
                for q, p in b.factors.items():
                    if q in f:
                        raise ValueError("tensor requires disjoint supports")
                    f[q] = p
                out.append(PauliTerm(a.coefficient * b.coefficient, f))
        return PauliSum(out)

    def prefixed(self, qubit: int, pauli: str) -> "PauliSum":
        return PauliSum([t.with_factor(qubit, pauli) for t in self.terms])

    def real_part(self) -> "PauliSum":
        """Drop imaginary coefficient parts; raises if any exceed MERGE_TOL."""
        worst = max((abs(t.coefficient.imag) for t in self.terms), default=0.0)
        if worst > MERGE_TOL:
            raise ValueError(f"non-real coefficient (imag {worst:g})")
        return PauliSum([PauliTerm(t.coefficient.real, t.factors)
                         for t in self.terms])

    def __repr__(self):
        return "PauliSum(" + " + ".join(map(repr, self.terms)) + ")"


def projector_to_pauli(bra_bit: int, ket_bit: int, qubit: int) -> PauliSum:
    """|bra_bit><ket_bit| on one qubit as a two-term Pauli sum.

    |0><0| = (I+Z)/2, |0><1| = (X+iY)/2, |1><0| = (X-iY)/2, |1><1| = (I-Z)/2.
    """
    if bra_bit == ket_bit:
        sign = 1.0 if bra_bit == 0 else -1.0
        return PauliSum([PauliTerm(0.5), PauliTerm(0.5 * sign, {qubit: "Z"})])
    sign = 1j if bra_bit == 0 else -1j
    return PauliSum([PauliTerm(0.5, {qubit: "X"}),
                     PauliTerm(0.5 * sign, {qubit: "Y"})])


def transition_operator(bra_level: int, ket_level: int, register) -> PauliSum:
    """|bra_level><ket_level| on a binary-encoded multi-qubit register."""
    register = list(register)
    out = PauliSum([PauliTerm(1.0)])
    for k, q in enumerate(register):
        out = out.tensor(projector_to_pauli((bra_level >> k) & 1,
                                            (ket_level >> k) & 1, q))
    return out


def position_like_operator(n_x: int, register) -> PauliSum:
    """Pauli decomposition of a_dagger + a on a d = 2**n_x level oscillator.

    The truncated ladder operator sum contains sqrt(m+1) |m+1><m| + h.c. for
    m = 0 .. d-2; the result is Hermitian with real coefficients.
    """
    register = list(register)
    if len(register) != n_x or n_x < 1:
        raise ValueError("register length must equal n_x >= 1")
    d = 2 ** n_x
    out = PauliSum()
    for m in range(d - 1):
        c = np.sqrt(m + 1)
        out = out + transition_operator(m + 1, m, register).scaled(c)
        out = out + transition_operator(m, m + 1, register).scaled(c)
    return out.real_part()


def position_transition_terms(n_x: int, register) -> list:
    """Pauli terms of a_dag + a kept separate per ladder transition.

    Same operator as position_like_operator, but the Hermitian string pair of
    each m <-> m+1 transition is emitted on its own instead of being merged
    with strings from other transitions, matching a term-by-term circuit
    construction.  Returns a flat list of PauliTerms in transition order.
    """
    register = list(register)
    if len(register) != n_x or n_x < 1:
        raise ValueError("register length must equal n_x >= 1")
    out = []
    for m in range(2 ** n_x - 1):
        c = np.sqrt(m + 1)
        pair = (transition_operator(m + 1, m, register).scaled(c)
                + transition_operator(m, m + 1, register).scaled(c))
        out.extend(pair.real_part().terms)
    return out


def number_operator(n_x: int, register) -> PauliSum:
    """Pauli decomposition of the oscillator number operator diag(0 .. d-1).

    n = sum_k 2**k (I - Z_k)/2 over the register qubits; the identity offset
    (d-1)/2 is kept explicitly so callers may drop it as a global phase.
    """
    register = list(register)
    if len(register) != n_x or n_x < 1:
        raise ValueError("register length must equal n_x >= 1")
    terms = [PauliTerm((2 ** n_x - 1) / 2.0)]
    for k, q in enumerate(register):
        terms.append(PauliTerm(-(2 ** k) / 2.0, {q: "Z"}))
    return PauliSum(terms)


def pauli_sum_matrix(psum: PauliSum, n_qubits: int) -> np.ndarray:
    """Dense 2**n x 2**n matrix of a Pauli sum, little-endian qubit indexing."""
    if n_qubits > 12:
        raise ValueError(f"dense reconstruction capped at 12 qubits, got {n_qubits}")
    dim = 2 ** n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for t in psum:
        m = np.array([[1.0]], dtype=complex)
        # qubit 0 is the least significant bit, so it goes last in the kron chain
        for q in reversed(range(n_qubits)):
            m = np.kron(m, _PAULI_MATS[t.factors.get(q, "I")])
        out += t.coefficient * m
    return out
