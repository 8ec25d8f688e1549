"""Exact-diagonalization reference dynamics.

Works in the single-excitation electronic manifold tensored with a truncated
Fock space of D levels per mode (D independent of the circuit encoding, default
16, so the reference is effectively untruncated).  Also assembles the encoded
Hamiltonian over the full qubit space for circuit validation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, QubitLayout
from .pauli import (PauliSum, PauliTerm, number_operator, pauli_sum_matrix,
                    position_like_operator)

DEFAULT_FOCK_CUTOFF = 16
DENSE_CAP = 4096


@dataclass(frozen=True)
class EDBasis:
    """Single-excitation x Fock product basis.

    Basis index = site * D**M + fock multi-index, with mode 0 varying fastest.
    """

    n_sites: int
    n_modes: int  # total modes = n_sites * modes_per_site
    fock_cutoff: int

    @classmethod
    def for_params(cls, params: ModelParams,
                   fock_cutoff: int = DEFAULT_FOCK_CUTOFF) -> "EDBasis":
        return cls(params.n_sites, params.n_sites * params.modes_per_site,
                   fock_cutoff)

    @property
    def fock_dim(self) -> int:
        return self.fock_cutoff ** self.n_modes

    @property
    def dimension(self) -> int:
        return self.n_sites * self.fock_dim


def _ladder(d: int) -> np.ndarray:
    a = np.zeros((d, d))
    for m in range(1, d):
        a[m - 1, m] = np.sqrt(m)
    return a


def _mode_operator(op: np.ndarray, mode: int, basis: EDBasis) -> np.ndarray:
    """Embed a single-mode operator into the Fock product space (mode 0 fastest)."""
    out = np.array([[1.0]])
    for m in reversed(range(basis.n_modes)):
        out = np.kron(out, op if m == mode else np.eye(basis.fock_cutoff))
    return out


def hamiltonian_matrix(params: ModelParams, basis: EDBasis) -> np.ndarray:
    """Dense Hermitian H = H_el + H_ph + H_ep (zero-point energy dropped)."""
    if basis.dimension > DENSE_CAP:
        raise ValueError(f"ED dimension {basis.dimension} exceeds cap {DENSE_CAP}")
    d = basis.fock_cutoff
    fdim = basis.fock_dim
    n = basis.n_sites
    a = _ladder(d)
    x = a + a.T
    num = a.T @ a

    h_el = np.diag(params.site_energies) + params.hopping
    h = np.kron(h_el, np.eye(fdim)).astype(complex)

    h_ph = np.zeros((fdim, fdim))
    for mode in range(basis.n_modes):
        i, l = divmod(mode, params.modes_per_site)
        h_ph += params.frequencies[i, l] * _mode_operator(num, mode, basis)
    h += np.kron(np.eye(n), h_ph)

    for mode in range(basis.n_modes):
        i, l = divmod(mode, params.modes_per_site)
        chi = params.couplings[i, l]
        if chi == 0.0:
            continue
        # (chi/2) sigma_z convention: the excited site pulls its oscillator
        # with strength -chi/2 while every other electronic state pushes it
        # with +chi/2 (sigma_z eigenvalue +1 on unexcited sites)
        sign = np.eye(n)
        sign[i, i] = -1.0
        h += 0.5 * chi * np.kron(sign, _mode_operator(x, mode, basis))
    return h


def evolve_populations(params: ModelParams, basis: EDBasis, excited_site: int,
                       times) -> np.ndarray:
    """Site populations P_i(t) for the vacuum-oscillator initial state.

    Returns an array of shape (len(times), n_sites); rows sum to 1.
    """
    h = hamiltonian_matrix(params, basis)
    w, v = np.linalg.eigh(h)
    fdim = basis.fock_dim
    psi0 = np.zeros(basis.dimension, dtype=complex)
    psi0[excited_site * fdim] = 1.0  # all oscillators in their ground state
    c0 = v.conj().T @ psi0
    times = np.asarray(times, dtype=float)
    out = np.empty((len(times), basis.n_sites))
    for k, t in enumerate(times):
        psi = v @ (np.exp(-1j * w * t) * c0)
        out[k] = np.abs(psi.reshape(basis.n_sites, fdim)) ** 2 @ np.ones(fdim)
    return out


def encoded_hamiltonian(params: ModelParams) -> PauliSum:
    """The qubit-encoded Hamiltonian as a Pauli sum over the full register."""
    layout = QubitLayout.for_params(params)
    terms = []
    for i in range(params.n_sites):
        eps = params.site_energies[i]
        if eps != 0.0:
            terms += [PauliTerm(eps / 2),
                      PauliTerm(-eps / 2, {layout.site_qubit(i): "Z"})]
    for i in range(params.n_sites):
        for j in range(i + 1, params.n_sites):
            v = params.hopping[i, j]
            if v != 0.0:
                qi, qj = layout.site_qubit(i), layout.site_qubit(j)
                terms += [PauliTerm(v / 2, {qi: "X", qj: "X"}),
                          PauliTerm(v / 2, {qi: "Y", qj: "Y"})]
    total = PauliSum(terms)
    nx = params.qubits_per_mode
    for i in range(params.n_sites):
        for l in range(params.modes_per_site):
            reg = list(layout.mode_register(i, l))
            omega = params.frequencies[i, l]
            num = number_operator(nx, reg)
            # drop the identity offset (global phase)
            num = PauliSum([t for t in num if t.factors])
            total = total + num.scaled(omega)
            chi = params.couplings[i, l]
            if chi != 0.0:
                x = position_like_operator(nx, reg)
                total = total + x.prefixed(layout.site_qubit(i),
                                           "Z").scaled(0.5 * chi)
    return total


def full_qubit_hamiltonian(params: ModelParams) -> np.ndarray:
    """Dense matrix of the encoded Hamiltonian (total qubits <= 12)."""
    layout = QubitLayout.for_params(params)
    return pauli_sum_matrix(encoded_hamiltonian(params), layout.total_qubits)


def sub_hamiltonian_matrices(params: ModelParams) -> tuple:
    """Dense matrices of the three encoded sub-Hamiltonians (el, ph, ep)."""
    layout = QubitLayout.for_params(params)
    n = layout.total_qubits
    nx = params.qubits_per_mode
    el_terms = []
    for i in range(params.n_sites):
        eps = params.site_energies[i]
        if eps != 0.0:
            el_terms += [PauliTerm(eps / 2),
                         PauliTerm(-eps / 2, {layout.site_qubit(i): "Z"})]
    for i in range(params.n_sites):
        for j in range(i + 1, params.n_sites):
            v = params.hopping[i, j]
            if v != 0.0:
                qi, qj = layout.site_qubit(i), layout.site_qubit(j)
                el_terms += [PauliTerm(v / 2, {qi: "X", qj: "X"}),
                             PauliTerm(v / 2, {qi: "Y", qj: "Y"})]
    ph = PauliSum()
    ep = PauliSum()
    for i in range(params.n_sites):
        for l in range(params.modes_per_site):
            reg = list(layout.mode_register(i, l))
            num = number_operator(nx, reg)
            num = PauliSum([t for t in num if t.factors])
            ph = ph + num.scaled(params.frequencies[i, l])
            chi = params.couplings[i, l]
            if chi != 0.0:
                x = position_like_operator(nx, reg)
                ep = ep + x.prefixed(layout.site_qubit(i),
                                     "Z").scaled(0.5 * chi)
    return (pauli_sum_matrix(PauliSum(el_terms), n),
            pauli_sum_matrix(ph, n),
            pauli_sum_matrix(ep, n))
