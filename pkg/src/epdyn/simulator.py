"""Statevector engine: exact observables, shot sampling and stochastic Pauli noise."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, apply_gate
from .model import ModelParams, QubitLayout
from .trotter import TrotterPlan, initial_state_circuit, trotter_step

DEFAULT_QUBIT_CAP = 26

_PAULI_KINDS = ("X", "Y", "Z")


@dataclass
class StateVector:
    """Normalized complex amplitudes, little-endian qubit indexing."""

    amplitudes: np.ndarray

    @property
    def n_qubits(self) -> int:
        return int(np.log2(len(self.amplitudes)).round())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class NoiseParams:
    """Depolarizing Pauli noise: p2 per two-qubit gate, p1 per single-qubit gate."""

    p2: float = 0.01
    p1: float | None = None  # defaults to p2 / 10
    trajectories: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.p1 is None:
            object.__setattr__(self, "p1", self.p2 / 10.0)
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise ValueError("noise probabilities must lie in [0, 1]")
        if self.trajectories < 1:
            raise ValueError("trajectories must be positive")


@dataclass(frozen=True)
class SimConfig:
    shots: int = 8192
    seed: int = 0

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be >= 1")


def zero_state(n_qubits: int) -> StateVector:
    amp = np.zeros(2 ** n_qubits, dtype=complex)
    amp[0] = 1.0
    return StateVector(amp)


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    amp = state.amplitudes
    for g in circuit.gates:
        amp = apply_gate(amp, g, circuit.n_qubits)
    return StateVector(amp)


def run(circuit: Circuit, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """Exact statevector of circuit |0...0>."""
    if circuit.n_qubits > cap:
        raise ValueError(
            f"{circuit.n_qubits} qubits exceeds the cap of {cap}; "
            "raise the cap explicitly for stretch runs")
    out = apply_circuit(zero_state(circuit.n_qubits), circuit)
    if abs(out.norm() - 1.0) > 1e-10:
        raise RuntimeError("statevector norm drifted beyond 1e-10")
    return out


def _prob_tensor(state: StateVector) -> np.ndarray:
    n = state.n_qubits
    return (np.abs(state.amplitudes) ** 2).reshape([2] * n)


def site_populations(state: StateVector, layout: QubitLayout) -> np.ndarray:
    """Exact probability that each site qubit reads 1."""
    n = state.n_qubits
    probs = _prob_tensor(state)
    out = np.empty(layout.n_sites)
    for i in range(layout.n_sites):
        axis = n - 1 - layout.site_qubit(i)
        marg = probs.sum(axis=tuple(a for a in range(n) if a != axis))
        out[i] = marg[1]
    return out


def register_distribution(state: StateVector, register) -> np.ndarray:
    """Marginal distribution over the 2**len(register) levels of a register."""
    register = list(register)
    n = state.n_qubits
    probs = _prob_tensor(state)
    axes = [n - 1 - q for q in register]
    keep = np.moveaxis(probs, axes, range(len(axes)))
    flat = keep.reshape(2 ** len(register), -1).sum(axis=1)
    # after moveaxis the first register qubit is the slowest axis; reorder so
    # index = binary level (first register qubit = LSB)
    idx = np.arange(2 ** len(register))
    rev = np.zeros_like(idx)
    k = len(register)
    for i in idx:
        b = int(format(i, f"0{k}b")[::-1], 2)
        rev[b] = i
    return flat[rev]


def sampled_populations(state: StateVector, layout: QubitLayout,
                        config: SimConfig) -> np.ndarray:
    """Site-population estimates from multinomial bitstring sampling."""
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng(config.seed)
    counts = rng.multinomial(config.shots, probs)
    out = np.zeros(layout.n_sites)
    occupied = np.nonzero(counts)[0]
    for basis in occupied:
        for i in range(layout.n_sites):
            if (basis >> layout.site_qubit(i)) & 1:
                out[i] += counts[basis]
    return out / config.shots


def mode_occupations(params: ModelParams, plan: TrotterPlan, excited_site: int,
                     site: int, mode: int = 0,
                     cap: int = DEFAULT_QUBIT_CAP) -> np.ndarray:
    """Oscillator level occupation averaged uniformly over the eta time points."""
    layout = QubitLayout.for_params(params)
    register = list(layout.mode_register(site, mode))
    init = initial_state_circuit(params, excited_site)
    if init.n_qubits > cap:
        raise ValueError("qubit count exceeds cap")
    state = run(init, cap=cap)
    step = trotter_step(params, plan.delta)
    occ = np.zeros(2 ** params.qubits_per_mode)
    for _ in range(plan.steps):
        state = apply_circuit(state, step)
        occ += register_distribution(state, register)
    return occ / max(plan.steps, 1)


def _random_pauli_gates(rng, qubits) -> list:
    """Uniform non-identity Pauli error on the given qubits (3 or 15 choices)."""
    while True:
        picks = [rng.integers(0, 4) for _ in qubits]
        if any(p > 0 for p in picks):
            break
    gates = []
    for q, p in zip(qubits, picks):
        if p > 0:
            gates.append(("XYZ"[p - 1], q))
    return gates


_ERROR_MATS = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _apply_pauli(amp: np.ndarray, label: str, qubit: int, n: int) -> np.ndarray:
    t = amp.reshape([2] * n)
    axis = n - 1 - qubit
    t = np.moveaxis(t, axis, 0)
    t = (_ERROR_MATS[label] @ t.reshape(2, -1)).reshape(t.shape)
    return np.moveaxis(t, 0, axis).reshape(-1)


def noisy_populations(circuit: Circuit, layout: QubitLayout,
                      noise: NoiseParams, config: SimConfig) -> np.ndarray:
    """Monte Carlo average over stochastic-Pauli trajectories with sampling.

    Each trajectory inserts, after every gate, an i.i.d. Pauli error on the
    gate's qubits with probability p1 or p2 by arity, then contributes
    shots/trajectories sampled counts.  With zero noise every trajectory is
    identical, so the exact state is sampled once with the full shot budget,
    reproducing sampled_populations bit for bit.
    """
    if noise.p1 == 0.0 and noise.p2 == 0.0:
        return sampled_populations(run(circuit), layout, config)
    rng = np.random.default_rng(noise.seed)
    n = circuit.n_qubits
    shots_per_traj = np.full(noise.trajectories,
                             config.shots // noise.trajectories)
    shots_per_traj[: config.shots % noise.trajectories] += 1
    total = np.zeros(layout.n_sites)
    used_shots = 0
    for traj in range(noise.trajectories):
        amp = zero_state(n).amplitudes
        for g in circuit.gates:
            amp = apply_gate(amp, g, n)
            p = noise.p2 if g.kind == "CNOT" else noise.p1
            if p > 0.0 and rng.random() < p:
                for label, q in _random_pauli_gates(rng, g.qubits):
                    amp = _apply_pauli(amp, label, q, n)
        k = int(shots_per_traj[traj])
        if k == 0:
            continue
        sub = SimConfig(shots=k, seed=int(rng.integers(0, 2 ** 63 - 1)))
        total += k * sampled_populations(StateVector(amp), layout, sub)
        used_shots += k
    return total / used_shots
