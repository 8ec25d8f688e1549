"""Incremental approximate recompilation of deep circuits.

Grows a shallow inverse ansatz W, layer by layer, so that W U|0...0> returns to
|0...0|; the recompiled circuit is then W^-1.  Each layer is one CNOT on a
chosen qubit pair dressed with RZ-RY-RZ rotations on both of its qubits; an
initial rotation-only dressing layer on every qubit handles the product-state
components.  Angles are optimized one at a time by an exact three-point
sinusoid fit, and the pair for the next layer is the one whose two-qubit
reduced state is most entangled with the rest (lowest purity).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, apply_gate, gate_counts
from .simulator import run

SWEEP_TOL = 1e-6
PRUNE_ANGLE_TOL = 1e-7
MAX_RESTARTS = 4


@dataclass(frozen=True)
class RecompileConfig:
    overlap_threshold: float = 0.99
    max_layers: int = 30
    coupling_map: frozenset | None = None
    seed: int = 0
    max_evaluations: int = 200000

    def __post_init__(self):
        if not 0.0 < self.overlap_threshold <= 1.0:
            raise ValueError("overlap_threshold must lie in (0, 1]")
        if self.coupling_map is not None:
            object.__setattr__(self, "coupling_map",
                               frozenset(tuple(sorted(p))
                                         for p in self.coupling_map))


@dataclass
class RecompileReport:
    circuit: Circuit
    achieved_overlap: float
    evaluations: int
    cnot_count: int
    single_qubit_count: int
    converged: bool


def overlap(u: Circuit, v: Circuit) -> float:
    """|<0...0| V^dag U |0...0>|^2 via statevector simulation."""
    if u.n_qubits != v.n_qubits:
        raise ValueError("circuits act on different qubit counts")
    amp = run(u).amplitudes
    for g in v.inverse().gates:
        amp = apply_gate(amp, g, u.n_qubits)
    return float(abs(amp[0]) ** 2)


def optimize_angle(cost_at, theta: float) -> tuple:
    """Exact minimizer of a sinusoidal cost from three evaluations.

    cost(x) = a + b*cos(x - phi) is determined by cost_at(theta),
    cost_at(theta + pi/2) and cost_at(theta - pi/2); returns
    (best_angle, predicted_cost, stationary).  A degenerate (constant) fit
    leaves the angle unchanged and is flagged stationary.
    """
    c0 = cost_at(theta)
    cp = cost_at(theta + np.pi / 2)
    cm = cost_at(theta - np.pi / 2)
    a = (cp + cm) / 2.0
    b_cos = c0 - a
    b_sin = (cm - cp) / 2.0
    amp = np.hypot(b_cos, b_sin)
    if amp < 1e-14:
        return theta, c0, True
    phi = theta - np.arctan2(b_sin, b_cos)
    return phi + np.pi, a - amp, False


def _purity_pairs(amp: np.ndarray, n: int, pairs) -> list:
    """(purity, pair) for each candidate pair from two-qubit reduced states."""
    t = amp.reshape([2] * n)
    out = []
    for a, b in pairs:
        axes = [n - 1 - a, n - 1 - b]
        m = np.moveaxis(t, axes, [0, 1]).reshape(4, -1)
        rho = m @ m.conj().T
        out.append((float(np.real(np.trace(rho @ rho))), (a, b)))
    return out


class _Ansatz:
    """Mutable inverse-ansatz: a gate list with indexed rotation parameters."""

    def __init__(self, n_qubits: int):
        self.n_qubits = n_qubits
        self.gates: list = []
        self.rotation_slots: list = []  # indices into gates

    def add_dressing(self, qubit: int, angles=(0.0, 0.0, 0.0)):
        for kind, angle in zip(("RZ", "RY", "RZ"), angles):
            self.gates.append(Gate(kind, (qubit,), float(angle)))
            self.rotation_slots.append(len(self.gates) - 1)

    def add_layer(self, pair, angles=None):
        """One CNOT plus RZ-RY-RZ dressing on both qubits.  Starting the six
        angles away from zero matters: the all-zero point is stationary for
        every single angle, so coordinate-wise optimization cannot leave it."""
        a, b = pair
        if angles is None:
            angles = np.zeros(6)
        self.gates.append(Gate("CNOT", (a, b)))
        self.add_dressing(a, angles[:3])
        self.add_dressing(b, angles[3:])

    def drop_last_layer(self):
        """Remove the most recently added CNOT layer (7 gates)."""
        del self.gates[-7:]
        del self.rotation_slots[-6:]

    def apply(self, amp: np.ndarray) -> np.ndarray:
        for g in self.gates:
            amp = apply_gate(amp, g, self.n_qubits)
        return amp

    def set_angle(self, slot: int, angle: float):
        g = self.gates[self.rotation_slots[slot]]
        self.gates[self.rotation_slots[slot]] = Gate(g.kind, g.qubits, angle)

    def get_angle(self, slot: int) -> float:
        return self.gates[self.rotation_slots[slot]].angle

    def inverse_circuit(self) -> Circuit:
        return Circuit(self.n_qubits,
                       [g.inverse() for g in reversed(self.gates)])


def _prune(circuit: Circuit) -> Circuit:
    """Drop near-zero rotations and cancel adjacent CNOT pairs, to fixpoint."""
    gates = list(circuit.gates)
    changed = True
    while changed:
        changed = False
        kept = []
        for g in gates:
            if g.angle is not None and abs(g.angle) < PRUNE_ANGLE_TOL:
                changed = True
                continue
            kept.append(g)
        gates = kept
        out: list = []
        last_on_qubit: dict = {}
        for g in gates:
            if g.kind == "CNOT":
                prev = [last_on_qubit.get(q) for q in g.qubits]
                if prev[0] is not None and prev[0] == prev[1] \
                        and out[prev[0]] is not None \
                        and out[prev[0]].kind == "CNOT" \
                        and out[prev[0]].qubits == g.qubits:
                    out[prev[0]] = None
                    for q in g.qubits:
                        last_on_qubit.pop(q, None)
                    changed = True
                    continue
            out.append(g)
            for q in g.qubits:
                last_on_qubit[q] = len(out) - 1
        gates = [g for g in out if g is not None]
    return Circuit(circuit.n_qubits, gates)


def recompile(u: Circuit, config: RecompileConfig | None = None) -> RecompileReport:
    """Best-effort compression of u into a shallow circuit with high overlap.

    Deterministic for fixed (u, config).  The report's circuit uses only the
    basis gate set, respects the coupling map when one is given, and never
    contains more CNOTs than u.  A run that stalls in a poor local minimum is
    restarted with a fresh seeded initialization (up to MAX_RESTARTS attempts
    sharing the evaluation budget); the best attempt is returned.
    """
    if config is None:
        config = RecompileConfig()
    n = u.n_qubits
    psi_u = run(u).amplitudes
    counter = [0]
    cnot_budget = min(config.max_layers, gate_counts(u)["cnot"])
    if config.coupling_map is not None:
        pairs = sorted(config.coupling_map)
    else:
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]

    per_attempt = max(1, config.max_evaluations // MAX_RESTARTS)
    best_circuit = None
    best_overlap = -1.0
    for attempt in range(MAX_RESTARTS):
        cap = min(config.max_evaluations, counter[0] + per_attempt)
        rng = np.random.default_rng([config.seed, attempt])
        ansatz = _optimize_once(psi_u, n, config, rng, counter, cap,
                                cnot_budget, pairs)
        circuit = _prune(ansatz.inverse_circuit())
        achieved = overlap(u, circuit)
        if achieved > best_overlap:
            best_circuit, best_overlap = circuit, achieved
        if (best_overlap >= config.overlap_threshold
                or counter[0] >= config.max_evaluations):
            break

    counts = gate_counts(best_circuit)
    return RecompileReport(
        circuit=best_circuit,
        achieved_overlap=best_overlap,
        evaluations=counter[0],
        cnot_count=counts["cnot"],
        single_qubit_count=counts["single_qubit"],
        converged=best_overlap >= config.overlap_threshold,
    )


def _optimize_once(psi_u: np.ndarray, n: int, config: RecompileConfig, rng,
                   counter: list, cap: int, cnot_budget: int, pairs) -> _Ansatz:
    """One seeded ansatz-growth attempt within an evaluation cap."""
    target = 1.0 - config.overlap_threshold
    ansatz = _Ansatz(n)

    def cost() -> float:
        counter[0] += 1
        return 1.0 - float(abs(ansatz.apply(psi_u.copy())[0]) ** 2)

    def evals_left() -> bool:
        return counter[0] < cap

    current = cost()
    if current <= target:
        return ansatz

    for q in range(n):
        ansatz.add_dressing(q)
    current = _sweep(ansatz, cost, current, config, evals_left)

    layers = 0
    stalled: set = set()
    while current > target and layers < cnot_budget and evals_left():
        state = ansatz.apply(psi_u.copy())
        scored = _purity_pairs(state, n, pairs)
        scored.sort(key=lambda s: (s[0], s[1]))
        # skip pairs that produced no progress since the last improvement
        fresh = [s for s in scored if s[1] not in stalled]
        if not fresh:
            stalled.clear()
            fresh = scored
        pair = fresh[0][1]
        ansatz.add_layer(pair, rng.normal(0.0, 0.1, size=6))
        before = current
        current = _sweep(ansatz, cost, cost(), config, evals_left)
        if current < before - SWEEP_TOL:
            layers += 1
            stalled.clear()
        else:
            ansatz.drop_last_layer()
            current = before
            stalled.add(pair)
    return ansatz


def _sweep(ansatz: _Ansatz, cost, current: float,
           config: RecompileConfig, evals_left) -> float:
    """Rotosolve sweeps over all rotation slots until improvement < SWEEP_TOL."""
    target = 1.0 - config.overlap_threshold
    while evals_left():
        before = current
        for slot in range(len(ansatz.rotation_slots)):
            theta = ansatz.get_angle(slot)

            def cost_at(x, _slot=slot, _old=theta):
                ansatz.set_angle(_slot, x)
                c = cost()
                ansatz.set_angle(_slot, _old)
                return c

            best, predicted, stationary = optimize_angle(cost_at, theta)
            if not stationary and predicted < current:
                # wrap to (-pi, pi]; a 2*pi shift only changes global phase
                ansatz.set_angle(slot, -((np.pi - best) % (2 * np.pi)) + np.pi)
                current = predicted
        if before - current < SWEEP_TOL or current <= target:
            break
    return current
