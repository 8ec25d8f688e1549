"""Trotterized circuit simulation of exciton-phonon dynamics.

Builds quantum circuits for the coupled exciton-oscillator lattice, simulates
them exactly or under stochastic Pauli noise, validates against exact
diagonalization and compresses deep circuits by incremental approximate
recompilation.
"""
from .model import ModelParams, QubitLayout, random_chain, uniform, validate
from .trotter import TrotterPlan, evolution_circuit, trotter_step
from .simulator import (NoiseParams, SimConfig, StateVector, noisy_populations,
                        run, sampled_populations, site_populations)
from .ed import EDBasis, evolve_populations, full_qubit_hamiltonian

__version__ = "0.1.0"

__all__ = [
    "ModelParams", "QubitLayout", "uniform", "random_chain", "validate",
    "TrotterPlan", "evolution_circuit", "trotter_step",
    "StateVector", "SimConfig", "NoiseParams", "run", "site_populations",
    "sampled_populations", "noisy_populations",
    "EDBasis", "evolve_populations", "full_qubit_hamiltonian",
]
