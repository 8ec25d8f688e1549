"""Model parameters and qubit register layout for the exciton-phonon lattice.

All energies are stored in units of hbar*omega with hbar = omega = 1, so the
site energies, hopping amplitudes and couplings are dimensionless numbers and
time is measured in 1/omega.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the N-site lattice with local oscillator modes.

    Attributes:
        n_sites: number of electronic two-level sites N.
        site_energies: length-N electronic transition energies (default 0,
            which only contributes a global phase in the single-excitation
            sector).
        hopping: N x N symmetric hopping matrix with zero diagonal.
        modes_per_site: number of oscillator modes attached to each site.
        frequencies: (N, modes_per_site) oscillator frequencies, all > 0.
        couplings: (N, modes_per_site) exciton-oscillator coupling strengths.
        qubits_per_mode: qubits per oscillator register; each mode is
            truncated to d = 2**qubits_per_mode levels.
    """

    n_sites: int
    site_energies: np.ndarray
    hopping: np.ndarray
    modes_per_site: int
    frequencies: np.ndarray
    couplings: np.ndarray
    qubits_per_mode: int

    def __post_init__(self):
        object.__setattr__(self, "site_energies",
                           np.asarray(self.site_energies, dtype=float))
        object.__setattr__(self, "hopping",
                           np.asarray(self.hopping, dtype=float))
        object.__setattr__(self, "frequencies",
                           np.atleast_2d(np.asarray(self.frequencies, dtype=float)))
        object.__setattr__(self, "couplings",
                           np.atleast_2d(np.asarray(self.couplings, dtype=float)))

    @property
    def levels_per_mode(self) -> int:
        return 2 ** self.qubits_per_mode

    @property
    def total_qubits(self) -> int:
        return self.n_sites + self.n_sites * self.modes_per_site * self.qubits_per_mode


def uniform(n_sites: int, hopping: float, coupling: float, *,
            frequency: float = 1.0, qubits_per_mode: int = 1,
            modes_per_site: int = 1,
            site_energies=None, topology: str = "chain") -> ModelParams:
    """Convenience constructor with uniform parameters.

    topology "chain" places hopping on nearest neighbours only; "full"
    connects every pair.
    """
    v = np.zeros((n_sites, n_sites))
    if topology == "chain":
        for i in range(n_sites - 1):
            v[i, i + 1] = v[i + 1, i] = hopping
    elif topology == "full":
        v[:] = hopping
        np.fill_diagonal(v, 0.0)
    else:
        raise ValueError(f"unknown topology {topology!r}")
    if site_energies is None:
        site_energies = np.zeros(n_sites)
    shape = (n_sites, modes_per_site)
    return ModelParams(
        n_sites=n_sites,
        site_energies=np.asarray(site_energies, dtype=float),
        hopping=v,
        modes_per_site=modes_per_site,
        frequencies=np.full(shape, frequency),
        couplings=np.full(shape, coupling),
        qubits_per_mode=qubits_per_mode,
    )


def random_chain(n_sites: int, qubits_per_mode: int, seed: int,
                 lo: float, hi: float) -> ModelParams:
    """Random chain instance: hoppings, couplings and frequencies i.i.d.
    uniform on [lo, hi], chain topology, one mode per site.

    Deterministic for a fixed seed.
    """
    if lo > hi:
        raise ValueError(f"lo must not exceed hi (got {lo} > {hi})")
    rng = np.random.default_rng(seed)
    v = np.zeros((n_sites, n_sites))
    bond = rng.uniform(lo, hi, size=n_sites - 1)
    for i in range(n_sites - 1):
        v[i, i + 1] = v[i + 1, i] = bond[i]
    freqs = rng.uniform(lo, hi, size=(n_sites, 1))
    chis = rng.uniform(lo, hi, size=(n_sites, 1))
    return ModelParams(
        n_sites=n_sites,
        site_energies=np.zeros(n_sites),
        hopping=v,
        modes_per_site=1,
        frequencies=freqs,
        couplings=chis,
        qubits_per_mode=qubits_per_mode,
    )


def validate(params: ModelParams) -> list[str]:
    """Return the list of violated invariants; empty means the instance is ok."""
    errors = []
    n = params.n_sites
    if n < 1:
        errors.append("n_sites must be positive")
        return errors
    if params.site_energies.shape != (n,):
        errors.append(f"site_energies must have shape ({n},)")
    if params.hopping.shape != (n, n):
        errors.append(f"hopping must have shape ({n}, {n})")
    else:
        if not np.allclose(params.hopping, params.hopping.T):
            errors.append("asymmetric hopping")
        if np.any(np.diag(params.hopping) != 0.0):
            errors.append("hopping diagonal must be zero")
    if params.modes_per_site < 1:
        errors.append("modes_per_site must be positive")
    shape = (n, params.modes_per_site)
    if params.frequencies.shape != shape:
        errors.append(f"frequencies must have shape {shape}")
    elif np.any(params.frequencies <= 0.0):
        errors.append("non-positive frequency")
    if params.couplings.shape != shape:
        errors.append(f"couplings must have shape {shape}")
    if params.qubits_per_mode < 1:
        errors.append("qubits_per_mode must be positive")
    return errors


@dataclass(frozen=True)
class QubitLayout:
    """Mapping from model degrees of freedom to global qubit indices.

    Site qubits come first (qubit i for site i), followed by one contiguous
    register of qubits_per_mode qubits per oscillator, ordered by site then
    mode.  Within a register the first qubit is the least significant bit of
    the binary level index.
    """

    n_sites: int
    modes_per_site: int
    qubits_per_mode: int

    @classmethod
    def for_params(cls, params: ModelParams) -> "QubitLayout":
        return cls(params.n_sites, params.modes_per_site, params.qubits_per_mode)

    @property
    def total_qubits(self) -> int:
        return self.n_sites + self.n_sites * self.modes_per_site * self.qubits_per_mode

    def site_qubit(self, site: int) -> int:
        if not 0 <= site < self.n_sites:
            raise IndexError(f"site {site} out of range")
        return site

    def mode_register(self, site: int, mode: int = 0) -> range:
        if not 0 <= site < self.n_sites:
            raise IndexError(f"site {site} out of range")
        if not 0 <= mode < self.modes_per_site:
            raise IndexError(f"mode {mode} out of range")
        flat = site * self.modes_per_site + mode
        start = self.n_sites + flat * self.qubits_per_mode
        return range(start, start + self.qubits_per_mode)
