"""Config-driven experiment runner: population sweeps, occupation histograms,
gate-count reports, noise comparisons and recompilation benchmarks.

A scenario config is a YAML mapping; see the shipped presets for the schema.
All output CSVs use %.12g formatting with LF line endings so reruns with the
same seeds are byte-identical.
"""
from __future__ import annotations

import concurrent.futures
import os

import numpy as np
import yaml

from . import model
from .circuit import Circuit, gate_counts
from .ed import EDBasis, evolve_populations
from .model import ModelParams, QubitLayout
from .recompiler import RecompileConfig, recompile
from .simulator import (NoiseParams, SimConfig, apply_circuit,
                        noisy_populations, register_distribution, run,
                        sampled_populations, site_populations)
from .trotter import (TrotterPlan, evolution_circuit, initial_state_circuit,
                      trotter_step)

ENGINES = ("exact", "sampled", "noisy", "ed", "recompiled+noisy")
OBSERVABLES = ("populations", "occupations", "gate_counts", "recompile_report")
GRID_TOL = 1e-9


def load_config(path: str) -> dict:
    with open(path) as fh:
        cfg = yaml.safe_load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a mapping")
    return cfg


def validate_config(cfg: dict) -> list[str]:
    """Return a list of error strings; empty means the config is runnable."""
    errors = []
    if not isinstance(cfg.get("name"), str) or not cfg.get("name"):
        errors.append("name: required non-empty string")
    has_model = "model" in cfg
    has_random = "random_chain" in cfg
    if has_model == has_random:
        errors.append("model: exactly one of 'model' or 'random_chain' required")
    else:
        try:
            params = build_model(cfg)
            errors += [f"model: {e}" for e in model.validate(params)]
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(f"model: {exc}")
    tmax = cfg.get("time_max")
    if not isinstance(tmax, (int, float)) or tmax <= 0:
        errors.append("time_max: positive number required")
    steps = cfg.get("steps")
    if (not isinstance(steps, list) or not steps
            or any(not isinstance(s, int) or s < 1 for s in steps)):
        errors.append("steps: non-empty list of positive integers required")
    engine = cfg.get("engine")
    if engine not in ENGINES:
        errors.append(f"engine: must be one of {ENGINES}")
    obs = cfg.get("observables", ["populations"])
    if (not isinstance(obs, list) or not obs
            or any(o not in OBSERVABLES for o in obs)):
        errors.append(f"observables: subset of {OBSERVABLES} required")
    else:
        if "occupations" in obs and engine not in ("exact", "ed"):
            errors.append("observables: occupations require the exact or ed engine")
        if "recompile_report" in obs and engine != "recompiled+noisy":
            errors.append("observables: recompile_report requires the "
                          "recompiled+noisy engine")
    excited = cfg.get("excited_site", 0)
    if not isinstance(excited, int) or excited < 0:
        errors.append("excited_site: non-negative integer required")
    return errors


def build_model(cfg: dict) -> ModelParams:
    if "random_chain" in cfg:
        rc = cfg["random_chain"]
        return model.random_chain(int(rc["n_sites"]), int(rc["qubits_per_mode"]),
                                  int(rc["seed"]), float(rc["lo"]), float(rc["hi"]))
    m = cfg["model"]
    return model.uniform(
        int(m["n_sites"]), float(m["hopping"]), float(m["coupling"]),
        frequency=float(m.get("frequency", 1.0)),
        qubits_per_mode=int(m.get("qubits_per_mode", 1)),
        modes_per_site=int(m.get("modes_per_site", 1)),
        site_energies=m.get("site_energies"),
        topology=m.get("topology", "chain"))


def _coupling_map(cfg: dict, layout: QubitLayout):
    cm = cfg.get("coupling_map")
    if cm is None:
        return None
    if cm == "chain":
        return frozenset((q, q + 1) for q in range(layout.total_qubits - 1))
    return frozenset(tuple(sorted(p)) for p in cm)


def _derived_seed(base: int, *tags: int) -> int:
    return int(np.random.SeedSequence([base] + list(tags)).generate_state(1)[0])


def _format_row(values) -> str:
    return ",".join("%.12g" % v for v in values)


def write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(_format_row(row) + "\n")


def read_csv(path: str):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = np.array([[float(x) for x in line.strip().split(",")]
                         for line in fh if line.strip()])
    return header, data


def _population_rows(params: ModelParams, plan: TrotterPlan, excited: int,
                     engine: str, cfg: dict, base_seed: int, cap: int):
    """(time, P_0 .. P_{N-1}) rows on the grid t_0=0, t_j = j*delta."""
    layout = QubitLayout.for_params(params)
    rows = []
    if engine == "exact":
        state = run(initial_state_circuit(params, excited), cap=cap)
        rows.append([0.0] + list(site_populations(state, layout)))
        step = trotter_step(params, plan.delta)
        for j in range(1, plan.steps + 1):
            state = apply_circuit(state, step)
            rows.append([plan.times[j - 1]] + list(site_populations(state, layout)))
    elif engine == "sampled":
        shots = int(cfg.get("shots", 8192))
        state = run(initial_state_circuit(params, excited), cap=cap)
        step = trotter_step(params, plan.delta)
        for j in range(plan.steps + 1):
            if j > 0:
                state = apply_circuit(state, step)
            sim = SimConfig(shots=shots,
                            seed=_derived_seed(base_seed, plan.steps, j))
            t = 0.0 if j == 0 else plan.times[j - 1]
            rows.append([t] + list(sampled_populations(state, layout, sim)))
    elif engine in ("noisy", "recompiled+noisy"):
        noise_cfg = cfg.get("noise", {})
        shots = int(cfg.get("shots", 8192))
        for j in range(plan.steps + 1):
            circ = evolution_circuit(params, TrotterPlan(j * plan.delta, j),
                                     excited)
            if engine == "recompiled+noisy" and j > 0:
                circ = _recompiled(circ, cfg, layout, base_seed, plan.steps, j)[0]
            noise = NoiseParams(p2=float(noise_cfg.get("p2", 0.01)),
                                p1=noise_cfg.get("p1"),
                                trajectories=int(noise_cfg.get("trajectories", 200)),
                                seed=_derived_seed(base_seed, plan.steps, j, 1))
            sim = SimConfig(shots=shots,
                            seed=_derived_seed(base_seed, plan.steps, j, 2))
            t = 0.0 if j == 0 else plan.times[j - 1]
            rows.append([t] + list(noisy_populations(circ, layout, noise, sim)))
    else:
        raise ValueError(f"unknown circuit engine {engine!r}")
    return rows


_RECOMPILE_CACHE: dict = {}


def _recompiled(circ: Circuit, cfg: dict, layout: QubitLayout,
                base_seed: int, steps: int, j: int):
    key = (id(cfg), steps, j)
    if key not in _RECOMPILE_CACHE:
        rc = cfg.get("recompile", {})
        config = RecompileConfig(
            overlap_threshold=float(rc.get("overlap_threshold", 0.99)),
            max_layers=int(rc.get("max_layers", 30)),
            coupling_map=_coupling_map(cfg, layout),
            seed=_derived_seed(base_seed, steps, j, 3),
            max_evaluations=int(rc.get("max_evaluations", 200000)))
        report = recompile(circ, config)
        _RECOMPILE_CACHE[key] = (report.circuit, report)
    return _RECOMPILE_CACHE[key]


def _occupation_rows(params: ModelParams, plan: TrotterPlan, excited: int,
                     site: int, cap: int):
    """(level, occupation) rows: time-averaged oscillator level distribution."""
    layout = QubitLayout.for_params(params)
    register = list(layout.mode_register(site, 0))
    state = run(initial_state_circuit(params, excited), cap=cap)
    step = trotter_step(params, plan.delta)
    occ = np.zeros(params.levels_per_mode)
    for _ in range(plan.steps):
        state = apply_circuit(state, step)
        occ += register_distribution(state, register)
    occ /= max(plan.steps, 1)
    return [[level, occ[level]] for level in range(len(occ))]


def union_time_grid(time_max: float, steps_list) -> np.ndarray:
    """Merged grid of all step grids (plus t=0), de-duplicated to GRID_TOL."""
    pts = [0.0]
    for eta in steps_list:
        pts.extend(TrotterPlan(time_max, eta).times)
    pts = np.sort(np.asarray(pts))
    keep = [pts[0]]
    for t in pts[1:]:
        if t - keep[-1] > GRID_TOL:
            keep.append(t)
    return np.asarray(keep)


def run_scenario(cfg: dict, out_dir: str, seed: int = 0, jobs: int = 1,
                 allow_large: bool = False) -> list[str]:
    """Execute a validated scenario; returns the list of files written."""
    errors = validate_config(cfg)
    if errors:
        raise ValueError("; ".join(errors))
    _RECOMPILE_CACHE.clear()
    os.makedirs(out_dir, exist_ok=True)
    params = build_model(cfg)
    layout = QubitLayout.for_params(params)
    cap = 32 if allow_large else 26
    name = cfg["name"]
    engine = cfg["engine"]
    obs = cfg.get("observables", ["populations"])
    excited = int(cfg.get("excited_site", 0))
    time_max = float(cfg["time_max"])
    steps_list = list(cfg["steps"])
    written = []

    def run_eta(eta: int):
        plan = TrotterPlan(time_max, eta)
        files = []
        if "populations" in obs and engine != "ed":
            rows = _population_rows(params, plan, excited, engine, cfg, seed, cap)
            path = os.path.join(out_dir, f"{name}-eta{eta}.csv")
            write_csv(path, ["time"] + [f"site_{i}" for i in range(params.n_sites)],
                      rows)
            files.append(path)
        if "occupations" in obs and engine != "ed":
            site = int(cfg.get("occupation_site", excited))
            rows = _occupation_rows(params, plan, excited, site, cap)
            path = os.path.join(out_dir, f"{name}-eta{eta}-occupations.csv")
            write_csv(path, ["level", "occupation"], rows)
            files.append(path)
        if "recompile_report" in obs:
            path = os.path.join(out_dir, f"{name}-eta{eta}-recompile.txt")
            with open(path, "w", newline="") as fh:
                for j in range(1, plan.steps + 1):
                    key = (id(cfg), plan.steps, j)
                    if key not in _RECOMPILE_CACHE:
                        continue
                    r = _RECOMPILE_CACHE[key][1]
                    fh.write(f"j={j} overlap={r.achieved_overlap:.12g} "
                             f"evaluations={r.evaluations} cnot={r.cnot_count} "
                             f"single_qubit={r.single_qubit_count} "
                             f"converged={r.converged}\n")
            files.append(path)
        return files

    if jobs > 1 and len(steps_list) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            for files in pool.map(run_eta, steps_list):
                written.extend(files)
    else:
        for eta in steps_list:
            written.extend(run_eta(eta))

    if "gate_counts" in obs:
        rows = []
        for eta in steps_list:
            plan = TrotterPlan(time_max, eta)
            per_step = gate_counts(trotter_step(params, plan.delta))
            full = gate_counts(evolution_circuit(params, plan, excited))
            rows.append([eta, per_step["cnot"], per_step["single_qubit"],
                         full["cnot"], full["single_qubit"]])
        path = os.path.join(out_dir, f"{name}-gate-counts.csv")
        write_csv(path, ["steps", "step_cnot", "step_single_qubit",
                         "total_cnot", "total_single_qubit"], rows)
        written.append(path)

    if engine == "ed" or cfg.get("ed_reference", False):
        grid = union_time_grid(time_max, steps_list)
        basis = EDBasis.for_params(params,
                                   int(cfg.get("ed_fock_cutoff",
                                               _default_cutoff(params))))
        pops = evolve_populations(params, basis, excited, grid)
        rows = [[grid[k]] + list(pops[k]) for k in range(len(grid))]
        path = os.path.join(out_dir, f"{name}-ed.csv")
        write_csv(path, ["time"] + [f"site_{i}" for i in range(params.n_sites)],
                  rows)
        written.append(path)

    from . import plots
    written.extend(plots.render_scenario(cfg, out_dir, written))
    return written


def _default_cutoff(params: ModelParams) -> int:
    """Largest power-of-two Fock cutoff keeping the dense ED under its cap."""
    from .ed import DENSE_CAP
    n_modes = params.n_sites * params.modes_per_site
    d = 16
    while d > 2 and params.n_sites * d ** n_modes > DENSE_CAP:
        d //= 2
    return d


def compare(engine_csv: str, ed_csv: str) -> dict:
    """Max and mean absolute population error, per site and overall.

    The reference grid must contain every engine time point (within 1e-9).
    """
    header_a, a = read_csv(engine_csv)
    header_b, b = read_csv(ed_csv)
    if header_a != header_b:
        raise ValueError("mismatched CSV columns")
    idx = []
    for t in a[:, 0]:
        j = int(np.argmin(np.abs(b[:, 0] - t)))
        if abs(b[j, 0] - t) > GRID_TOL:
            raise ValueError(f"time {t:g} missing from reference grid")
        idx.append(j)
    diff = np.abs(a[:, 1:] - b[idx, 1:])
    sites = header_a[1:]
    return {
        "per_site": {s: {"max": float(diff[:, k].max()),
                         "mean": float(diff[:, k].mean())}
                     for k, s in enumerate(sites)},
        "max": float(diff.max()),
        "mean": float(diff.mean()),
    }
