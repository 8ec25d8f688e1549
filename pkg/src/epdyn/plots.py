"""Figure rendering for scenario outputs.

Renders population dynamics (one curve set per step count, ED reference
dashed) and time-averaged oscillator occupation bars as PNG files next to the
CSVs.  Uses the Agg backend so rendering works headless.
"""
from __future__ import annotations

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def render_scenario(cfg: dict, out_dir: str, files: list[str]) -> list[str]:
    """Render figures for the CSVs a scenario produced; returns new paths."""
    from .scenarios import read_csv

    name = cfg["name"]
    written = []
    pop_files = [f for f in files
                 if f.endswith(".csv") and "-occupations" not in f
                 and "gate-counts" not in f and not f.endswith("-ed.csv")]
    ed_file = os.path.join(out_dir, f"{name}-ed.csv")
    if pop_files or os.path.exists(ed_file):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for path in sorted(pop_files):
            header, data = read_csv(path)
            label = os.path.basename(path)[len(name) + 1:-4]
            for k, col in enumerate(header[1:]):
                ax.plot(data[:, 0], data[:, 1 + k],
                        label=f"{label} {col}", linewidth=1.0)
        if os.path.exists(ed_file):
            header, data = read_csv(ed_file)
            for k, col in enumerate(header[1:]):
                ax.plot(data[:, 0], data[:, 1 + k], "k--", linewidth=0.8,
                        label=f"ed {col}")
        ax.set_xlabel("time (1/frequency)")
        ax.set_ylabel("site population")
        ax.set_title(name)
        ax.legend(fontsize=6, ncol=2)
        path = os.path.join(out_dir, f"{name}.png")
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    for csv_path in [f for f in files if f.endswith("-occupations.csv")]:
        header, data = read_csv(csv_path)
        fig, ax = plt.subplots(figsize=(4.5, 3.5))
        ax.bar(data[:, 0], data[:, 1], color="tab:blue")
        ax.set_xlabel("oscillator level")
        ax.set_ylabel("time-averaged occupation")
        ax.set_title(os.path.basename(csv_path)[:-4])
        path = csv_path[:-4] + ".png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(path)
    return written
