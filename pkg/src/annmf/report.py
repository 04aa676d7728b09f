"""Artifact writers for the command-line front end.

CSV files are the canonical outputs: fixed column order, repr-formatted
floats so re-runs under the same seed are byte-identical. Figures are
rendered alongside them as PNG summaries of the same data; plotting uses
the Agg backend so runs work headless.
"""

from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "format_cell",
    "write_csv",
    "write_json",
    "render_benchmark_figures",
    "render_history_figure",
    "render_trace_figure",
]


def format_cell(value) -> str:
    """One CSV cell: floats via repr for round-trip exactness, bools as 0/1."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, header, rows) -> Path:
    """Write rows under a fixed header; returns the path written."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_cell(v) for v in row) + "\n")
    return path


def _jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_json(path, payload) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def render_benchmark_figures(out_dir, stem, successes, failures, hamming_rows) -> list[Path]:
    """Success pie plus a holding-time / mean-Hamming scatter.

    hamming_rows are (trial, holding_time_us, mean_hamming) triples, one per
    reverse-anneal call made during the benchmark.
    """
    out_dir = Path(out_dir)
    paths = []

    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    ax.pie(
        [successes, failures],
        labels=[f"solved ({successes})", f"missed ({failures})"],
        colors=["#2a9d8f", "#e76f51"],
        startangle=90,
        counterclock=False,
    )
    ax.set_title("target-state hits")
    paths.append(_save(fig, out_dir / f"{stem}_success.png"))

    if hamming_rows:
        ht = np.array([r[1] for r in hamming_rows], dtype=float)
        mh = np.array([r[2] for r in hamming_rows], dtype=float)
        fig, ax = plt.subplots(figsize=(5.4, 3.8))
        ax.scatter(ht, mh, s=10, alpha=0.35, color="#264653", edgecolors="none")
        grid = np.unique(ht)
        means = [mh[ht == g].mean() for g in grid]
        ax.plot(grid, means, "o-", color="#e76f51", label="mean")
        ax.set_xlabel("holding time (µs)")
        ax.set_ylabel("mean Hamming distance per call")
        ax.set_title("search breadth vs holding time")
        ax.legend()
        paths.append(_save(fig, out_dir / f"{stem}_hamming.png"))
    return paths


def render_history_figure(out_dir, stem, curves) -> list[Path]:
    """Residual-vs-iteration curves; curves maps label -> iteration records."""
    out_dir = Path(out_dir)
    fig, ax = plt.subplots(figsize=(5.4, 3.8))
    for label, records in curves.items():
        its = [r.iteration for r in records]
        res = [r.residual for r in records]
        ax.plot(its, res, "o-", markersize=3, label=label)
    ax.set_xlabel("iteration")
    ax.set_ylabel("residual (Frobenius norm)")
    ax.set_yscale("log")
    ax.set_title("factorization residual")
    ax.legend()
    return [_save(fig, out_dir / f"{stem}_residual.png")]


def render_trace_figure(out_dir, stem, trace_rows) -> list[Path]:
    """Energy of every recorded read, in the order the solver produced them."""
    out_dir = Path(out_dir)
    if not trace_rows:
        return []
    energies = [r[1] for r in trace_rows]
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(range(len(energies)), energies, lw=0.7, color="#264653")
    running = np.minimum.accumulate(np.asarray(energies, dtype=float))
    ax.plot(range(len(energies)), running, lw=1.4, color="#e76f51", label="best so far")
    ax.set_xlabel("read index")
    ax.set_ylabel("objective value")
    ax.set_title("annealing trace")
    ax.legend()
    return [_save(fig, out_dir / f"{stem}_trace.png")]
