"""Rebuild the experiment figures from harness CSV artifacts.

Every renderer is a pure translator: means and bands are read straight out
of the summary files written by the experiment harness, never recomputed.
Each call writes the image plus a JSON sidecar of the exact numbers that
were plotted, so regenerated figures can be diffed numerically.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


class RenderError(ValueError):
    """Input data unusable for the requested figure."""


class MissingColumnError(RenderError):
    def __init__(self, path, columns):
        self.columns = sorted(columns)
        super().__init__(f"{path}: missing columns {', '.join(self.columns)}")


@dataclass(frozen=True)
class FigureSpec:
    figure: str
    input_dir: Path
    output_path: Path


def read_csv_rows(path: Path, required: set) -> list:
    if not path.exists():
        raise RenderError(f"input file not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = set(reader.fieldnames or [])
        missing = required - header
        if missing:
            raise MissingColumnError(path, missing)
        rows = list(reader)
    if not rows:
        raise RenderError(f"input file has no data rows: {path}")
    return rows


SUMMARY_COLUMNS = {"param", "value", "metric", "mean", "std", "n"}
TRAJECTORY_COLUMNS = {"step", "truth", "mean", "std"}
BACKFLOW_COLUMNS = {"omega", "pair_index", "sum"}

_INDEXED_METRIC = re.compile(r"^capacity\[(tau|eta)=(\d+)\]$")
_INDEX_LABELS = {"tau": "delay", "eta": "steps ahead"}


def _indexed_series(rows, path):
    """Group capacity[...=k] summary rows into per-param-value curves."""
    series: dict = {}
    index_names = set()
    for row in rows:
        match = _INDEXED_METRIC.match(row["metric"])
        if not match:
            continue
        index_names.add(match.group(1))
        series.setdefault(row["value"], []).append(
            (int(match.group(2)), float(row["mean"]), float(row["std"]))
        )
    if not series:
        raise RenderError(f"{path}: no indexed capacity metrics found")
    out = {}
    for value, triples in series.items():
        triples.sort()
        out[value] = {
            "x": [t[0] for t in triples],
            "mean": [t[1] for t in triples],
            "std": [t[2] for t in triples],
        }
    xlabel = _INDEX_LABELS[index_names.pop()] if len(index_names) == 1 else "index"
    return out, xlabel


def _plot_indexed_curves(series, xlabel, title, output_path):
    def sort_key(label):
        tail = label.rsplit("=", 1)[-1]
        try:
            return float(tail)
        except ValueError:
            return 0.0

    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for value in sorted(series, key=sort_key):
        data = series[value]
        line, = ax.plot(data["x"], data["mean"], marker="o", markersize=3, label=value)
        lo = [m - s for m, s in zip(data["mean"], data["std"])]
        hi = [m + s for m, s in zip(data["mean"], data["std"])]
        ax.fill_between(data["x"], lo, hi, alpha=0.2, color=line.get_color())
    ax.set_xlabel(xlabel)
    ax.set_ylabel("capacity")
    ax.set_title(title)
    ax.legend(fontsize=8)
    _save(fig, output_path)


def render_capacity_vs_delay(spec: FigureSpec) -> dict:
    rows = read_csv_rows(spec.input_dir / "sweep_summary.csv", SUMMARY_COLUMNS)
    param = rows[0]["param"]
    series, xlabel = _indexed_series(rows, spec.input_dir / "sweep_summary.csv")
    labeled = {f"{param}={value}": data for value, data in series.items()}
    _plot_indexed_curves(labeled, xlabel, f"memory capacity vs {xlabel}", spec.output_path)
    return {"figure": spec.figure, "series": labeled}


def render_capacity_vs_param(spec: FigureSpec) -> dict:
    path = spec.input_dir / "sweep_summary.csv"
    rows = [r for r in read_csv_rows(path, SUMMARY_COLUMNS) if r["metric"] == "capacity"]
    if not rows:
        raise RenderError(f"{path}: no plain capacity metric rows")
    rows.sort(key=lambda r: float(r["value"]))
    param = rows[0]["param"]
    data = {
        "x": [float(r["value"]) for r in rows],
        "mean": [float(r["mean"]) for r in rows],
        "std": [float(r["std"]) for r in rows],
    }
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    line, = ax.plot(data["x"], data["mean"], marker="o", markersize=3)
    lo = [m - s for m, s in zip(data["mean"], data["std"])]
    hi = [m + s for m, s in zip(data["mean"], data["std"])]
    ax.fill_between(data["x"], lo, hi, alpha=0.2, color=line.get_color())
    ax.set_xlabel(param)
    ax.set_ylabel("capacity")
    ax.set_title("nonlinear memory capacity")
    _save(fig, spec.output_path)
    return {"figure": spec.figure, "series": {param: data}}


def render_forecast_trajectories(spec: FigureSpec) -> dict:
    traj_paths = sorted(
        spec.input_dir.glob("omega=*/trajectory.csv"),
        key=lambda p: -float(p.parent.name.split("=", 1)[1]),
    )
    if not traj_paths:
        raise RenderError(f"{spec.input_dir}: no omega=*/trajectory.csv found")
    panels = {}
    for path in traj_paths:
        rows = read_csv_rows(path, TRAJECTORY_COLUMNS)
        rows.sort(key=lambda r: int(r["step"]))
        panels[path.parent.name] = {
            "x": [int(r["step"]) for r in rows],
            "truth": [float(r["truth"]) for r in rows],
            "mean": [float(r["mean"]) for r in rows],
            "std": [float(r["std"]) for r in rows],
        }
    fig, axes = plt.subplots(len(panels), 1, figsize=(5.6, 2.2 * len(panels)), sharex=True)
    if len(panels) == 1:
        axes = [axes]
    for ax, (label, data) in zip(axes, panels.items()):
        ax.plot(data["x"], data["truth"], color="black", linewidth=1.0, label="truth")
        ax.plot(data["x"], data["mean"], color="tab:blue", linewidth=1.0, label="prediction")
        lo = [m - s for m, s in zip(data["mean"], data["std"])]
        hi = [m + s for m, s in zip(data["mean"], data["std"])]
        ax.fill_between(data["x"], lo, hi, alpha=0.25, color="tab:blue")
        ax.set_ylabel(label, fontsize=8)
        ax.legend(fontsize=7, loc="upper right")
    axes[-1].set_xlabel("test step")
    axes[0].set_title("autonomous forecast, one-standard-deviation band")
    _save(fig, spec.output_path)
    return {"figure": spec.figure, "series": panels}


def render_backflow_scatter(spec: FigureSpec) -> dict:
    path = spec.input_dir / "blp.csv"
    rows = read_csv_rows(path, BACKFLOW_COLUMNS)
    points = [(float(r["omega"]), int(r["pair_index"]), float(r["sum"])) for r in rows]
    positive = [(w, i, s) for w, i, s in points if s > 0.0]
    dropped = len(points) - len(positive)
    if not positive:
        raise RenderError(f"{path}: no positive backflow sums to plot on a log axis")
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.scatter([p[0] for p in positive], [p[2] for p in positive], s=12, alpha=0.7)
    ax.set_yscale("log")
    ax.set_xlabel("omega")
    ax.set_ylabel("backflow sum")
    ax.set_title("memory backflow vs depolarization strength")
    _save(fig, spec.output_path)
    return {
        "figure": spec.figure,
        "series": {
            "points": {
                "omega": [p[0] for p in positive],
                "pair_index": [p[1] for p in positive],
                "sum": [p[2] for p in positive],
            }
        },
        "dropped_nonpositive": dropped,
    }


def _save(fig, output_path: Path) -> None:
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(output_path, dpi=150, metadata=_metadata_for(output_path))
    plt.close(fig)


def _metadata_for(path: Path) -> dict:
    # Strip run-dependent metadata so identical inputs give identical bytes.
    suffix = path.suffix.lower()
    if suffix == ".png":
        return {"Software": "qrcfigs"}
    if suffix == ".svg":
        return {"Date": None, "Creator": "qrcfigs"}
    return {}


FIGURES = {
    "2a": render_capacity_vs_delay,
    "2b": render_capacity_vs_param,
    "3": render_forecast_trajectories,
    "s2": render_backflow_scatter,
    "s3": render_capacity_vs_delay,
    "s4": render_capacity_vs_delay,
}


def render(spec: FigureSpec) -> dict:
    """Render one figure; returns and persists the plotted statistics."""
    if spec.figure not in FIGURES:
        raise RenderError(f"unknown figure {spec.figure!r}; choose from {sorted(FIGURES)}")
    stats = FIGURES[spec.figure](spec)
    sidecar = Path(spec.output_path).with_suffix(".stats.json")
    with open(sidecar, "w") as fh:
        json.dump(stats, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return stats
