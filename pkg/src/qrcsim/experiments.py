"""Seeded, parallel experiment harness writing CSV artifacts.

Every experiment is described by an :class:`ExperimentConfig`; a run
produces one directory holding ``config.resolved`` (the fully resolved
configuration), ``records.csv`` (one row per realization and metric),
``summary.csv`` (mean and one-standard-deviation aggregates) and
``log.txt``, plus task-specific extras (autonomous-trajectory statistics,
per-pair non-Markovianity sums, contraction-rate tables, cached series).

Reproducibility contract: the pair (config, master_seed) determines every
output byte, realizations are isolated (parallel and serial execution
agree), and per-realization seeds come from a SplitMix64 mix of the master
seed and the realization index.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import nonmarkov, tasks
from .dynamics import IsingParams, LindbladSpec, split_at_input
from .linalg import random_density_matrix, random_pure_state_pair
from .readout import (
    ObservableSet,
    capacity,
    feature_condition_number,
    mse,
    predict_series,
    train,
)
from .reservoirs import EmbeddedReservoir, MarkovReservoir, ResidualReservoir, run_sequence


class ConfigError(ValueError):
    """Configuration rejected before any computation, with a field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class RealizationError(RuntimeError):
    """A realization failed; carries the realization index."""

    def __init__(self, index: int, cause: BaseException):
        self.index = index
        super().__init__(f"realization {index} failed: {cause}")


MASK64 = (1 << 64) - 1


def split_seed(master_seed: int, index: int) -> int:
    """SplitMix64 mix of the master seed and a realization index."""
    z = (master_seed + (index + 1) * 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


MODEL_KINDS = ("markov", "residual", "embedded")
TASK_KINDS = ("stm", "monomial", "mg", "santafe", "blp", "decay")
OBSERVABLE_KINDS = ("z", "xyz", "xyz+pairs")


@dataclass(frozen=True)
class ModelConfig:
    kind: str = "markov"
    n_qubits: int = 3
    dt: float = 10.0
    h: float = 1.0
    gamma: float = 0.1
    mix_weight: float = 1.0  # residual only
    tau_e: int = 10  # residual only
    eta: float = math.pi / 4  # embedded only
    omega: float = 1.0  # embedded only


@dataclass(frozen=True)
class TaskConfig:
    kind: str = "stm"
    taus: tuple = tuple(range(13))  # stm
    d1: int = 0  # monomial
    d2: int = 10  # monomial
    horizon: int = 150  # mg
    steps_ahead: tuple = (1, 2, 3)  # santafe
    dataset_path: str | None = None  # santafe
    omegas: tuple = (0.0, 0.25, 0.5, 0.75, 1.0)  # blp
    n_steps: int = 1000  # blp
    input_grid: tuple = (0.0, 0.25, 0.5, 0.75, 1.0)  # decay


@dataclass(frozen=True)
class PhaseConfig:
    washout: int = 1000
    train: int = 1000
    test: int = 1000


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    task: TaskConfig = field(default_factory=TaskConfig)
    phases: PhaseConfig = field(default_factory=PhaseConfig)
    observables: str = "z"
    ridge: float = 0.0
    realizations: int = 100
    master_seed: int = 42

    def validate(self) -> "ExperimentConfig":
        m, t, p = self.model, self.task, self.phases
        if m.kind not in MODEL_KINDS:
            raise ConfigError("model.kind", f"must be one of {MODEL_KINDS}, got {m.kind!r}")
        if m.n_qubits < 1:
            raise ConfigError("model.n_qubits", "must be a positive integer")
        if not m.dt > 0:
            raise ConfigError("model.dt", "must be positive")
        if not m.h > 0:
            raise ConfigError("model.h", "must be positive")
        if m.gamma < 0:
            raise ConfigError("model.gamma", "must be non-negative")
        if not 0.0 <= m.mix_weight <= 1.0:
            raise ConfigError("model.mix_weight", "must lie in [0, 1]")
        if m.tau_e < 1:
            raise ConfigError("model.tau_e", "must be a positive integer")
        if not 0.0 <= m.eta < math.pi / 2:
            raise ConfigError("model.eta", "must lie in [0, pi/2)")
        if not 0.0 <= m.omega <= 1.0:
            raise ConfigError("model.omega", "must lie in [0, 1]")
        if t.kind not in TASK_KINDS:
            raise ConfigError("task.kind", f"must be one of {TASK_KINDS}, got {t.kind!r}")
        if t.kind == "stm" and (not t.taus or any(tau < 0 for tau in t.taus)):
            raise ConfigError("task.taus", "must be a non-empty list of delays >= 0")
        if t.kind == "monomial" and (t.d1 < 0 or t.d2 < 0):
            raise ConfigError("task.d1/d2", "delays must be >= 0")
        if t.kind == "mg" and t.horizon < 1:
            raise ConfigError("task.horizon", "must be at least 1")
        if t.kind == "santafe" and (
            not t.steps_ahead or any(n < 1 for n in t.steps_ahead)
        ):
            raise ConfigError("task.steps_ahead", "must be a non-empty list of steps >= 1")
        if t.kind == "blp":
            if t.n_steps < 1:
                raise ConfigError("task.n_steps", "must be at least 1")
            if not t.omegas or any(not 0.0 <= w <= 1.0 for w in t.omegas):
                raise ConfigError("task.omegas", "must be a non-empty list within [0, 1]")
        if t.kind == "decay" and (
            not t.input_grid or any(not 0.0 <= s <= 1.0 for s in t.input_grid)
        ):
            raise ConfigError("task.input_grid", "must be a non-empty grid within [0, 1]")
        if p.washout < 0 or p.train < 1 or p.test < 1:
            raise ConfigError("phases", "washout >= 0, train >= 1, test >= 1 required")
        if self.observables not in OBSERVABLE_KINDS:
            raise ConfigError(
                "observables", f"must be one of {OBSERVABLE_KINDS}, got {self.observables!r}"
            )
        if self.ridge < 0:
            raise ConfigError("ridge", "must be non-negative")
        if self.realizations < 1:
            raise ConfigError("realizations", "must be at least 1")
        if not 0 <= self.master_seed <= MASK64:
            raise ConfigError("master_seed", "must fit in 64 bits")
        return self


def config_to_dict(config: ExperimentConfig) -> dict:
    return asdict(config)


def config_from_dict(data: dict, path: str = "config") -> ExperimentConfig:
    """Build and validate a config from nested dictionaries (JSON layout)."""
    if not isinstance(data, dict):
        raise ConfigError(path, "must be a mapping")
    known = {"model", "task", "phases", "observables", "ridge", "realizations", "master_seed"}
    for key in data:
        if key not in known:
            raise ConfigError(f"{path}.{key}", "unknown field")

    def build(cls, section, defaults):
        payload = data.get(section, {})
        if not isinstance(payload, dict):
            raise ConfigError(f"{path}.{section}", "must be a mapping")
        valid = {f.name for f in defaults.__dataclass_fields__.values()}
        for key in payload:
            if key not in valid:
                raise ConfigError(f"{path}.{section}.{key}", "unknown field")
        coerced = {
            k: tuple(v) if isinstance(v, list) else v for k, v in payload.items()
        }
        try:
            return cls(**coerced)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path}.{section}", str(exc)) from None

    config = ExperimentConfig(
        model=build(ModelConfig, "model", ModelConfig),
        task=build(TaskConfig, "task", TaskConfig),
        phases=build(PhaseConfig, "phases", PhaseConfig),
        observables=data.get("observables", "z"),
        ridge=float(data.get("ridge", 0.0)),
        realizations=int(data.get("realizations", 100)),
        master_seed=int(data.get("master_seed", 42)),
    )
    return config.validate()


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(str(path), f"invalid JSON: {exc}") from None
    return config_from_dict(data)


@dataclass(frozen=True)
class RunRecord:
    realization: int
    seed: int
    metric: str
    value: float
    wall_time: float
    feature_cond: float


def build_observables(kind: str, n_qubits: int) -> ObservableSet:
    if kind == "z":
        return ObservableSet.z_singles(n_qubits)
    if kind == "xyz":
        return ObservableSet.singles(n_qubits)
    return ObservableSet.singles_and_pairs(n_qubits)


def build_model(model_cfg: ModelConfig, rng: np.random.Generator, seed: int | None = None):
    """Assemble a reservoir instance with seeded couplings and initial state.

    Draw order (couplings, then initial state) is fixed; input sequences are
    drawn afterwards by the caller from the same generator.
    """
    params = IsingParams.sample(model_cfg.n_qubits, model_cfg.h, rng, seed=seed)
    spec = LindbladSpec(params=params, gamma=model_cfg.gamma)
    initial = random_density_matrix(2**model_cfg.n_qubits, rng)
    if model_cfg.kind == "markov":
        return MarkovReservoir(spec, model_cfg.dt, initial)
    if model_cfg.kind == "residual":
        return ResidualReservoir(
            spec, model_cfg.dt, initial, mix_weight=model_cfg.mix_weight, tau_e=model_cfg.tau_e
        )
    return EmbeddedReservoir(
        spec, model_cfg.dt, eta=model_cfg.eta, omega=model_cfg.omega, reservoir_state=initial
    )


def _memory_task_targets(task: TaskConfig, inputs: np.ndarray):
    """Name -> (values, start) for every trained target of a memory task."""
    if task.kind == "stm":
        return {f"capacity[tau={tau}]": tasks.stm_target(inputs, tau) for tau in task.taus}
    if task.kind == "monomial":
        return {"capacity": tasks.monomial_target(inputs, task.d1, task.d2)}
    if task.kind == "santafe":
        return {
            f"capacity[eta={n}]": tasks.forecast_target(inputs, n) for n in task.steps_ahead
        }
    raise ValueError(f"not a memory task: {task.kind}")


def _aligned(records, targets, start, lo, hi):
    """Feature matrix rows and target values for steps in [lo, hi)."""
    lo = max(lo, start)
    rows = [r.features for r in records if lo <= r.time_index < hi]
    vals = [targets[r.time_index - start] for r in records if lo <= r.time_index < hi]
    return np.asarray(rows), np.asarray(vals)


def _run_memory_realization(config: ExperimentConfig, index: int, shared_inputs):
    """Washout, train and test one realization of a driven memory task."""
    seed = split_seed(config.master_seed, index)
    rng = np.random.default_rng(seed)
    model = build_model(config.model, rng, seed=seed)
    observables = build_observables(config.observables, config.model.n_qubits)
    phases = config.phases
    total = phases.washout + phases.train + phases.test

    if shared_inputs is None:
        inputs = rng.uniform(0.0, 1.0, size=total)
    else:
        inputs = np.asarray(shared_inputs, dtype=float)[:total]
        if inputs.size < total:
            raise ValueError(
                f"shared input series has {inputs.size} samples, need {total}"
            )

    records = run_sequence(model, inputs, observables, washout=phases.washout)
    train_lo, train_hi = phases.washout, phases.washout + phases.train
    test_lo = train_hi
    test_hi = total

    metrics = {}
    cond = None
    for name, (targets, start) in _memory_task_targets(config.task, inputs).items():
        x_train, y_train = _aligned(records, targets, start, train_lo, train_hi)
        upper = min(test_hi, start + len(targets))
        x_test, y_test = _aligned(records, targets, start, test_lo, upper)
        weights = train(x_train, y_train, ridge=config.ridge)
        if cond is None:
            cond = feature_condition_number(x_train)
        outputs = predict_series(weights, x_test)
        metrics[name] = capacity(outputs, y_test)
    return {"metrics": metrics, "feature_cond": cond, "seed": seed}


def _run_mg_realization(config: ExperimentConfig, index: int, shared_inputs):
    """Teacher-forced training then autonomous forecasting on one realization."""
    seed = split_seed(config.master_seed, index)
    rng = np.random.default_rng(seed)
    model = build_model(config.model, rng, seed=seed)
    observables = build_observables(config.observables, config.model.n_qubits)
    phases = config.phases
    horizon = config.task.horizon
    teacher_len = phases.washout + phases.train

    series = np.asarray(shared_inputs, dtype=float)
    if series.size < teacher_len + horizon:
        raise ValueError(
            f"series has {series.size} samples, need {teacher_len + horizon}"
        )

    records = run_sequence(model, series[:teacher_len], observables, washout=phases.washout)
    targets, start = tasks.forecast_target(series, 1)
    x_train, y_train = _aligned(records, targets, start, phases.washout, teacher_len)
    weights = train(x_train, y_train, ridge=config.ridge)
    cond = feature_condition_number(x_train)

    protocol = tasks.ForecastProtocol(mode="autonomous", horizon=horizon, clip=True)
    result = tasks.closed_loop_run(model, weights, observables, protocol)
    truth = series[teacher_len : teacher_len + horizon]
    metrics = {"mse": mse(result.predictions, truth)}
    return {
        "metrics": metrics,
        "feature_cond": cond,
        "seed": seed,
        "predictions": result.predictions,
        "clip_events": result.clip_events,
    }


def _blp_model_pair(model_cfg: ModelConfig, seed: int):
    """Two models differing only in their initial state, plus shared inputs.

    The generator is re-seeded identically for every omega value, so the
    Hamiltonian draw, the orthogonal pure-state pair and the input sequence
    are reused across the grid (paired comparison).
    """
    rng = np.random.default_rng(seed)
    params = IsingParams.sample(model_cfg.n_qubits, model_cfg.h, rng, seed=seed)
    spec = LindbladSpec(params=params, gamma=model_cfg.gamma)
    rho_a, rho_b = random_pure_state_pair(2**model_cfg.n_qubits, rng)

    def instantiate(initial):
        if model_cfg.kind == "markov":
            return MarkovReservoir(spec, model_cfg.dt, initial)
        if model_cfg.kind == "residual":
            return ResidualReservoir(
                spec,
                model_cfg.dt,
                initial,
                mix_weight=model_cfg.mix_weight,
                tau_e=model_cfg.tau_e,
            )
        return EmbeddedReservoir(
            spec, model_cfg.dt, eta=model_cfg.eta, omega=model_cfg.omega, reservoir_state=initial
        )

    return instantiate(rho_a), instantiate(rho_b), rng


def _run_blp_realization(config: ExperimentConfig, index: int, shared_inputs):
    """One sampled pair, evaluated across the omega grid for embedded models."""
    seed = split_seed(config.master_seed, index)
    if config.model.kind == "embedded":
        grid = [(f"blp_sum[omega={_fmt(w)}]", replace(config.model, omega=float(w)))
                for w in config.task.omegas]
    else:
        grid = [("blp_sum", config.model)]

    metrics = {}
    for name, model_cfg in grid:
        def factory(_pair, cfg=model_cfg):
            model_a, model_b, rng = _blp_model_pair(cfg, seed)
            inputs = rng.uniform(0.0, 1.0, size=config.task.n_steps)
            return model_a, model_b, inputs

        result = nonmarkov.blp_measure(factory, n_pairs=1, n_steps=config.task.n_steps)
        metrics[name] = float(result.per_pair_sums[0])
    return {"metrics": metrics, "feature_cond": float("nan"), "seed": seed}


def _run_decay_realization(config: ExperimentConfig, index: int, shared_inputs):
    """Spectral contraction rates over the input grid for one coupling draw."""
    seed = split_seed(config.master_seed, index)
    rng = np.random.default_rng(seed)
    params = IsingParams.sample(config.model.n_qubits, config.model.h, rng, seed=seed)
    spec = LindbladSpec(params=params, gamma=config.model.gamma)
    metrics = {}
    rates = []
    for s in config.task.input_grid:
        split = split_at_input(spec, config.model.dt, float(s))
        metrics[f"t_norm[s={_fmt(s)}]"] = split.t_norm
        metrics[f"spectral_radius[s={_fmt(s)}]"] = split.spectral_radius
        metrics[f"decay_rate[s={_fmt(s)}]"] = split.decay_rate
        rates.append(split.decay_rate)
    metrics["decay_rate_bound"] = min(rates)
    return {"metrics": metrics, "feature_cond": float("nan"), "seed": seed}


def _fmt(value: float) -> str:
    """Compact stable float formatting for metric names and file paths."""
    text = f"{float(value):g}"
    return text


_RUNNERS = {
    "stm": _run_memory_realization,
    "monomial": _run_memory_realization,
    "santafe": _run_memory_realization,
    "mg": _run_mg_realization,
    "blp": _run_blp_realization,
    "decay": _run_decay_realization,
}


def _shared_inputs(config: ExperimentConfig):
    """Series reused across realizations (chaotic/file-driven tasks only)."""
    task = config.task
    if task.kind == "mg":
        n_samples = config.phases.washout + config.phases.train + task.horizon
        return tasks.mackey_glass(
            tasks.MackeyGlassParams(), n_samples=n_samples, seed=config.master_seed
        )
    if task.kind == "santafe":
        if task.dataset_path is None:
            raise ConfigError("task.dataset_path", "required for the santafe task")
        return tasks.santa_fe_load(task.dataset_path)
    return None


def _realization_worker(args):
    config_dict, index = args
    config = config_from_dict(config_dict)
    shared = _shared_inputs(config)
    shared_values = shared.values if shared is not None else None
    started = time.perf_counter()
    try:
        payload = _RUNNERS[config.task.kind](config, index, shared_values)
    except Exception as exc:  # fail-fast path re-raises with context upstream
        return index, None, exc
    payload["wall_time"] = time.perf_counter() - started
    return index, payload, None


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list
    summary: dict
    extras: dict


def run_experiment(
    config: ExperimentConfig,
    out_dir=None,
    workers: int = 1,
    skip_failures: bool = False,
) -> ExperimentResult:
    """Run all realizations of one experiment and optionally write artifacts."""
    config.validate()
    shared = _shared_inputs(config)  # fail early on missing data files

    jobs = [(config_to_dict(config), idx) for idx in range(config.realizations)]
    outcomes = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for index, payload, error in pool.map(_realization_worker, jobs):
                outcomes[index] = (payload, error)
    else:
        for job in jobs:
            index, payload, error = _realization_worker(job)
            outcomes[index] = (payload, error)

    records = []
    extras = {"predictions": {}, "clip_events": {}, "failures": []}
    for index in range(config.realizations):
        payload, error = outcomes[index]
        if error is not None:
            if skip_failures:
                extras["failures"].append((index, repr(error)))
                continue
            raise RealizationError(index, error) from error
        for metric, value in payload["metrics"].items():
            records.append(
                RunRecord(
                    realization=index,
                    seed=payload["seed"],
                    metric=metric,
                    value=float(value),
                    wall_time=payload["wall_time"],
                    feature_cond=float(payload["feature_cond"]),
                )
            )
        if "predictions" in payload:
            extras["predictions"][index] = payload["predictions"]
            extras["clip_events"][index] = payload["clip_events"]

    summary = summarize(records)
    result = ExperimentResult(config=config, records=records, summary=summary, extras=extras)
    if out_dir is not None:
        write_run_outputs(result, Path(out_dir), shared_series=shared)
    return result


def summarize(records) -> dict:
    """Per-metric mean and one-standard-deviation spread (sample std)."""
    by_metric = {}
    for rec in records:
        by_metric.setdefault(rec.metric, []).append(rec.value)
    summary = {}
    for metric in sorted(by_metric):
        values = np.asarray(by_metric[metric], dtype=float)
        std = float(values.std(ddof=1)) if values.size > 1 else 0.0
        summary[metric] = {"mean": float(values.mean()), "std": std, "n": int(values.size)}
    return summary


def write_run_outputs(result: ExperimentResult, out_dir: Path, shared_series=None) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    with open(out_dir / "config.resolved", "w") as fh:
        json.dump(config_to_dict(result.config), fh, indent=2, sort_keys=True)
        fh.write("\n")

    # wall_time stays off disk: output bytes are a pure function of the
    # config and master seed.
    with open(out_dir / "records.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["realization", "seed", "metric", "value", "feature_cond"])
        for rec in result.records:
            writer.writerow(
                [
                    rec.realization,
                    rec.seed,
                    rec.metric,
                    repr(rec.value),
                    repr(rec.feature_cond),
                ]
            )

    with open(out_dir / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "mean", "std", "n"])
        for metric, stats in result.summary.items():
            writer.writerow([metric, repr(stats["mean"]), repr(stats["std"]), stats["n"]])

    if result.extras["predictions"]:
        _write_trajectory_csv(result, out_dir, shared_series)

    if result.config.task.kind == "blp":
        _write_blp_csv(result, out_dir)
    if result.config.task.kind == "decay":
        _write_decay_csv(result, out_dir)
    if shared_series is not None:
        tasks.save_series_csv(shared_series, out_dir / "series.csv")

    lines = [
        f"task: {result.config.task.kind}",
        f"model: {result.config.model.kind}",
        f"realizations: {result.config.realizations}",
        f"master_seed: {result.config.master_seed}",
        f"failures: {len(result.extras['failures'])}",
    ]
    conds = [r.feature_cond for r in result.records if np.isfinite(r.feature_cond)]
    if conds:
        lines.append(f"feature_cond max: {max(conds):.6e}")
    if result.extras["clip_events"]:
        lines.append(f"clip_events total: {sum(result.extras['clip_events'].values())}")
    for metric, stats in result.summary.items():
        lines.append(f"{metric}: mean={stats['mean']:.6e} std={stats['std']:.6e} n={stats['n']}")
    (out_dir / "log.txt").write_text("\n".join(lines) + "\n")


def _write_trajectory_csv(result: ExperimentResult, out_dir: Path, shared_series) -> None:
    preds = result.extras["predictions"]
    horizon = result.config.task.horizon
    stacked = np.vstack([preds[k] for k in sorted(preds)])
    teacher_len = result.config.phases.washout + result.config.phases.train
    truth = shared_series.values[teacher_len : teacher_len + horizon]
    mean = stacked.mean(axis=0)
    std = stacked.std(axis=0, ddof=1) if stacked.shape[0] > 1 else np.zeros(horizon)
    with open(out_dir / "trajectory.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "truth", "mean", "std"])
        for k in range(horizon):
            writer.writerow([k, repr(float(truth[k])), repr(float(mean[k])), repr(float(std[k]))])


def _write_blp_csv(result: ExperimentResult, out_dir: Path) -> None:
    with open(out_dir / "blp.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega", "pair_index", "sum"])
        for rec in result.records:
            omega = rec.metric.split("omega=")[1].rstrip("]")
            writer.writerow([omega, rec.realization, repr(rec.value)])


def _write_decay_csv(result: ExperimentResult, out_dir: Path) -> None:
    rows = {}
    for rec in result.records:
        if "[s=" not in rec.metric:
            continue
        name, s_val = rec.metric.split("[s=")
        rows.setdefault((rec.realization, s_val.rstrip("]")), {})[name] = rec.value
    with open(out_dir / "decay.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["realization", "s", "t_norm", "spectral_radius", "decay_rate"])
        for (realization, s_val), values in sorted(rows.items()):
            writer.writerow(
                [
                    realization,
                    s_val,
                    repr(values["t_norm"]),
                    repr(values["spectral_radius"]),
                    repr(values["decay_rate"]),
                ]
            )


SWEEP_PARAMS = {
    "mix_weight": ("model", "mix_weight"),
    "lambda": ("model", "mix_weight"),
    "omega": ("model", "omega"),
    "eta": ("model", "eta"),
    "gamma": ("model", "gamma"),
    "dt": ("model", "dt"),
    "h": ("model", "h"),
    "n_qubits": ("model", "n_qubits"),
    "tau_e": ("model", "tau_e"),
    "ridge": (None, "ridge"),
}


def sweep(
    config: ExperimentConfig,
    parameter: str,
    values,
    out_dir=None,
    workers: int = 1,
    skip_failures: bool = False,
) -> dict:
    """Run one experiment per parameter value; aggregate long-format CSVs."""
    values = list(values)
    if not values:
        raise ValueError("sweep needs a non-empty value list")
    if parameter not in SWEEP_PARAMS:
        raise ConfigError("sweep.parameter", f"unknown parameter {parameter!r}")
    section, fieldname = SWEEP_PARAMS[parameter]

    results = {}
    for value in values:
        if section == "model":
            cast = int(value) if fieldname in ("n_qubits", "tau_e") else float(value)
            sub = replace(config, model=replace(config.model, **{fieldname: cast}))
        else:
            sub = replace(config, **{fieldname: float(value)})
        sub_dir = Path(out_dir) / f"{parameter}={_fmt(value)}" if out_dir is not None else None
        results[value] = run_experiment(
            sub, out_dir=sub_dir, workers=workers, skip_failures=skip_failures
        )

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "sweep_records.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["param", "value", "realization", "metric", "metric_value"])
            for value in values:
                for rec in results[value].records:
                    writer.writerow(
                        [parameter, _fmt(value), rec.realization, rec.metric, repr(rec.value)]
                    )
        with open(out_dir / "sweep_summary.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["param", "value", "metric", "mean", "std", "n"])
            for value in values:
                for metric, stats in results[value].summary.items():
                    writer.writerow(
                        [
                            parameter,
                            _fmt(value),
                            metric,
                            repr(stats["mean"]),
                            repr(stats["std"]),
                            stats["n"],
                        ]
                    )
    return results


def estimate_runtime(config: ExperimentConfig) -> float:
    """Rough wall-time estimate (seconds) from a three-step probe."""
    rng = np.random.default_rng(0)
    model = build_model(config.model, rng)
    started = time.perf_counter()
    for s in (0.1, 0.5, 0.9):
        model.step(s)
    per_step = (time.perf_counter() - started) / 3.0
    phases = config.phases
    if config.task.kind == "blp":
        steps = 2 * config.task.n_steps * len(config.task.omegas)
    elif config.task.kind == "mg":
        steps = phases.washout + phases.train + config.task.horizon
    elif config.task.kind == "decay":
        steps = 40 * len(config.task.input_grid)  # eigendecompositions, not steps
    else:
        steps = phases.washout + phases.train + phases.test
    return per_step * steps * config.realizations
