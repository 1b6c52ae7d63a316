"""Task generators and drivers: memory targets, chaotic series, forecasting.

Alignment convention: a target array returned together with a ``start``
index pairs value ``j`` with reservoir step ``start + j``.  Memory targets
depend only on inputs at or before the paired step; forecasting targets on
strictly later ones.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .readout import ReadoutWeights, measure, predict


class DataFormatError(ValueError):
    """A data file is missing, empty, or malformed."""


@dataclass(frozen=True, eq=False)
class InputSeries:
    """Scalar driving sequence in [0, 1] with provenance and scaling record."""

    values: np.ndarray
    provenance: str
    seed: int | None = None
    raw: np.ndarray | None = None
    scale_min: float = 0.0
    scale_max: float = 1.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise ValueError("input values must lie in [0, 1]")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def unscale(self, scaled) -> np.ndarray:
        """Invert the recorded affine rescaling."""
        return np.asarray(scaled) * (self.scale_max - self.scale_min) + self.scale_min


def gen_uniform_inputs(length: int, seed: int) -> InputSeries:
    """I.i.d. uniform [0, 1] inputs, deterministic per seed."""
    if length < 1:
        raise ValueError("length must be at least 1")
    values = np.random.default_rng(seed).uniform(0.0, 1.0, size=length)
    return InputSeries(values=values, provenance="uniform-random", seed=seed)


def _series_values(inputs) -> np.ndarray:
    if isinstance(inputs, InputSeries):
        return inputs.values
    return np.asarray(inputs, dtype=float)


def stm_target(inputs, tau: int):
    """Recall the input tau steps back: target for step k is s[k - tau].

    Returns ``(targets, start)`` with ``targets[j]`` paired to step
    ``start + j`` and ``start == tau``.
    """
    values = _series_values(inputs)
    if not 0 <= tau < len(values):
        raise ValueError(f"tau {tau} out of range for series of length {len(values)}")
    if tau == 0:
        return values.copy(), 0
    return values[:-tau].copy(), tau


def monomial_target(inputs, d1: int = 0, d2: int = 10):
    """Product of two delayed inputs: target for step k is s[k-d1] * s[k-d2]."""
    values = _series_values(inputs)
    dmax = max(d1, d2)
    if d1 < 0 or d2 < 0 or dmax >= len(values):
        raise ValueError(f"delays ({d1}, {d2}) out of range for length {len(values)}")
    length = len(values) - dmax
    left = values[dmax - d1 : dmax - d1 + length]
    right = values[dmax - d2 : dmax - d2 + length]
    return left * right, dmax


def forecast_target(inputs, steps_ahead: int):
    """Predict the input steps_ahead into the future: target for k is s[k + n]."""
    values = _series_values(inputs)
    if not 1 <= steps_ahead < len(values):
        raise ValueError(f"steps_ahead {steps_ahead} out of range for length {len(values)}")
    return values[steps_ahead:].copy(), 0


@dataclass(frozen=True)
class MackeyGlassParams:
    """Delay differential equation ds/dt = -decay*s + drive*s_tau/(1+s_tau^exponent)."""

    decay: float = 0.1
    drive: float = 0.2
    exponent: int = 10
    delay: float = 17.0
    sample_spacing: float = 3.0
    integrator_step: float = 0.1
    history_value: float = 0.9
    history_jitter: float = 0.01
    transient: float = 1000.0

    def __post_init__(self):
        for name, value, quantum in (
            ("delay", self.delay, self.integrator_step),
            ("sample_spacing", self.sample_spacing, self.integrator_step),
        ):
            ratio = value / quantum
            if abs(ratio - round(ratio)) > 1e-9:
                raise ValueError(f"integrator_step must divide {name} exactly")
        if self.integrator_step >= self.sample_spacing:
            raise ValueError("integrator_step must be smaller than sample_spacing")


def mackey_glass(
    params: MackeyGlassParams, n_samples: int, seed: int | None = None
) -> InputSeries:
    """Integrate the delay equation and return samples rescaled to [0, 1].

    Fixed-step fourth-order Runge-Kutta; the delayed value for substages is
    read from the stored grid history through four-point cubic interpolation
    (linear interpolation would cap the global order at two and break the
    step-halving convergence bound).  The history on the initial delay
    interval is a seeded constant, so halving the step reproduces the same
    trajectory up to truncation error.  A transient is discarded before
    sampling starts; min/max of the emitted window set the scaling, which is
    recorded for inversion.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    h = params.integrator_step
    delay_steps = int(round(params.delay / h))
    stride = int(round(params.sample_spacing / h))

    rng = np.random.default_rng(seed)
    jitter = rng.uniform(-params.history_jitter, params.history_jitter) if seed is not None else 0.0
    history_value = params.history_value + jitter

    transient_steps = int(math.ceil(params.transient / h))
    total_steps = transient_steps + (n_samples - 1) * stride + 1
    # Full grid trajectory: history on [-delay - h, 0] then one slot per step.
    grid = np.empty(delay_steps + 2 + total_steps, dtype=float)
    grid[: delay_steps + 2] = history_value
    cursor = delay_steps + 1  # index of the current time point

    def delayed(theta: float) -> float:
        """Cubic interpolation of s(t - delay + theta * h) for theta in [0, 1].

        The solution has a derivative kink where the constant history meets
        the integrated trajectory; stencils are kept on one side of it
        (exact constant inside the history, forward stencil in the first
        interval after it) so the interpolation stays fourth order.
        """
        i = cursor - delay_steps
        if theta == 0.0:
            return grid[i]
        if theta == 1.0:
            return grid[i + 1]
        steps_past_kink = i - (delay_steps + 1)
        if steps_past_kink < 0:
            return history_value
        if steps_past_kink == 0:
            y0, y1, y2, y3 = grid[i : i + 4]
            return (
                -(theta - 1.0) * (theta - 2.0) * (theta - 3.0) / 6.0 * y0
                + theta * (theta - 2.0) * (theta - 3.0) / 2.0 * y1
                - theta * (theta - 1.0) * (theta - 3.0) / 2.0 * y2
                + theta * (theta - 1.0) * (theta - 2.0) / 6.0 * y3
            )
        ym1, y0, y1, y2 = grid[i - 1 : i + 3]
        return (
            -theta * (theta - 1.0) * (theta - 2.0) / 6.0 * ym1
            + (theta + 1.0) * (theta - 1.0) * (theta - 2.0) / 2.0 * y0
            - (theta + 1.0) * theta * (theta - 2.0) / 2.0 * y1
            + (theta + 1.0) * theta * (theta - 1.0) / 6.0 * y2
        )

    def rhs(value: float, lagged: float) -> float:
        return -params.decay * value + params.drive * lagged / (1.0 + lagged**params.exponent)

    current = history_value
    raw = np.empty(n_samples, dtype=float)
    emitted = 0
    for step in range(total_steps):
        if step >= transient_steps and (step - transient_steps) % stride == 0:
            raw[emitted] = current
            emitted += 1
            if emitted == n_samples:
                break
        k1 = rhs(current, delayed(0.0))
        k2 = rhs(current + 0.5 * h * k1, delayed(0.5))
        k3 = rhs(current + 0.5 * h * k2, delayed(0.5))
        k4 = rhs(current + h * k3, delayed(1.0))
        current = current + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        cursor += 1
        grid[cursor] = current

    lo, hi = float(raw.min()), float(raw.max())
    span = hi - lo
    scaled = (raw - lo) / span if span > 0 else np.zeros_like(raw)
    return InputSeries(
        values=scaled,
        provenance="mackey-glass",
        seed=seed,
        raw=raw,
        scale_min=lo,
        scale_max=hi if span > 0 else lo + 1.0,
    )


def santa_fe_load(path) -> InputSeries:
    """Load the laser-intensity series (one integer per line), rescaled to [0, 1]."""
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"dataset file not found: {path}")
    raw = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                raw.append(float(text))
            except ValueError:
                raise DataFormatError(f"{path}:{lineno}: non-numeric line {text!r}") from None
    if not raw:
        raise DataFormatError(f"dataset file is empty: {path}")
    raw = np.asarray(raw, dtype=float)
    lo, hi = float(raw.min()), float(raw.max())
    span = hi - lo
    scaled = (raw - lo) / span if span > 0 else np.zeros_like(raw)
    return InputSeries(
        values=scaled,
        provenance="santa-fe",
        raw=raw,
        scale_min=lo,
        scale_max=hi if span > 0 else lo + 1.0,
    )


def save_series_csv(series: InputSeries, path) -> None:
    """Cache a generated series as columnar text with header t,raw,scaled."""
    raw = series.raw if series.raw is not None else series.unscale(series.values)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "raw", "scaled"])
        for t, (r, s) in enumerate(zip(raw, series.values)):
            writer.writerow([t, repr(float(r)), repr(float(s))])


def load_series_csv(path) -> InputSeries:
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"series file not found: {path}")
    raw, scaled = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) != {"t", "raw", "scaled"}:
            raise DataFormatError(f"{path}: expected header t,raw,scaled")
        for row in reader:
            raw.append(float(row["raw"]))
            scaled.append(float(row["scaled"]))
    raw = np.asarray(raw)
    scaled = np.asarray(scaled)
    lo = float(raw.min()) if raw.size else 0.0
    hi = float(raw.max()) if raw.size else 1.0
    return InputSeries(
        values=scaled,
        provenance="cache",
        raw=raw,
        scale_min=lo,
        scale_max=hi if hi > lo else lo + 1.0,
    )


@dataclass(frozen=True)
class ForecastProtocol:
    """How the test phase is driven: by the true series or by fed-back outputs."""

    mode: str = "autonomous"
    horizon: int = 150
    clip: bool = True

    def __post_init__(self):
        if self.mode not in ("teacher-forced", "autonomous"):
            raise ValueError(f"unknown forecast mode {self.mode!r}")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")


@dataclass
class ClosedLoopResult:
    predictions: np.ndarray
    clip_events: int


def closed_loop_run(
    model, weights: ReadoutWeights, observables, protocol: ForecastProtocol
) -> ClosedLoopResult:
    """Run the autonomous test phase, feeding each prediction back as input.

    The model must already be washed out and positioned after the final
    teacher-forced step.  The first prediction is read from the current
    state, so a horizon of one reproduces the teacher-forced one-step
    prediction exactly.
    """
    if protocol.mode != "autonomous":
        raise ValueError("closed_loop_run drives the model autonomously; "
                         "teacher-forced evaluation goes through run_sequence")
    predictions = np.empty(protocol.horizon, dtype=float)
    clip_events = 0
    for step in range(protocol.horizon):
        features = measure(model.observed_state(), observables)
        value = float(predict(weights, features))
        if not np.isfinite(value):
            raise RuntimeError(f"non-finite prediction at autonomous step {step}")
        if protocol.clip:
            clipped = min(max(value, 0.0), 1.0)
            if clipped != value:
                clip_events += 1
            value = clipped
        predictions[step] = value
        if step + 1 < protocol.horizon:
            model.step(value)
    return ClosedLoopResult(predictions=predictions, clip_events=clip_events)
