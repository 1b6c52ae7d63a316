"""Quantum reservoir computing simulator with tunable non-Markovian memory."""

from .dynamics import (
    EspViolationError,
    IsingParams,
    LindbladSpec,
    SpectralSplit,
    build_hamiltonian,
    build_liouvillian,
    decay_rate_bound,
    propagator,
    spectral_split,
    steady_state,
)
from .experiments import ExperimentConfig, run_experiment, sweep
from .nonmarkov import BlpResult, blp_measure, trace_distance
from .readout import ObservableSet, ReadoutWeights, capacity, measure, mse, predict, train
from .reservoirs import (
    EmbeddedReservoir,
    FeatureRecord,
    MarkovReservoir,
    ResidualReservoir,
    depolarize_aux,
    depolarizing_kraus,
    partial_swap_unitary,
    run_sequence,
)
from .tasks import (
    ForecastProtocol,
    InputSeries,
    MackeyGlassParams,
    closed_loop_run,
    forecast_target,
    gen_uniform_inputs,
    mackey_glass,
    monomial_target,
    santa_fe_load,
    stm_target,
)

__all__ = [
    "BlpResult",
    "EmbeddedReservoir",
    "EspViolationError",
    "ExperimentConfig",
    "FeatureRecord",
    "ForecastProtocol",
    "InputSeries",
    "IsingParams",
    "LindbladSpec",
    "MackeyGlassParams",
    "MarkovReservoir",
    "ObservableSet",
    "ReadoutWeights",
    "ResidualReservoir",
    "SpectralSplit",
    "blp_measure",
    "build_hamiltonian",
    "build_liouvillian",
    "capacity",
    "closed_loop_run",
    "decay_rate_bound",
    "depolarize_aux",
    "depolarizing_kraus",
    "forecast_target",
    "partial_swap_unitary",
    "gen_uniform_inputs",
    "mackey_glass",
    "measure",
    "monomial_target",
    "mse",
    "predict",
    "propagator",
    "run_experiment",
    "run_sequence",
    "santa_fe_load",
    "spectral_split",
    "steady_state",
    "stm_target",
    "sweep",
    "trace_distance",
    "train",
]

__version__ = "0.1.0"
