"""Observable measurement, linear readout training, and task metrics.

The readout is an affine map on Pauli-string expectations.  Training is
plain least squares (minimum-norm on rank deficiency); a ridge penalty is
available but off by default.  Task quality is scored either by mean
squared error or by the squared correlation between output and target,
which for an optimally trained scalar readout coincides with one minus the
normalized minimum MSE.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .linalg import pauli_site
from .reservoirs import FeatureRecord

_AXES = ("x", "y", "z")


class UndefinedCapacityError(ValueError):
    """Capacity is undefined when either series has zero variance."""


@dataclass(frozen=True, eq=False)
class ObservableSet:
    """Pauli strings of length one or two on an n-qubit register.

    Each descriptor is a tuple of (site, axis) pairs; operator matrices are
    built once at construction.
    """

    n_qubits: int
    strings: tuple
    matrices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mats = []
        for string in self.strings:
            if not 1 <= len(string) <= 2:
                raise ValueError("observable strings must have length 1 or 2")
            sites = [site for site, _ in string]
            if len(set(sites)) != len(sites):
                raise ValueError(f"repeated site in observable string {string}")
            op = np.eye(2**self.n_qubits, dtype=complex)
            for site, axis in string:
                op = op @ pauli_site(axis, site, self.n_qubits)
            mats.append(op)
        object.__setattr__(self, "matrices", np.array(mats))

    def __len__(self) -> int:
        return len(self.strings)

    @classmethod
    def z_singles(cls, n_qubits: int) -> "ObservableSet":
        return cls(n_qubits, tuple(((i, "z"),) for i in range(n_qubits)))

    @classmethod
    def singles(cls, n_qubits: int) -> "ObservableSet":
        strings = tuple(((i, ax),) for i in range(n_qubits) for ax in _AXES)
        return cls(n_qubits, strings)

    @classmethod
    def singles_and_pairs(cls, n_qubits: int) -> "ObservableSet":
        singles = [((i, ax),) for i in range(n_qubits) for ax in _AXES]
        pairs = [
            ((i, ax_a), (j, ax_b))
            for i, j in combinations(range(n_qubits), 2)
            for ax_a, ax_b in product(_AXES, repeat=2)
        ]
        return cls(n_qubits, tuple(singles + pairs))


def measure(rho: np.ndarray, observables: ObservableSet) -> np.ndarray:
    """Expectation values of every observable on a state.

    Residual imaginary parts beyond 1e-10 indicate a broken state or
    operator and are rejected rather than silently discarded.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[0] != 2**observables.n_qubits:
        raise ValueError(
            f"state dimension {rho.shape[0]} does not match "
            f"{observables.n_qubits}-qubit observables"
        )
    values = np.einsum("kij,ji->k", observables.matrices, rho, optimize=True)
    max_imag = float(np.max(np.abs(values.imag))) if len(values) else 0.0
    if max_imag > 1e-10:
        raise ValueError(f"expectation has imaginary part {max_imag:.3e}")
    return values.real


@dataclass(frozen=True, eq=False)
class ReadoutWeights:
    bias: float
    weights: np.ndarray


def _design_matrix(features: np.ndarray) -> np.ndarray:
    ones = np.ones((features.shape[0], 1))
    return np.hstack([ones, features])


def _as_feature_matrix(features) -> np.ndarray:
    if len(features) and isinstance(features[0], FeatureRecord):
        return np.array([rec.features for rec in features], dtype=float)
    return np.asarray(features, dtype=float)


def train(features, targets, ridge: float = 0.0) -> ReadoutWeights:
    """Least-squares fit of an affine readout.

    ``ridge`` adds an L2 penalty on the non-bias weights; the default 0
    reproduces ordinary least squares with the minimum-norm solution on
    rank-deficient feature matrices.
    """
    x = _as_feature_matrix(features)
    y = np.asarray(targets, dtype=float)
    if x.ndim != 2:
        raise ValueError("features must form a 2-d matrix")
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"{x.shape[0]} feature rows vs {y.shape[0]} targets")
    if x.shape[0] < x.shape[1] + 1:
        raise ValueError("need at least one sample per weight plus bias")
    design = _design_matrix(x)
    if ridge > 0.0:
        penalty = ridge * np.eye(design.shape[1])
        penalty[0, 0] = 0.0  # bias unpenalized
        beta = np.linalg.solve(design.T @ design + penalty, design.T @ y)
    else:
        beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    return ReadoutWeights(bias=float(beta[0]), weights=beta[1:])


def predict(weights: ReadoutWeights, features) -> float | np.ndarray:
    """Affine readout output for one feature vector or a matrix of them."""
    if isinstance(features, FeatureRecord):
        features = features.features
    x = np.asarray(features, dtype=float)
    if x.ndim == 1 and x.shape[0] != weights.weights.shape[0]:
        raise ValueError(f"{x.shape[0]} features vs {weights.weights.shape[0]} weights")
    if x.ndim == 2 and x.shape[1] != weights.weights.shape[0]:
        raise ValueError(f"{x.shape[1]} features vs {weights.weights.shape[0]} weights")
    return weights.bias + x @ weights.weights


def predict_series(weights: ReadoutWeights, records) -> np.ndarray:
    return predict(weights, _as_feature_matrix(records))


def capacity(outputs, targets) -> float:
    """Squared correlation cov^2 / (var * var) between two series, in [0, 1]."""
    a = np.asarray(outputs, dtype=float)
    b = np.asarray(targets, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if a.size < 2:
        raise ValueError("capacity needs at least two samples")
    da = a - a.mean()
    db = b - b.mean()
    var_a = float(da @ da)
    var_b = float(db @ db)
    if var_a == 0.0 or var_b == 0.0:
        raise UndefinedCapacityError("capacity undefined for a constant series")
    value = float((da @ db) ** 2 / (var_a * var_b))
    if not np.isfinite(value):
        raise UndefinedCapacityError("capacity evaluated to a non-finite value")
    # Cauchy-Schwarz bounds the exact value by 1; shave rounding overshoot.
    return min(value, 1.0)


def mse(outputs, targets) -> float:
    """Mean squared error between two equal-length series."""
    a = np.asarray(outputs, dtype=float)
    b = np.asarray(targets, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if a.size < 1:
        raise ValueError("mse needs at least one sample")
    return float(np.mean((a - b) ** 2))


def feature_condition_number(features) -> float:
    """max/min singular value of the feature matrix; inf when rank deficient."""
    x = _as_feature_matrix(features)
    sv = np.linalg.svd(x, compute_uv=False)
    smallest = float(sv.min())
    if smallest == 0.0:
        return float("inf")
    return float(sv.max()) / smallest
