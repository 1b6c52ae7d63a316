"""Reservoir update rules: memoryless, residual-mix, and auxiliary-embedded.

All three models share the same driving scheme (the scalar input enters
through the Hamiltonian x-field) and the same step interface:

* ``step(s)`` advances the internal state by one input,
* ``observed_state()`` returns the density matrix observables act on.

The memoryless model applies exp(L(s) dt) to the current state only.  The
residual model first mixes the current state with the state a fixed number
of steps in the past.  The embedded model evolves a doubled register of
reservoir plus auxiliary qubits: a local Lindblad step on the reservoir
half, a partial swap between each reservoir/auxiliary pair, then a
depolarizing channel of strength omega on every auxiliary qubit.  omega = 1
scrubs the auxiliaries each step (memoryless reduced dynamics); smaller
omega lets them carry reservoir history forward.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .dynamics import LindbladSpec, liouvillian_terms
from .linalg import (
    StateInvariantError,
    check_density_matrix,
    hermitize,
    kron_all,
    matrix_exp,
    partial_trace,
    pauli_site,
)

# Step hygiene: states are re-hermitized and trace-renormalized, while
# positivity is only monitored; clipping would mask propagator bugs.
STEP_PSD_TOL = 1e-7


def _check_input(s: float) -> None:
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"input value {s} outside [0, 1]")


def _hygiene(rho: np.ndarray) -> np.ndarray:
    rho = hermitize(rho)
    rho = rho / np.trace(rho).real
    min_eig = float(np.linalg.eigvalsh(rho).min())
    if min_eig < -STEP_PSD_TOL:
        raise StateInvariantError(f"state drifted from PSD: min eigenvalue {min_eig:.3e}")
    return rho


class MarkovReservoir:
    """State updated by the input-dependent propagator alone."""

    def __init__(self, spec: LindbladSpec, dt: float, state: np.ndarray):
        if not dt > 0:
            raise ValueError("dt must be positive")
        self.spec = spec
        self.dt = dt
        self.state = check_density_matrix(np.asarray(state, dtype=complex)).copy()
        static, drive = liouvillian_terms(spec)
        self._gen_static = static * dt
        self._gen_drive = drive * dt

    def step(self, s: float) -> None:
        _check_input(s)
        prop = matrix_exp(self._gen_static + s * self._gen_drive)
        self.state = _apply_superop(prop, self.state)

    def observed_state(self) -> np.ndarray:
        return self.state


class ResidualReservoir:
    """Mixes the current state with a delayed one, then propagates.

    The state entering the mix lags the state being produced by exactly
    tau_e steps, which places the memory revival of the short-term-memory
    task at delay tau_e.  The history buffer keeps the last tau_e + 1 states
    and starts filled with copies of the initial state so the first steps
    are well defined; any cold-start bias is erased by the washout phase.
    """

    def __init__(
        self,
        spec: LindbladSpec,
        dt: float,
        state: np.ndarray,
        mix_weight: float,
        tau_e: int,
    ):
        if not dt > 0:
            raise ValueError("dt must be positive")
        if not 0.0 <= mix_weight <= 1.0:
            raise ValueError("mix_weight must lie in [0, 1]")
        if tau_e < 1:
            raise ValueError("tau_e must be a positive integer")
        self.spec = spec
        self.dt = dt
        self.mix_weight = float(mix_weight)
        self.tau_e = int(tau_e)
        self.state = check_density_matrix(np.asarray(state, dtype=complex)).copy()
        self.buffer = deque([self.state.copy() for _ in range(tau_e + 1)], maxlen=tau_e + 1)
        static, drive = liouvillian_terms(spec)
        self._gen_static = static * dt
        self._gen_drive = drive * dt

    def step(self, s: float) -> None:
        _check_input(s)
        lam = self.mix_weight
        # buffer[1] is the state tau_e steps before the state produced here;
        # buffer[0] (one step older) is kept so the full window is inspectable.
        mixed = lam * self.state + (1.0 - lam) * self.buffer[1]
        prop = matrix_exp(self._gen_static + s * self._gen_drive)
        self.state = _apply_superop(prop, mixed)
        self.buffer.append(self.state.copy())

    def observed_state(self) -> np.ndarray:
        return self.state


def partial_swap_unitary(eta: float, site: int, n: int) -> np.ndarray:
    """cos(eta) I + i sin(eta) S on 2n qubits, swapping pair (site, n + site)."""
    if not 0.0 <= eta < math.pi / 2:
        raise ValueError("eta must lie in [0, pi/2)")
    if not 0 <= site < n:
        raise ValueError(f"site {site} out of range for {n} reservoir qubits")
    swap = _swap_operator(site, n + site, 2 * n)
    dim = swap.shape[0]
    return math.cos(eta) * np.eye(dim, dtype=complex) + 1j * math.sin(eta) * swap


def _swap_operator(a: int, b: int, n_qubits: int) -> np.ndarray:
    """Permutation matrix exchanging the basis bits of qubits a and b."""
    dim = 2**n_qubits
    swap = np.zeros((dim, dim), dtype=complex)
    shift_a = n_qubits - 1 - a
    shift_b = n_qubits - 1 - b
    for idx in range(dim):
        bit_a = (idx >> shift_a) & 1
        bit_b = (idx >> shift_b) & 1
        swapped = idx & ~(1 << shift_a) & ~(1 << shift_b)
        swapped |= bit_b << shift_a
        swapped |= bit_a << shift_b
        swap[swapped, idx] = 1.0
    return swap


def depolarizing_kraus(omega: float) -> list[np.ndarray]:
    """Single-qubit Kraus operators of the depolarizing channel."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError("omega must lie in [0, 1]")
    return [
        math.sqrt(1.0 - 3.0 * omega / 4.0) * np.eye(2, dtype=complex),
        math.sqrt(omega / 4.0) * pauli_site("x", 0, 1),
        math.sqrt(omega / 4.0) * pauli_site("y", 0, 1),
        math.sqrt(omega / 4.0) * pauli_site("z", 0, 1),
    ]


def _depolarize_qubit(rho: np.ndarray, qubit: int, n_total: int, omega: float) -> np.ndarray:
    """Single-qubit depolarizing channel in its mixed-replacement form.

    The Kraus sum (1 - 3w/4) rho + (w/4)(X rho X + Y rho Y + Z rho Z)
    equals (1 - w) rho + w (I_q / 2 tensor Tr_q rho); the latter avoids six
    full-dimension matrix products per qubit.
    """
    before = 2**qubit
    after = 2 ** (n_total - qubit - 1)
    t = rho.reshape(before, 2, after, before, 2, after)
    reduced = t[:, 0, :, :, 0, :] + t[:, 1, :, :, 1, :]
    out = np.zeros_like(t)
    out[:, 0, :, :, 0, :] = 0.5 * reduced
    out[:, 1, :, :, 1, :] = 0.5 * reduced
    return (1.0 - omega) * rho + omega * out.reshape(rho.shape)


def depolarize_aux(rho: np.ndarray, omega: float, n_reservoir: int | None = None) -> np.ndarray:
    """Depolarize every auxiliary qubit of a 2n-qubit joint state."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError("omega must lie in [0, 1]")
    rho = np.asarray(rho, dtype=complex)
    n_total = int(round(math.log2(rho.shape[0])))
    n = n_total // 2 if n_reservoir is None else n_reservoir
    out = rho.copy()
    if omega == 0.0:
        return out
    for aux in range(n, 2 * n):
        out = _depolarize_qubit(out, aux, n_total, omega)
    return out


class EmbeddedReservoir:
    """Reservoir qubits coupled pairwise to auxiliary qubits.

    The joint register holds the reservoir on qubits 0..n-1 and the
    auxiliaries on qubits n..2n-1.  One step applies, in order: the
    reservoir-local propagator (acting as E tensor id, never materialized on
    the joint index space), all partial swaps (disjoint supports, applied in
    ascending site order for determinism), and the auxiliary depolarizing
    channels.
    """

    def __init__(
        self,
        spec: LindbladSpec,
        dt: float,
        eta: float,
        omega: float,
        reservoir_state: np.ndarray,
        aux_state: np.ndarray | None = None,
    ):
        if not dt > 0:
            raise ValueError("dt must be positive")
        if not 0.0 <= eta < math.pi / 2:
            raise ValueError("eta must lie in [0, pi/2)")
        if not 0.0 <= omega <= 1.0:
            raise ValueError("omega must lie in [0, 1]")
        self.spec = spec
        self.dt = dt
        self.eta = float(eta)
        self.omega = float(omega)
        n = spec.n_qubits
        self.n_qubits = n

        check_density_matrix(np.asarray(reservoir_state, dtype=complex))
        if aux_state is None:
            # Maximally mixed auxiliaries match the omega = 1 fixed point, so
            # the memoryless limit starts without an auxiliary transient.
            aux_state = kron_all([np.eye(2, dtype=complex) / 2.0] * n)
        self.joint_state = np.kron(np.asarray(reservoir_state, dtype=complex), aux_state)

        static, drive = liouvillian_terms(spec)
        self._gen_static = static * dt
        self._gen_drive = drive * dt
        swaps = [partial_swap_unitary(eta, i, n) for i in range(n)]
        total = swaps[0]
        for s_op in swaps[1:]:
            total = total @ s_op
        self._swap_all = total

    def step(self, s: float) -> None:
        _check_input(s)
        prop = matrix_exp(self._gen_static + s * self._gen_drive)
        joint = _apply_superop_left_factor(prop, self.joint_state, 2**self.n_qubits)
        joint = self._swap_all @ joint @ self._swap_all.conj().T
        if self.omega > 0.0:
            n = self.n_qubits
            for aux in range(n, 2 * n):
                joint = _depolarize_qubit(joint, aux, 2 * n, self.omega)
        self.joint_state = _hygiene(joint)

    def observed_state(self) -> np.ndarray:
        """Reservoir marginal; measuring it equals measuring O tensor id jointly."""
        return self.reservoir_marginal()

    def reservoir_marginal(self) -> np.ndarray:
        n = self.n_qubits
        return partial_trace(self.joint_state, [2**n, 2**n], keep=[0])


def _apply_superop(prop: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply a superoperator (column-stacking convention) with step hygiene."""
    dim = rho.shape[0]
    out = (prop @ rho.flatten(order="F")).reshape((dim, dim), order="F")
    return _hygiene(out)


def _apply_superop_left_factor(prop: np.ndarray, joint: np.ndarray, dim_left: int) -> np.ndarray:
    """Apply E tensor id to a bipartite state without forming the joint map.

    ``prop`` acts on the vectorized left factor; the right (auxiliary)
    indices ride along.  Index order after the reshape is
    (left row, right row, left col, right col).
    """
    dim_right = joint.shape[0] // dim_left
    # Fortran-order reshape of the column-stacking superoperator gives
    # p4[i, j, k, l] mapping rho[k, l] -> rho'[i, j] on the left factor.
    p4 = prop.reshape(dim_left, dim_left, dim_left, dim_left, order="F")
    rho4 = joint.reshape(dim_left, dim_right, dim_left, dim_right)
    out = np.einsum("ijkl,kalb->iajb", p4, rho4, optimize=True)
    return out.reshape(joint.shape)


@dataclass(frozen=True)
class FeatureRecord:
    """Observable expectations measured after one time step."""

    time_index: int
    features: np.ndarray


def run_sequence(model, inputs, observables, washout: int) -> list[FeatureRecord]:
    """Drive a reservoir through an input sequence and record features.

    The model is stepped once per input; expectations are recorded only for
    steps at or beyond the washout index.  Deterministic given the model
    state and inputs.
    """
    from .readout import measure  # local import to keep module layers acyclic

    inputs = np.asarray(inputs, dtype=float)
    if inputs.size == 0:
        raise ValueError("input sequence is empty")
    if not 0 <= washout < inputs.size:
        raise ValueError(f"washout {washout} must lie in [0, {inputs.size - 1}]")
    records = []
    for k, s in enumerate(inputs):
        model.step(float(s))
        if k >= washout:
            records.append(FeatureRecord(time_index=k, features=measure(model.observed_state(), observables)))
    return records
