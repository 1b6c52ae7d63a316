"""Input-driven Lindblad generators, propagators and their spectral split.

The generator acting on N qubits combines a transverse-field Ising
Hamiltonian whose x-field tracks the scalar input with uniform local decay:

    H(s) = sum_{i<j} J_ij x_i x_j + h sum_i z_i + h (s + 1) sum_i x_i
    L(s)[rho] = -i [H(s), rho]
                + gamma sum_i (m_i rho p_i - (p_i m_i rho + rho p_i m_i) / 2)

with m_i / p_i the lowering / raising operators on site i.  The one-step
propagator exp(L dt) decomposes into a rank-one projector onto the steady
state plus a contraction; the contraction norm controls how fast the
driven system forgets its past.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    dag,
    devectorize,
    hermitize,
    matrix_exp,
    pauli_site,
    sandwich,
    vectorize,
)


class EspViolationError(RuntimeError):
    """The generator has no unique attracting fixed point."""


# Uniqueness of the stationary state: the second-smallest |eigenvalue| of the
# generator must clear this gap.
ESP_GAP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class IsingParams:
    """Coupling matrix, field strength and provenance seed for one Hamiltonian."""

    n_qubits: int
    couplings: np.ndarray
    field: float
    seed: int | None = None

    def __post_init__(self):
        j = np.asarray(self.couplings, dtype=float)
        n = self.n_qubits
        if n < 1:
            raise ValueError("n_qubits must be positive")
        if j.shape != (n, n):
            raise ValueError(f"couplings shape {j.shape} does not match n_qubits={n}")
        if np.max(np.abs(j - j.T)) > 0:
            raise ValueError("couplings must be symmetric")
        if np.max(np.abs(np.diag(j))) > 0:
            raise ValueError("couplings must have zero diagonal")
        if np.max(np.abs(j)) > 1.0:
            raise ValueError("couplings must lie in [-1, 1]")
        if not self.field > 0:
            raise ValueError("field must be positive")
        object.__setattr__(self, "couplings", j)

    @classmethod
    def random(cls, n_qubits: int, field: float, seed: int) -> "IsingParams":
        """Sample the upper triangle uniformly from [-1, 1] and mirror it."""
        rng = np.random.default_rng(seed)
        return cls.sample(n_qubits, field, rng, seed=seed)

    @classmethod
    def sample(cls, n_qubits, field, rng, seed=None) -> "IsingParams":
        j = np.zeros((n_qubits, n_qubits))
        for i in range(n_qubits):
            for k in range(i + 1, n_qubits):
                j[i, k] = j[k, i] = rng.uniform(-1.0, 1.0)
        return cls(n_qubits=n_qubits, couplings=j, field=field, seed=seed)


@dataclass(frozen=True, eq=False)
class LindbladSpec:
    """Hamiltonian parameters plus a uniform decay rate on every site."""

    params: IsingParams
    gamma: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")

    @property
    def n_qubits(self) -> int:
        return self.params.n_qubits

    @property
    def dim(self) -> int:
        return 2**self.params.n_qubits


def build_hamiltonian(params: IsingParams, s: float) -> np.ndarray:
    """Hamiltonian at input value s in [0, 1]."""
    _check_input(s)
    h_static, h_drive = hamiltonian_terms(params)
    return h_static + s * h_drive


def hamiltonian_terms(params: IsingParams):
    """Split H(s) = static + s * drive; both pieces are Hermitian."""
    n = params.n_qubits
    h = params.field
    dim = 2**n
    static = np.zeros((dim, dim), dtype=complex)
    sx = [pauli_site("x", i, n) for i in range(n)]
    for i in range(n):
        for k in range(i + 1, n):
            jik = params.couplings[i, k]
            if jik != 0.0:
                static += jik * (sx[i] @ sx[k])
        static += h * pauli_site("z", i, n)
        static += h * sx[i]
    drive = h * sum(sx)
    return static, drive


def liouvillian_terms(spec: LindbladSpec):
    """Split L(s) = static + s * drive in superoperator form.

    The commutator and dissipator are assembled with the column-stacking
    sandwich identity; the drive part carries the input dependence alone.
    """
    n = spec.n_qubits
    dim = spec.dim
    h_static, h_drive = hamiltonian_terms(spec.params)
    eye = np.eye(dim, dtype=complex)

    static = -1j * (sandwich(h_static, eye) - sandwich(eye, h_static))
    drive = -1j * (sandwich(h_drive, eye) - sandwich(eye, h_drive))
    for i in range(n):
        lower = pauli_site("-", i, n)
        raise_lower = dag(lower) @ lower
        static += spec.gamma * (
            sandwich(lower, dag(lower))
            - 0.5 * sandwich(raise_lower, eye)
            - 0.5 * sandwich(eye, raise_lower)
        )
    return static, drive


def build_liouvillian(spec: LindbladSpec, s: float) -> np.ndarray:
    """Generator at input value s, as a dim^2 x dim^2 matrix."""
    _check_input(s)
    static, drive = liouvillian_terms(spec)
    return static + s * drive


def propagator(liouvillian: np.ndarray, dt: float) -> np.ndarray:
    """One-step map exp(L dt)."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    return matrix_exp(liouvillian * dt)


def steady_state(liouvillian: np.ndarray, residual_tol: float = 1e-9) -> np.ndarray:
    """Unique stationary state of a generator.

    The vector is taken from the eigendecomposition of exp(L) at the
    eigenvalue closest to one (better conditioned than the null space of L
    itself), then hermitized and trace-normalized.  A degenerate stationary
    manifold raises :class:`EspViolationError`.
    """
    liouvillian = np.asarray(liouvillian, dtype=complex)
    l_eigs = np.sort(np.abs(np.linalg.eigvals(liouvillian)))
    if len(l_eigs) > 1 and l_eigs[1] < ESP_GAP_TOL:
        raise EspViolationError(
            f"stationary state not unique: second-smallest |eigenvalue| "
            f"{l_eigs[1]:.3e} < {ESP_GAP_TOL:.1e}"
        )

    prop = matrix_exp(liouvillian)
    evals, evecs = np.linalg.eig(prop)
    idx = int(np.argmin(np.abs(evals - 1.0)))
    rho = hermitize(devectorize(evecs[:, idx]))
    rho = rho / np.trace(rho).real

    residual = np.linalg.norm(liouvillian @ vectorize(rho), np.inf)
    if residual > residual_tol:
        # Polish through the trace-constrained least-squares system.
        dim2 = liouvillian.shape[0]
        eye_row = vectorize(np.eye(rho.shape[0], dtype=complex))
        a = np.vstack([liouvillian, eye_row.conj()])
        b = np.zeros(dim2 + 1, dtype=complex)
        b[-1] = 1.0
        sol, *_ = np.linalg.lstsq(a, b, rcond=None)
        rho = hermitize(devectorize(sol))
        rho = rho / np.trace(rho).real
        residual = np.linalg.norm(liouvillian @ vectorize(rho), np.inf)
        if residual > residual_tol:
            raise EspViolationError(f"steady-state residual {residual:.3e} > {residual_tol:.1e}")
    return rho


@dataclass(frozen=True, eq=False)
class SpectralSplit:
    """Propagator decomposition P = S + T with S the steady-state projector.

    ``t_norm`` is the spectral norm (largest singular value) of T in the
    Hilbert-Schmidt representation; ``spectral_radius`` its largest
    eigenvalue magnitude.  The per-step forgetting rate is certified by the
    norm when it is below one and by the radius otherwise.
    """

    steady: np.ndarray
    s_part: np.ndarray
    t_part: np.ndarray
    t_norm: float
    spectral_radius: float
    decay_rate: float = field(init=False)

    def __post_init__(self):
        if self.spectral_radius >= 1.0:
            raise EspViolationError(
                f"contraction part has spectral radius {self.spectral_radius:.6f} >= 1"
            )
        rate_source = self.t_norm if self.t_norm < 1.0 else self.spectral_radius
        object.__setattr__(self, "decay_rate", -float(np.log(rate_source)))


def spectral_split(prop: np.ndarray, steady: np.ndarray) -> SpectralSplit:
    """Split a propagator into steady-state projector and contraction."""
    prop = np.asarray(prop, dtype=complex)
    steady_vec = vectorize(steady)
    dim = steady.shape[0]
    identity_vec = vectorize(np.eye(dim, dtype=complex))
    overlap = identity_vec.conj() @ steady_vec
    s_part = np.outer(steady_vec, identity_vec.conj()) / overlap
    t_part = prop - s_part
    t_norm = float(np.linalg.norm(t_part, 2))
    spectral_radius = float(np.max(np.abs(np.linalg.eigvals(t_part))))
    return SpectralSplit(
        steady=steady,
        s_part=s_part,
        t_part=t_part,
        t_norm=t_norm,
        spectral_radius=spectral_radius,
    )


def split_at_input(spec: LindbladSpec, dt: float, s: float) -> SpectralSplit:
    """Build generator, propagator and spectral split at one input value."""
    liou = build_liouvillian(spec, s)
    return spectral_split(propagator(liou, dt), steady_state(liou))


def decay_rate_bound(spec: LindbladSpec, dt: float, input_grid) -> float:
    """Worst-case forgetting rate over a grid of input values.

    Returns the minimum decay rate; any grid point without a unique
    attracting steady state propagates :class:`EspViolationError`.
    """
    grid = list(input_grid)
    if not grid:
        raise ValueError("input_grid must be non-empty")
    for s in grid:
        _check_input(s)
    return min(split_at_input(spec, dt, s).decay_rate for s in grid)


def choi_matrix(prop: np.ndarray) -> np.ndarray:
    """Choi matrix of a superoperator in the column-stacking convention.

    The map is completely positive iff the result is PSD, and
    trace-preserving iff the partial trace over the output factor is the
    identity.
    """
    prop = np.asarray(prop, dtype=complex)
    dim = int(np.sqrt(prop.shape[0]))
    p4 = np.empty((dim, dim, dim, dim), dtype=complex)
    for r in range(dim):
        for c in range(dim):
            p4[:, :, r, c] = devectorize(prop[:, c * dim + r])
    # Index order [(out_row, in_row), (out_col, in_col)].
    return p4.transpose(0, 2, 1, 3).reshape(dim * dim, dim * dim)


def _check_input(s: float) -> None:
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"input value {s} outside [0, 1]")
