"""Dense complex linear algebra for multi-qubit open systems.

Conventions fixed here and used everywhere else in the package:

* Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
  the computational-basis index.
* Basis state |0> is the +1 eigenstate of sigma_z.  The lowering operator
  sigma_minus maps |0> -> |1>, so a lone dissipative qubit relaxes to the
  sigma_z = -1 eigenstate.
* Vectorization stacks columns, which makes
  ``vec(A @ rho @ B) == kron(B.T, A) @ vec(rho)``
  the operator-to-superoperator identity (see :func:`sandwich`).

Everything is dense ``complex128``; the largest matrices handled here are
4^N x 4^N superoperators with N <= 6.
"""

from __future__ import annotations

import math

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

_PAULI = {
    "x": SIGMA_X,
    "y": SIGMA_Y,
    "z": SIGMA_Z,
    "+": SIGMA_PLUS,
    "-": SIGMA_MINUS,
}


class StateInvariantError(ValueError):
    """A matrix fails a density-matrix invariant (hermiticity, trace, PSD)."""


def dag(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two matrices (thin wrapper over numpy)."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(ops) -> np.ndarray:
    """Kronecker product of a sequence of matrices, left to right."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def pauli(axis: str) -> np.ndarray:
    """Single-qubit Pauli (or ladder) operator for axis in {x, y, z, +, -}."""
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def pauli_site(axis: str, site: int, n_qubits: int) -> np.ndarray:
    """Pauli operator on one site of an n-qubit register, identity elsewhere."""
    if not 0 <= site < n_qubits:
        raise ValueError(f"site {site} out of range for {n_qubits} qubits")
    ops = [IDENTITY_2] * n_qubits
    ops[site] = pauli(axis)
    return kron_all(ops)


# Taylor factorials for the degree-16 kernel used below.
_EXP_COEFFS = [1.0 / math.factorial(k) for k in range(17)]


def matrix_exp(a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a Taylor kernel.

    The input is scaled until its 1-norm is at most 0.5 and a degree-16
    Taylor polynomial (truncation error ~2e-20 at that norm, comfortably
    inside any tol >= 1e-12) is evaluated in Paterson-Stockmeyer form before
    squaring back up.  Eigendecomposition is deliberately avoided:
    Liouvillians are non-normal and their eigenbases can be arbitrarily
    ill-conditioned.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix_exp needs a square matrix, got shape {a.shape}")
    if not 0.0 < tol:
        raise ValueError("tol must be positive")
    dim = a.shape[0]
    norm = np.linalg.norm(a, 1)
    if not np.isfinite(norm):
        raise ValueError("matrix_exp input contains non-finite entries")
    if norm == 0.0:
        return np.eye(dim, dtype=complex)

    squarings = max(0, int(math.ceil(math.log2(norm / 0.5))))
    b = a / (2.0**squarings)

    eye = np.eye(dim, dtype=complex)
    b2 = b @ b
    b3 = b2 @ b
    b4 = b2 @ b2
    c = _EXP_COEFFS

    def chunk(j: int) -> np.ndarray:
        return c[j] * eye + c[j + 1] * b + c[j + 2] * b2 + c[j + 3] * b3

    # Horner in b4 over degree-3 chunks covers degrees 0..16.
    result = c[16] * eye
    for j in (12, 8, 4, 0):
        result = result @ b4 + chunk(j)

    for _ in range(squarings):
        result = result @ result
    return result


def partial_trace(rho: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep``.

    ``dims`` lists the subsystem dimensions in tensor order; ``keep`` holds
    the indices of the subsystems to retain (order in the result follows
    ascending original position).
    """
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(f"state shape {rho.shape} does not match dims {dims}")
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} subsystems")

    reshaped = rho.reshape(dims + dims)
    remaining = list(range(len(dims)))
    for sub in sorted(set(range(len(dims))) - set(keep), reverse=True):
        pos = remaining.index(sub)
        reshaped = np.trace(reshaped, axis1=pos, axis2=pos + len(remaining))
        remaining.remove(sub)
    kept_dim = int(np.prod([dims[k] for k in keep]))
    return reshaped.reshape(kept_dim, kept_dim)


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(rho, dtype=complex).flatten(order="F")


def devectorize(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize`; fails if the length is not a square."""
    v = np.asarray(v, dtype=complex)
    dim = math.isqrt(v.size)
    if dim * dim != v.size:
        raise ValueError(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape((dim, dim), order="F")


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator matrix of rho -> a @ rho @ b under column stacking."""
    return np.kron(np.asarray(b).T, np.asarray(a))


def hermitize(rho: np.ndarray) -> np.ndarray:
    """Average a matrix with its conjugate transpose."""
    return 0.5 * (rho + rho.conj().T)


def check_density_matrix(
    rho: np.ndarray,
    herm_tol: float = 1e-10,
    trace_tol: float = 1e-10,
    psd_tol: float = 1e-8,
) -> np.ndarray:
    """Validate hermiticity, unit trace and numerical positivity of a state.

    Returns the input unchanged; raises :class:`StateInvariantError` with the
    offending quantity otherwise.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise StateInvariantError(f"state must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise StateInvariantError("state contains non-finite entries")
    herm_dev = np.max(np.abs(rho - rho.conj().T))
    if herm_dev > herm_tol:
        raise StateInvariantError(f"hermiticity deviation {herm_dev:.3e} > {herm_tol:.1e}")
    trace_dev = abs(np.trace(rho) - 1.0)
    if trace_dev > trace_tol:
        raise StateInvariantError(f"trace deviation {trace_dev:.3e} > {trace_tol:.1e}")
    min_eig = float(np.linalg.eigvalsh(hermitize(rho)).min())
    if min_eig < -psd_tol:
        raise StateInvariantError(f"minimum eigenvalue {min_eig:.3e} < -{psd_tol:.1e}")
    return rho


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random state: normalized G @ G^dagger with G complex Gaussian."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_state_pair(dim: int, rng: np.random.Generator):
    """Two orthogonal Haar-random pure states, returned as density matrices."""
    v1 = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v1 /= np.linalg.norm(v1)
    v2 = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v2 -= (v1.conj() @ v2) * v1
    v2 /= np.linalg.norm(v2)
    return np.outer(v1, v1.conj()), np.outer(v2, v2.conj())
