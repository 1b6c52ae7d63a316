import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrcsim import dynamics as dyn
from qrcsim import linalg as la
from qrcsim import reservoirs as res
from qrcsim.experiments import ModelConfig, _blp_model_pair
from qrcsim.nonmarkov import blp_measure, trace_distance


class TestTraceDistance:
    def test_identical_states(self):
        rho = la.random_density_matrix(4, np.random.default_rng(0))
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        rho1 = np.diag([1.0, 0.0]).astype(complex)
        rho2 = np.diag([0.0, 1.0]).astype(complex)
        assert trace_distance(rho1, rho2) == pytest.approx(1.0)

    def test_z_versus_x_eigenstate(self):
        # Difference matrix has eigenvalues +-1/sqrt(2), checked by a direct
        # 2x2 eigensolve: D = 1/sqrt(2).
        zero = np.diag([1.0, 0.0]).astype(complex)
        plus = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)
        delta = zero - plus
        disc = np.sqrt(delta[0, 0] ** 2 + abs(delta[0, 1]) ** 2).real
        assert disc == pytest.approx(1 / np.sqrt(2))
        assert trace_distance(zero, plus) == pytest.approx(1 / np.sqrt(2), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            trace_distance(np.eye(2) / 2, np.eye(4) / 4)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_metric_properties(self, seed):
        rng = np.random.default_rng(seed)
        a = la.random_density_matrix(4, rng)
        b = la.random_density_matrix(4, rng)
        c = la.random_density_matrix(4, rng)
        assert trace_distance(a, b) == trace_distance(b, a)
        assert trace_distance(a, b) <= trace_distance(a, c) + trace_distance(c, b) + 1e-12
        assert 0.0 <= trace_distance(a, b) <= 1.0 + 1e-12


def constant_channel_pair(seed):
    """Two trajectories of a fixed memoryless model, differing in start."""
    cfg = ModelConfig(kind="markov", n_qubits=2, dt=10.0, gamma=0.1)
    model_a, model_b, rng = _blp_model_pair(cfg, seed)
    return model_a, model_b, rng.uniform(size=300)


class TestBlpMeasure:
    def test_memoryless_model_gives_zero(self):
        result = blp_measure(lambda i: constant_channel_pair(100 + i), n_pairs=3, n_steps=300)
        assert result.measure <= 1e-10
        assert result.per_pair_sums.shape == (3,)

    def test_unitary_step_preserves_distance(self):
        # A synthetic model whose step conjugates by a fixed unitary leaves
        # the trace distance exactly invariant: no positive increments.
        class UnitaryModel:
            def __init__(self, state, u):
                self.state = state
                self.u = u

            def step(self, s):
                self.state = self.u @ self.state @ self.u.conj().T

            def observed_state(self):
                return self.state

        rng = np.random.default_rng(7)
        h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        u = la.matrix_exp(-1j * la.hermitize(h))

        def factory(i):
            pair_rng = np.random.default_rng(200 + i)
            rho1, rho2 = la.random_pure_state_pair(4, pair_rng)
            return UnitaryModel(rho1, u), UnitaryModel(rho2, u), pair_rng.uniform(size=50)

        result = blp_measure(factory, n_pairs=2, n_steps=50)
        assert result.measure <= 1e-10

    def test_embedded_memoryless_limit_is_zero(self):
        cfg = ModelConfig(kind="embedded", n_qubits=2, dt=0.5, omega=1.0)

        def factory(i):
            a, b, rng = _blp_model_pair(cfg, 300 + i)
            return a, b, rng.uniform(size=200)

        result = blp_measure(factory, n_pairs=2, n_steps=200)
        assert result.measure <= 1e-10

    def test_embedded_book_keeping_detects_backflow(self):
        cfg = ModelConfig(kind="embedded", n_qubits=2, dt=0.5, omega=0.0)

        def factory(i):
            a, b, rng = _blp_model_pair(cfg, 400 + i)
            return a, b, rng.uniform(size=200)

        result = blp_measure(factory, n_pairs=2, n_steps=200)
        assert result.measure > 0.01

    def test_markov_contractivity_audit(self):
        cfg = ModelConfig(kind="markov", n_qubits=2, dt=10.0, gamma=0.1)
        model_a, model_b, rng = _blp_model_pair(cfg, 17)
        previous = trace_distance(model_a.observed_state(), model_b.observed_state())
        for s in rng.uniform(size=200):
            model_a.step(s)
            model_b.step(s)
            current = trace_distance(model_a.observed_state(), model_b.observed_state())
            assert current <= previous + 1e-10
            previous = current

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            blp_measure(lambda i: constant_channel_pair(i), n_pairs=0, n_steps=10)
        with pytest.raises(ValueError):
            blp_measure(lambda i: constant_channel_pair(i), n_pairs=1, n_steps=0)

    def test_measure_is_max_of_sums(self):
        result = blp_measure(lambda i: constant_channel_pair(500 + i), n_pairs=4, n_steps=100)
        assert result.measure == result.per_pair_sums.max()
        assert result.measure >= 0.0
