import numpy as np
import pytest

from qrcsim import dynamics as dyn
from qrcsim import linalg as la
from qrcsim import reservoirs as res
from qrcsim.nonmarkov import trace_distance
from qrcsim.readout import ObservableSet


def make_spec(n=2, seed=0, gamma=0.1):
    return dyn.LindbladSpec(params=dyn.IsingParams.random(n, 1.0, seed=seed), gamma=gamma)


def make_markov(n=2, seed=0, state_seed=1, dt=10.0, gamma=0.1):
    rng = np.random.default_rng(state_seed)
    return res.MarkovReservoir(make_spec(n, seed, gamma), dt, la.random_density_matrix(2**n, rng))


class TestMarkovStep:
    def test_echo_state_property(self):
        spec = make_spec(2, seed=2)
        rng = np.random.default_rng(3)
        r1 = res.MarkovReservoir(spec, 10.0, la.random_density_matrix(4, rng))
        r2 = res.MarkovReservoir(spec, 10.0, la.random_density_matrix(4, rng))
        inputs = np.random.default_rng(4).uniform(size=1000)
        for s in inputs:
            r1.step(s)
            r2.step(s)
        assert trace_distance(r1.state, r2.state) <= 1e-6

    def test_tiny_dt_is_identity(self):
        spec = make_spec(2, seed=5)
        rng = np.random.default_rng(6)
        state = la.random_density_matrix(4, rng)
        r = res.MarkovReservoir(spec, 1e-12, state)
        r.step(0.5)
        assert np.max(np.abs(r.state - state)) <= 1e-9

    def test_constant_input_converges_to_steady_state(self):
        spec = make_spec(2, seed=7)
        rng = np.random.default_rng(8)
        r = res.MarkovReservoir(spec, 10.0, la.random_density_matrix(4, rng))
        for _ in range(2000):
            r.step(0.3)
        target = dyn.steady_state(dyn.build_liouvillian(spec, 0.3))
        assert trace_distance(r.state, target) <= 1e-6

    def test_input_out_of_range(self):
        r = make_markov()
        with pytest.raises(ValueError):
            r.step(1.2)

    def test_states_stay_physical(self):
        r = make_markov(2, seed=9, state_seed=10)
        inputs = np.random.default_rng(11).uniform(size=100)
        for s in inputs:
            r.step(s)
            la.check_density_matrix(r.state, herm_tol=1e-9, trace_tol=1e-9, psd_tol=1e-7)


class TestResidualStep:
    def test_weight_one_equals_markov(self):
        spec = make_spec(2, seed=12)
        rng = np.random.default_rng(13)
        state = la.random_density_matrix(4, rng)
        markov = res.MarkovReservoir(spec, 10.0, state)
        residual = res.ResidualReservoir(spec, 10.0, state, mix_weight=1.0, tau_e=10)
        inputs = np.random.default_rng(14).uniform(size=100)
        for s in inputs:
            markov.step(s)
            residual.step(s)
            assert np.max(np.abs(markov.state - residual.state)) <= 1e-12

    def test_weight_zero_uses_only_delayed_state(self):
        # With zero mix weight the produced state depends on the buffered
        # state tau_e steps back and the current input, not on the current
        # state: perturbing the current state must not change the output.
        spec = make_spec(2, seed=15)
        rng = np.random.default_rng(16)
        state = la.random_density_matrix(4, rng)
        r1 = res.ResidualReservoir(spec, 10.0, state, mix_weight=0.0, tau_e=3)
        r2 = res.ResidualReservoir(spec, 10.0, state, mix_weight=0.0, tau_e=3)
        warm = np.random.default_rng(17).uniform(size=8)
        for s in warm:
            r1.step(s)
            r2.step(s)
        r2.state = la.random_density_matrix(4, rng)  # differs only in current state
        r1.step(0.5)
        r2.step(0.5)
        assert np.max(np.abs(r1.state - r2.state)) <= 1e-12

    def test_mix_preserves_state_invariants(self):
        rng = np.random.default_rng(18)
        for _ in range(20):
            lam = rng.uniform()
            rho_a = la.random_density_matrix(4, rng)
            rho_b = la.random_density_matrix(4, rng)
            mixed = lam * rho_a + (1 - lam) * rho_b
            la.check_density_matrix(mixed)

    def test_buffer_length_constant(self):
        spec = make_spec(2, seed=19)
        rng = np.random.default_rng(20)
        r = res.ResidualReservoir(spec, 10.0, la.random_density_matrix(4, rng),
                                  mix_weight=0.5, tau_e=4)
        assert len(r.buffer) == 5
        for s in np.random.default_rng(21).uniform(size=12):
            r.step(s)
            assert len(r.buffer) == 5

    def test_rejects_bad_hyperparameters(self):
        spec = make_spec(2, seed=22)
        state = la.random_density_matrix(4, np.random.default_rng(23))
        with pytest.raises(ValueError):
            res.ResidualReservoir(spec, 10.0, state, mix_weight=1.5, tau_e=10)
        with pytest.raises(ValueError):
            res.ResidualReservoir(spec, 10.0, state, mix_weight=0.5, tau_e=0)


class TestPartialSwap:
    def test_eta_zero_is_identity(self):
        assert np.allclose(res.partial_swap_unitary(0.0, 0, 2), np.eye(16), atol=1e-15)

    def test_full_swap_up_to_phase(self):
        # At eta -> pi/2 the unitary is i * SWAP; conjugation kills the phase.
        eta = np.pi / 2 - 1e-12
        u = res.partial_swap_unitary(eta, 0, 1)
        rng = np.random.default_rng(24)
        rho_res = la.random_density_matrix(2, rng)
        rho_aux = la.random_density_matrix(2, rng)
        joint = np.kron(rho_res, rho_aux)
        swapped = u @ joint @ u.conj().T
        assert np.max(np.abs(swapped - np.kron(rho_aux, rho_res))) <= 1e-9

    @pytest.mark.parametrize("eta", [0.1, np.pi / 4, 1.5])
    def test_unitarity(self, eta):
        u = res.partial_swap_unitary(eta, 1, 2)
        assert np.max(np.abs(u @ u.conj().T - np.eye(16))) <= 1e-12

    def test_acts_only_on_named_pair(self):
        # Site 0 swap leaves a product state on the other pair untouched.
        u = res.partial_swap_unitary(0.7, 0, 2)
        rng = np.random.default_rng(25)
        rho = np.kron(
            np.kron(la.random_density_matrix(2, rng), la.random_density_matrix(2, rng)),
            np.kron(la.random_density_matrix(2, rng), la.random_density_matrix(2, rng)),
        )
        out = u @ rho @ u.conj().T
        # qubits 1 and 3 (reservoir 1, aux 1) keep their marginals
        marg_before = la.partial_trace(rho, [2, 2, 2, 2], keep=[1, 3])
        marg_after = la.partial_trace(out, [2, 2, 2, 2], keep=[1, 3])
        assert np.max(np.abs(marg_before - marg_after)) <= 1e-12

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            res.partial_swap_unitary(np.pi / 2, 0, 2)
        with pytest.raises(ValueError):
            res.partial_swap_unitary(0.3, 2, 2)


class TestDepolarize:
    def test_omega_zero_identity(self):
        rng = np.random.default_rng(26)
        rho = la.random_density_matrix(16, rng)
        assert np.max(np.abs(res.depolarize_aux(rho, 0.0) - rho)) <= 1e-12

    def test_omega_one_fully_mixes_auxiliaries(self):
        rng = np.random.default_rng(27)
        rho_res = la.random_density_matrix(4, rng)
        rho_aux = la.random_density_matrix(4, rng)
        out = res.depolarize_aux(np.kron(rho_res, rho_aux), 1.0)
        aux_marginal = la.partial_trace(out, [2, 2, 2, 2], keep=[2, 3])
        assert np.max(np.abs(aux_marginal - np.eye(4) / 4)) <= 1e-12
        res_marginal = la.partial_trace(out, [2, 2, 2, 2], keep=[0, 1])
        assert np.max(np.abs(res_marginal - rho_res)) <= 1e-12

    @pytest.mark.parametrize("omega", [0.0, 0.37, 1.0])
    def test_kraus_completeness(self, omega):
        ops = res.depolarizing_kraus(omega)
        total = sum(k.conj().T @ k for k in ops)
        assert np.max(np.abs(total - np.eye(2))) <= 1e-14

    @pytest.mark.parametrize("omega", [0.25, 0.8])
    def test_matches_explicit_kraus_conjugation(self, omega):
        # Oracle: apply the four Kraus operators site by site on the full
        # register and compare with the channel implementation.
        rng = np.random.default_rng(28)
        rho = la.random_density_matrix(16, rng)
        expected = rho.copy()
        for aux in (2, 3):
            ops = [
                la.kron_all(
                    [np.eye(2**aux, dtype=complex), k, np.eye(2 ** (3 - aux), dtype=complex)]
                )
                for k in res.depolarizing_kraus(omega)
            ]
            expected = sum(op @ expected @ op.conj().T for op in ops)
        assert np.max(np.abs(res.depolarize_aux(rho, omega) - expected)) <= 1e-13

    def test_rejects_bad_omega(self):
        with pytest.raises(ValueError):
            res.depolarize_aux(np.eye(16) / 16, 1.2)


class TestEmbeddedStep:
    def test_eta_zero_matches_markov_marginal(self):
        spec = make_spec(2, seed=29)
        rng = np.random.default_rng(30)
        state = la.random_density_matrix(4, rng)
        markov = res.MarkovReservoir(spec, 0.5, state)
        embedded = res.EmbeddedReservoir(spec, 0.5, eta=0.0, omega=0.5, reservoir_state=state)
        for s in np.random.default_rng(31).uniform(size=60):
            markov.step(s)
            embedded.step(s)
            assert np.max(np.abs(markov.state - embedded.reservoir_marginal())) <= 1e-10

    def test_omega_one_reduced_dynamics_is_memoryless(self):
        # Re-preparing the joint state as marginal x fully-mixed auxiliaries
        # must reproduce the same reservoir trajectory: with omega = 1 the
        # auxiliaries carry no memory between steps.
        spec = make_spec(2, seed=32)
        rng = np.random.default_rng(33)
        r1 = res.EmbeddedReservoir(
            spec, 0.5, eta=np.pi / 4, omega=1.0,
            reservoir_state=la.random_density_matrix(4, rng),
        )
        inputs = np.random.default_rng(34).uniform(size=40)
        for s in inputs[:20]:
            r1.step(s)
        r2 = res.EmbeddedReservoir(
            spec, 0.5, eta=np.pi / 4, omega=1.0, reservoir_state=r1.reservoir_marginal()
        )
        for s in inputs[20:]:
            r1.step(s)
            r2.step(s)
            diff = np.max(np.abs(r1.reservoir_marginal() - r2.reservoir_marginal()))
            assert diff <= 1e-9

    def test_joint_trace_preserved(self):
        spec = make_spec(2, seed=35)
        rng = np.random.default_rng(36)
        r = res.EmbeddedReservoir(
            spec, 0.5, eta=np.pi / 4, omega=0.3,
            reservoir_state=la.random_density_matrix(4, rng),
        )
        for s in np.random.default_rng(37).uniform(size=100):
            r.step(s)
        assert abs(np.trace(r.joint_state) - 1.0) <= 1e-9
        la.check_density_matrix(r.joint_state, herm_tol=1e-9, trace_tol=1e-9, psd_tol=1e-7)

    def test_rejects_bad_hyperparameters(self):
        spec = make_spec(2, seed=38)
        state = la.random_density_matrix(4, np.random.default_rng(39))
        with pytest.raises(ValueError):
            res.EmbeddedReservoir(spec, 0.5, eta=np.pi / 2, omega=0.5, reservoir_state=state)
        with pytest.raises(ValueError):
            res.EmbeddedReservoir(spec, 0.5, eta=0.5, omega=-0.1, reservoir_state=state)

    def test_marginal_measurement_equals_identity_extended_operators(self):
        # Measuring the reservoir marginal is the same as measuring the
        # joint state with observables extended by identity on the
        # auxiliaries.
        from qrcsim.readout import ObservableSet, measure

        spec = make_spec(2, seed=52)
        r = res.EmbeddedReservoir(
            spec, 0.5, eta=np.pi / 4, omega=0.3,
            reservoir_state=la.random_density_matrix(4, np.random.default_rng(53)),
        )
        for s in np.random.default_rng(54).uniform(size=10):
            r.step(s)
        obs = ObservableSet.singles_and_pairs(2)
        via_marginal = measure(r.reservoir_marginal(), obs)
        eye_aux = np.eye(4, dtype=complex)
        direct = np.array(
            [np.trace(np.kron(op, eye_aux) @ r.joint_state).real for op in obs.matrices]
        )
        assert np.max(np.abs(via_marginal - direct)) <= 1e-12


class TestRunSequence:
    def test_washout_boundary_keeps_one_record(self):
        r = make_markov(2, seed=40, state_seed=41)
        obs = ObservableSet.z_singles(2)
        records = res.run_sequence(r, np.full(10, 0.5), obs, washout=9)
        assert len(records) == 1
        assert records[0].time_index == 9

    def test_deterministic_records(self):
        obs = ObservableSet.z_singles(2)
        inputs = np.random.default_rng(42).uniform(size=30)
        rec1 = res.run_sequence(make_markov(2, 43, 44), inputs, obs, washout=5)
        rec2 = res.run_sequence(make_markov(2, 43, 44), inputs, obs, washout=5)
        for a, b in zip(rec1, rec2):
            assert a.time_index == b.time_index
            assert np.array_equal(a.features, b.features)

    def test_post_washout_initial_state_independence(self):
        spec = make_spec(2, seed=45)
        rng = np.random.default_rng(46)
        obs = ObservableSet.singles_and_pairs(2)
        inputs = np.random.default_rng(47).uniform(size=1100)
        rec1 = res.run_sequence(
            res.MarkovReservoir(spec, 10.0, la.random_density_matrix(4, rng)),
            inputs, obs, washout=1000,
        )
        rec2 = res.run_sequence(
            res.MarkovReservoir(spec, 10.0, la.random_density_matrix(4, rng)),
            inputs, obs, washout=1000,
        )
        worst = max(
            float(np.max(np.abs(a.features - b.features))) for a, b in zip(rec1, rec2)
        )
        assert worst <= 1e-6

    def test_empty_inputs_rejected(self):
        r = make_markov()
        with pytest.raises(ValueError):
            res.run_sequence(r, [], ObservableSet.z_singles(2), washout=0)

    def test_washout_must_leave_records(self):
        r = make_markov()
        with pytest.raises(ValueError):
            res.run_sequence(r, np.full(5, 0.5), ObservableSet.z_singles(2), washout=5)
