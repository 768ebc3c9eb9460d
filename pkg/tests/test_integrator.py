import numpy as np
import pytest

import phasesync as ps


class TestStepRK4:
    def test_free_flow_exact(self):
        # RK4 is exact when the derivative is constant (K = 0)
        ens = ps.OscillatorEnsemble([0.1, -0.7, 2.0], [1.0, -0.5, 0.25], coupling=0.0)
        out = ps.step_rk4(ens, 0.3)
        assert np.allclose(out.phases, ens.phases + 0.3 * ens.freqs, atol=1e-15)

    def test_stationary_input_unchanged(self):
        ens = ps.OscillatorEnsemble([0.0, np.pi], [0.0, 0.0], 1.0)
        out = ps.step_rk4(ens, 0.05)
        assert np.allclose(out.phases, ens.phases, atol=1e-15)

    def test_freqs_and_coupling_preserved(self):
        ens = ps.seeded_ensemble(5, coupling=1.3, seed=2, freq_halfwidth=0.2)
        out = ps.step_rk4(ens, 0.01)
        assert np.array_equal(out.freqs, ens.freqs)
        assert out.coupling == ens.coupling

    def test_one_step_order(self):
        # halving dt cuts the one-step error ~16x (5th-order local error)
        ens = ps.seeded_ensemble(6, seed=3)
        ref = ens
        for _ in range(20):
            ref = ps.step_rk4(ref, 0.2 / 20)  # dt/10 reference, x2 margin
        err = []
        for dt in (0.2, 0.1):
            cur = ens
            for _ in range(int(round(0.2 / dt))):
                cur = ps.step_rk4(cur, dt)
            err.append(np.max(np.abs(cur.phases - ref.phases)))
        ratio = err[0] / err[1]
        assert 8.0 < ratio < 40.0

    def test_global_convergence_order(self):
        # measured on the 3-oscillator reduced problem against dt=1e-5
        def integrate(delta0, dt, t_end):
            d = delta0
            for _ in range(int(round(t_end / dt))):
                k1 = ps.three_oscillator_rate(d)
                k2 = ps.three_oscillator_rate(d + 0.5 * dt * k1)
                k3 = ps.three_oscillator_rate(d + 0.5 * dt * k2)
                k4 = ps.three_oscillator_rate(d + dt * k3)
                d += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
            return d

        ref = integrate(1.5, 1e-5, 1.0)
        e1 = abs(integrate(1.5, 0.04, 1.0) - ref)
        e2 = abs(integrate(1.5, 0.02, 1.0) - ref)
        order = np.log2(e1 / e2)
        assert order >= 3.9


class TestSimulate:
    def test_r_series_monotone_identical(self):
        ens = ps.seeded_ensemble(12, seed=21)
        traj = ps.simulate(ens, ps.SimConfig(dt=0.01, t_max=30, record_every=5))
        assert np.all(np.diff(traj.r_series) >= -1e-7)

    def test_u_series_monotone_identical(self):
        ens = ps.seeded_ensemble(12, seed=22)
        traj = ps.simulate(ens, ps.SimConfig(dt=0.01, t_max=30, record_every=5))
        assert np.all(np.diff(traj.u_series) >= -1e-7)

    def test_mean_phase_drift_zero_mean(self):
        ens = ps.seeded_ensemble(8, seed=23, freq_halfwidth=0.3, zero_mean=True)
        traj = ps.simulate(ens, ps.SimConfig(dt=0.01, t_max=100, record_every=50))
        assert np.max(np.abs(traj.mean_phase_series - traj.mean_phase_series[0])) < 1e-6

    def test_free_flow_exact_horizon(self):
        ens = ps.seeded_ensemble(6, coupling=0.0, seed=24, freq_halfwidth=1.0)
        traj = ps.simulate(ens, ps.SimConfig(dt=0.01, t_max=10, record_every=100))
        expect = ens.phases + 10.0 * ens.freqs
        assert np.max(np.abs(traj.final.phases - expect)) < 1e-12

    def test_phase_sum_grows_linearly(self):
        ens = ps.seeded_ensemble(7, seed=25, freq_halfwidth=0.5)
        traj = ps.simulate(ens, ps.SimConfig(dt=0.01, t_max=100, record_every=100))
        mean_omega = np.mean(ens.freqs)
        expect = traj.mean_phase_series[0] + mean_omega * traj.times
        assert np.max(np.abs(traj.mean_phase_series - expect)) < 1e-6

    def test_deterministic_bitwise(self):
        cfg = ps.SimConfig(dt=0.01, t_max=5, record_every=10)
        a = ps.simulate(ps.seeded_ensemble(9, seed=26), cfg)
        b = ps.simulate(ps.seeded_ensemble(9, seed=26), cfg)
        assert np.array_equal(a.final.phases, b.final.phases)
        assert np.array_equal(a.r_series, b.r_series)

    def test_stops_on_stationarity(self):
        ens = ps.seeded_ensemble(5, seed=27)
        traj = ps.simulate(ens, ps.SimConfig(dt=0.01, t_max=500, record_every=10))
        assert traj.stopped_on == "stationary"
        assert traj.times[-1] < 500.0

    def test_records_aligned_and_increasing(self):
        traj = ps.simulate(ps.seeded_ensemble(5, seed=28), ps.SimConfig(dt=0.01, t_max=3, record_every=7))
        n = len(traj.times)
        assert len(traj.states) == n == len(traj.r_series) == len(traj.phi_series)
        assert len(traj.u_series) == n == len(traj.mean_phase_series)
        assert np.all(np.diff(traj.times) > 0)
        assert np.all((traj.r_series >= 0) & (traj.r_series <= 1 + 1e-12))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ps.SimConfig(dt=0.0)
        with pytest.raises(ValueError):
            ps.SimConfig(dt=2.0, t_max=1.0)
        with pytest.raises(ValueError):
            ps.SimConfig(record_every=0)


class TestDetectStationarity:
    def test_antipodal_true(self):
        assert ps.detect_stationarity(ps.OscillatorEnsemble([0.0, np.pi], [0, 0]), 1e-9)

    def test_synchronized_true(self):
        assert ps.detect_stationarity(ps.OscillatorEnsemble([1.1, 1.1, 1.1], np.zeros(3)), 1e-9)

    def test_off_equilibrium_false(self):
        # |theta_dot_1| = sin(0.1)/2 well above tol
        ens = ps.OscillatorEnsemble([0.1, 0.0], [0.0, 0.0], 1.0)
        assert not ps.detect_stationarity(ens, 1e-9)
        assert np.abs(ps.finite_n_rhs(ens)[0]) == pytest.approx(np.sin(0.1) / 2, abs=1e-14)


class TestSeededEnsemble:
    def test_reproducible(self):
        a = ps.seeded_ensemble(10, seed=1, freq_halfwidth=0.5)
        b = ps.seeded_ensemble(10, seed=1, freq_halfwidth=0.5)
        assert np.array_equal(a.phases, b.phases)
        assert np.array_equal(a.freqs, b.freqs)

    def test_distinct_seeds_differ(self):
        a = ps.seeded_ensemble(10, seed=1)
        b = ps.seeded_ensemble(10, seed=2)
        assert not np.array_equal(a.phases, b.phases)

    def test_phases_in_range(self):
        a = ps.seeded_ensemble(1000, seed=3)
        assert np.all((a.phases >= -np.pi) & (a.phases < np.pi))
