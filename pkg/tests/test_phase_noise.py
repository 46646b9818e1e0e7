import numpy as np
import pytest

from pnmimo.phase_noise import (OscillatorTopology, PhaseNoiseParams, PhaseTrace,
                                deg_to_var, delta_phi, delta_phi_vector,
                                simulate_wiener, t_pn, t_pn_second_moment,
                                theta_matrix, theta_vector)

SIGMA2_6DEG = deg_to_var(6.0)


def mc_t_pn(n_draws, M_osc, tau, sigma2, rng):
    """Vectorized draws of the normalized phase-drift trace."""
    inc = rng.normal(0.0, np.sqrt(tau * sigma2), size=(n_draws, M_osc))
    return np.exp(1j * inc).mean(axis=1)


class TestTopology:
    def test_block_structure(self):
        topo = OscillatorTopology(12, 3)
        assert topo.block == 4
        assert np.array_equal(topo.expand(np.array([1, 2, 3])),
                              [1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3])

    def test_common_and_distributed_flags(self):
        assert OscillatorTopology(8, 1).is_common
        assert OscillatorTopology(8, 8).is_distributed

    def test_rejects_nondivisor(self):
        with pytest.raises(ValueError):
            OscillatorTopology(10, 3)


class TestSimulateWiener:
    def test_zero_variance_freezes_phase(self):
        topo = OscillatorTopology(8, 4)
        params = PhaseNoiseParams(0.0, 0.0, tau=10)
        trace = simulate_wiener(topo, 3, params, np.random.default_rng(0))
        assert np.array_equal(trace.bs_phases[0], trace.bs_phases[1])
        assert np.array_equal(trace.ue_phases[0], trace.ue_phases[1])

    def test_increment_variance(self):
        n = 1_000_000
        topo = OscillatorTopology(n, n)
        params = PhaseNoiseParams(SIGMA2_6DEG, 0.0, tau=10)
        trace = simulate_wiener(topo, 1, params, np.random.default_rng(1))
        inc = trace.bs_phases[1] - trace.bs_phases[0]
        assert inc.var() == pytest.approx(10 * SIGMA2_6DEG, rel=0.01)
        assert 10 * SIGMA2_6DEG == pytest.approx(0.10966, rel=1e-3)

    def test_oscillators_independent(self):
        topo = OscillatorTopology(2, 2)
        params = PhaseNoiseParams(SIGMA2_6DEG, 0.0, tau=5)
        rng = np.random.default_rng(2)
        incs = np.array([simulate_wiener(topo, 1, params, rng).bs_phases[1]
                         - simulate_wiener(topo, 1, params, rng).bs_phases[0]
                         for _ in range(100_000)])
        corr = np.corrcoef(incs[:, 0], incs[:, 1])[0, 1]
        assert abs(corr) <= 0.01

    def test_step_mode_matches_endpoints(self):
        topo = OscillatorTopology(4, 2)
        params = PhaseNoiseParams(0.01, 0.02, tau=7)
        trace = simulate_wiener(topo, 2, params, np.random.default_rng(3),
                                keep_steps=True)
        assert trace.bs_steps.shape == (8, 2)
        assert np.allclose(trace.bs_phases[1], trace.bs_steps[-1])


class TestThetaAndDrift:
    def _trace(self, bs0, bstau, ue0, uetau):
        return PhaseTrace(bs_phases=np.array([bs0, bstau], dtype=float),
                          ue_phases=np.array([ue0, uetau], dtype=float))

    def test_common_oscillator_entries_identical(self):
        topo = OscillatorTopology(6, 1)
        trace = self._trace([0.7], [0.9], [0.1, 0.2], [0.3, 0.4])
        v = theta_vector(trace, 1, 0, 10, topo)
        assert np.allclose(v, v[0])

    def test_zero_phases_identity(self):
        topo = OscillatorTopology(4, 2)
        trace = self._trace([0, 0], [0, 0], [0], [0])
        assert np.allclose(theta_matrix(trace, 0, 0, 5, topo), np.eye(4))

    def test_unit_modulus(self):
        topo = OscillatorTopology(8, 4)
        rng = np.random.default_rng(4)
        trace = simulate_wiener(topo, 2, PhaseNoiseParams(0.1, 0.1, 3), rng)
        for sym in (0, 3):
            assert np.allclose(np.abs(theta_vector(trace, 0, sym, 3, topo)), 1.0,
                               atol=1e-14)

    def test_drift_common_oscillator_scalar(self):
        topo = OscillatorTopology(5, 1)
        trace = self._trace([0.2], [1.4], [0.0], [0.0])
        d = delta_phi(trace, topo)
        assert np.allclose(d, np.exp(1.2j) * np.eye(5))

    def test_drift_zero_variance_identity(self):
        topo = OscillatorTopology(6, 3)
        trace = self._trace([1, 2, 3], [1, 2, 3], [0.0], [0.0])
        assert np.allclose(delta_phi(trace, topo), np.eye(6))

    def test_drift_unit_modulus(self):
        topo = OscillatorTopology(8, 2)
        trace = self._trace([0.3, 2.5], [1.1, -0.4], [0.0], [0.0])
        assert np.allclose(np.abs(delta_phi_vector(trace, topo)), 1.0, atol=1e-14)

    def test_only_endpoints_materialized(self):
        topo = OscillatorTopology(4, 1)
        trace = self._trace([0.0], [0.1], [0.0], [0.1])
        with pytest.raises(IndexError):
            theta_vector(trace, 0, 3, 10, topo)


class TestTPn:
    def test_common_oscillator_unit_magnitude(self):
        topo = OscillatorTopology(8, 1)
        rng = np.random.default_rng(5)
        for _ in range(20):
            trace = simulate_wiener(topo, 1, PhaseNoiseParams(0.5, 0.0, 10), rng)
            assert abs(t_pn(delta_phi_vector(trace, topo))) == pytest.approx(1.0, abs=1e-12)

    def test_zero_variance_exactly_one(self):
        topo = OscillatorTopology(8, 4)
        trace = simulate_wiener(topo, 1, PhaseNoiseParams(0.0, 0.0, 10),
                                np.random.default_rng(6))
        assert t_pn(delta_phi_vector(trace, topo)) == pytest.approx(1.0, abs=1e-14)

    def test_distributed_limit_hardens(self):
        tau, s2 = 10, SIGMA2_6DEG
        vals = mc_t_pn(10_000, 4096, tau, s2, np.random.default_rng(7))
        assert vals.mean() == pytest.approx(np.exp(-tau * s2 / 2), rel=0.01)

    def test_accepts_full_matrix(self):
        topo = OscillatorTopology(4, 2)
        trace = simulate_wiener(topo, 1, PhaseNoiseParams(0.2, 0.0, 5),
                                np.random.default_rng(8))
        assert t_pn(delta_phi(trace, topo)) == pytest.approx(
            t_pn(delta_phi_vector(trace, topo)))


class TestSecondMoment:
    def test_common_oscillator_is_one(self):
        assert t_pn_second_moment(1, 10, SIGMA2_6DEG) == 1.0

    def test_two_oscillators_value(self):
        val = t_pn_second_moment(2, 10, SIGMA2_6DEG)
        assert val == pytest.approx((1 - 0.89614) / 2 + 0.89614, abs=1e-5)
        mc = np.abs(mc_t_pn(1_000_000, 2, 10, SIGMA2_6DEG,
                            np.random.default_rng(9))) ** 2
        assert mc.mean() == pytest.approx(val, rel=0.002)

    def test_distributed_limit(self):
        assert t_pn_second_moment(10 ** 9, 10, SIGMA2_6DEG) == pytest.approx(
            np.exp(-10 * SIGMA2_6DEG), rel=1e-6)
        assert np.exp(-10 * SIGMA2_6DEG) == pytest.approx(0.89614, abs=1e-5)

    def test_strictly_decreasing_in_oscillator_count(self):
        vals = [t_pn_second_moment(m, 10, SIGMA2_6DEG) for m in (1, 2, 5, 10, 25, 50)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_mean_is_real_exponential(self):
        tau, s2 = 10, SIGMA2_6DEG
        for m_osc in (1, 5, 25):
            vals = mc_t_pn(1_000_000, m_osc, tau, s2, np.random.default_rng(10 + m_osc))
            assert vals.mean().real == pytest.approx(np.exp(-tau * s2 / 2), rel=0.005)
            assert abs(vals.mean().imag) < 0.005

    def test_angle_variance_decreases_with_oscillator_count(self):
        tau, s2 = 10, SIGMA2_6DEG
        rng = np.random.default_rng(11)
        variances = [np.var(np.angle(mc_t_pn(100_000, m, tau, s2, rng)))
                     for m in (1, 2, 5, 10, 25, 50)]
        assert all(a >= b for a, b in zip(variances, variances[1:]))
