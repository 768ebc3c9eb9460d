import numpy as np
import pytest
from scipy.integrate import quad

import phasesync as ps
from phasesync.stationary import ROOT_TOL


def uniform_integral_closed_form(gamma, a):
    """int sqrt(a^2 - w^2) on [-gamma, gamma] against the uniform pdf,
    from the antiderivative (w sqrt(a^2-w^2) + a^2 arcsin(w/a))/2."""
    return (gamma * np.sqrt(a * a - gamma * gamma) + a * a * np.arcsin(gamma / a)) / (2 * gamma)


def two_atom_roots(k, omega0):
    """Analytic roots of K R^2 = sqrt((KR)^2 - omega0^2): quadratic in R^2."""
    disc = 1 - 4 * omega0**2 / k**2
    if disc < 0:
        return []
    return sorted(np.sqrt((1 + s * np.sqrt(disc)) / 2) for s in (-1, 1))


class TestFrequencyDistributions:
    def test_uniform_mass_and_pdf(self):
        g = ps.Uniform(0.0, 0.5)
        assert g.expect(lambda w: np.ones_like(w)) == pytest.approx(1.0, abs=1e-12)
        assert g.pdf(0.0) == pytest.approx(1.0)
        assert g.pdf(0.6) == 0.0
        assert g.support() == (-0.5, 0.5)

    def test_truncated_gaussian_mass(self):
        g = ps.TruncatedGaussian(0.0, 0.3, 0.8)
        assert g.expect(lambda w: np.ones_like(w)) == pytest.approx(1.0, abs=1e-10)
        nodes, weights = g.quadrature(200)
        assert weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(np.abs(nodes) <= 0.8)

    def test_discrete_expect(self):
        g = ps.Discrete((-0.3, 0.3), (0.5, 0.5))
        assert g.expect(lambda w: w * w) == pytest.approx(0.09, abs=1e-15)
        assert g.max_abs_omega == 0.3

    def test_discrete_validation(self):
        with pytest.raises(ValueError):
            ps.Discrete((0.0, 1.0), (0.6, 0.6))

    def test_dirac(self):
        g = ps.Dirac(0.2)
        assert g.expect(lambda w: w) == pytest.approx(0.2)
        assert g.max_abs_omega == 0.2


class TestSelfConsistencyRoots:
    def test_dirac_root_is_one(self):
        for k in (0.5, 1.0, 3.0):
            res = ps.self_consistency_roots(ps.Dirac(0.0), k)
            assert res.roots == [pytest.approx(1.0, abs=1e-12)]
            assert res.largest == pytest.approx(1.0, abs=1e-12)
            assert res.k_supercritical

    def test_uniform_closed_form_residual(self):
        gamma, k = 0.5, 1.2
        res = ps.self_consistency_roots(ps.Uniform(0, gamma), k)
        assert res.k_supercritical
        for r in res.roots:
            a = k * r
            # closed-form antiderivative vs adaptive quadrature
            closed = uniform_integral_closed_form(gamma, a)
            numeric, _ = quad(lambda w: np.sqrt(a * a - w * w) / (2 * gamma), -gamma, gamma,
                              epsabs=1e-13, epsrel=1e-13)
            assert closed == pytest.approx(numeric, abs=1e-10)
            assert closed - k * r * r == pytest.approx(0.0, abs=1e-8)

    def test_two_atom_analytic(self):
        k, omega0 = 1.0, 0.3
        res = ps.self_consistency_roots(ps.Discrete((-omega0, omega0), (0.5, 0.5)), k)
        expect = two_atom_roots(k, omega0)
        assert len(res.roots) == 2
        for got, want in zip(res.roots, expect):
            assert got == pytest.approx(want, abs=1e-10)
        assert res.largest == pytest.approx(max(expect), abs=1e-10)

    def test_subcritical_empty_is_normal(self):
        # admissible domain non-empty (max|omega|/K < 1) but below K_c
        res = ps.self_consistency_roots(ps.Uniform(0, 0.5), 0.55)
        assert res.roots == []
        assert res.largest is None
        assert not res.k_supercritical

    def test_support_too_wide_rejected(self):
        with pytest.raises(ValueError):
            ps.self_consistency_roots(ps.Uniform(0, 2.0), 1.0)

    def test_residual_bound_invariant(self):
        for g, k in [
            (ps.Uniform(0, 0.4), 1.0),
            (ps.TruncatedGaussian(0, 0.2, 0.5), 1.0),
            (ps.Discrete((-0.2, 0.1, 0.3), (0.3, 0.3, 0.4)), 1.5),
        ]:
            res = ps.self_consistency_roots(g, k)
            for r in res.roots:
                assert abs(ps.self_consistency_residual(g, k, r)) < ROOT_TOL
                # support condition K R >= max|omega|
                assert k * r >= g.max_abs_omega - 1e-12

    def test_generalized_residual_specializes(self):
        g = ps.Uniform(0, 0.4)
        for r in (0.5, 0.8, 1.0):
            assert ps.generalized_residual(g, 1.0, r) == ps.self_consistency_residual(g, 1.0, r)

    def test_generalized_residual_with_minus_branch(self):
        g = ps.Uniform(0, 0.4)
        full = ps.generalized_residual(g, 1.0, 0.9)
        mixed = ps.generalized_residual(g, 1.0, 0.9, g_minus=g, minus_mass=0.2)
        # g+ mass 0.8 minus g- mass 0.2 scales the integral by 0.6
        integral = full + 1.0 * 0.81
        assert mixed == pytest.approx(0.6 * integral - 0.81, abs=1e-12)


class TestCriticalCoupling:
    def test_dirac_zero(self):
        assert ps.critical_coupling(ps.Dirac(0.0)) == 0.0

    def test_uniform_matches_scan_oracle(self):
        gamma = 0.5
        kc = ps.critical_coupling(ps.Uniform(0, gamma))
        # brute-force 2000x2000 sign scan of the closed-form residual
        ks = np.linspace(0.60, 0.68, 2000)
        rs = np.linspace(1e-6, 1.0, 2000)
        kc_scan = None
        for k in ks:
            a = k * rs
            ok = a >= gamma
            if not np.any(ok):
                continue
            f = uniform_integral_closed_form(gamma, a[ok]) - k * rs[ok] ** 2
            if np.any(f >= 0):
                kc_scan = k
                break
        assert kc_scan is not None
        assert kc == pytest.approx(kc_scan, abs=1e-4)

    def test_uniform_kc_monotone_in_width(self):
        kcs = [ps.critical_coupling(ps.Uniform(0, g)) for g in (0.1, 0.2, 0.4, 0.8)]
        assert all(b > a for a, b in zip(kcs, kcs[1:]))

    def test_bracket_cap(self):
        with pytest.raises(ps.BracketNotFoundError):
            ps.critical_coupling(ps.Uniform(0, 0.5), k_max=0.5)


class TestStationaryDensity:
    def test_domain_error(self):
        with pytest.raises(ValueError):
            ps.stationary_density(ps.Uniform(0, 0.5), 1.0, 0.3)

    def test_dirac_atomic(self):
        sd = ps.stationary_density(ps.Dirac(0.0), 1.0, 1.0, phi_star=0.4)
        assert sd.is_atomic
        assert sd.theta_plus(0.0) == pytest.approx(0.4)

    def test_marginal_integrates_to_one(self):
        g = ps.Uniform(0, 0.3)
        k = 1.0
        r = ps.self_consistency_roots(g, k).largest
        sd = ps.stationary_density(g, k, r)
        edge = np.arcsin(0.3 / (k * r))
        val, _ = quad(sd.marginal, -np.pi, np.pi, points=[-edge, edge], limit=200,
                      epsabs=1e-12, epsrel=1e-12)
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_sampled_order_parameter_closes(self):
        g = ps.Uniform(0, 0.3)
        k = 1.0
        r = ps.self_consistency_roots(g, k).largest
        sd = ps.stationary_density(g, k, r)
        meas = ps.discretize(sd.sample_spec(512), coupling=k)
        got = ps.weighted_order_parameter(meas.weights, meas.thetas).r
        assert got == pytest.approx(r, abs=1e-6)

    def test_round_trip_stationary_under_flow(self):
        g = ps.Uniform(0, 0.3)
        k = 1.0
        r = ps.self_consistency_roots(g, k).largest
        meas = ps.discretize(ps.stationary_density(g, k, r).sample_spec(512), coupling=k)
        traj = ps.kinetic_simulate(meas, ps.SimConfig(dt=0.01, t_max=10, record_every=50))
        assert np.max(np.abs(traj.r_series - r)) < 1e-3

    def test_critical_support_flag(self):
        g = ps.Uniform(0, 0.3)
        sd = ps.stationary_density(g, 1.0, 0.3)
        assert sd.critical_support
        sd2 = ps.stationary_density(g, 1.0, 0.9)
        assert not sd2.critical_support
