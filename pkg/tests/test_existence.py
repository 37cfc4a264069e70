import numpy as np
import pytest

from conftest import draw_satisfying, random_band_limited
from dnlswave import (LatticeConfig, Nonlinearity, Profile, WaveParameters,
                      apriori_bounds_check, band_range, hypothesis_check,
                      multiplier_nu, resonance_scan)


class TestHypothesisCheck:
    def test_worked_example(self, ring, cubic):
        # oracle: assemble the threshold from independently computed pieces
        R = band_range(ring).R
        p = 4.0                       # q_tilde(1/2) + 1/(1 - 1/2)
        growth = 2.0                  # a (1 + P^b) at a = b = P = 1
        threshold = R * (1.0 + p * growth / (R * 1.5 + 4.0 + growth))
        rep = hypothesis_check(WaveParameters(q=0.5, omega=3.0), ring, cubic, 1.0)
        assert rep.q_tilde == pytest.approx(2.0)
        assert rep.p == pytest.approx(4.0)
        assert rep.kappa_bar == pytest.approx(1.0)
        assert rep.threshold == pytest.approx(threshold, rel=1e-12)
        assert rep.threshold == pytest.approx(2.869, abs=2e-3)
        assert rep.satisfied and rep.margin == pytest.approx(0.131, abs=2e-3)

        rep2 = hypothesis_check(WaveParameters(q=0.5, omega=2.0), ring, cubic, 1.0)
        assert not rep2.satisfied
        assert rep2.margin == pytest.approx(-0.869, abs=2e-3)

    def test_zero_coupling(self, cubic):
        cfg = LatticeConfig(N=9, kappa=(0.0,))
        rep = hypothesis_check(WaveParameters(q=0.3, omega=0.01), cfg, cubic, 5.0)
        assert rep.R == 0.0 and rep.threshold == 0.0 and rep.satisfied

    def test_margin_consistency(self, cubic):
        rng = np.random.default_rng(43)
        for params, config, budget in draw_satisfying(rng, cubic, 10):
            rep = hypothesis_check(params, config, cubic, budget)
            assert rep.satisfied == (rep.margin >= 0)
            assert rep.margin == pytest.approx(abs(params.omega) - rep.threshold)
            assert rep.p == pytest.approx(rep.q_tilde + 1.0 / (1.0 - params.q))

    def test_threshold_dominates_band_for_nonnegative_coupling(self, cubic):
        rng = np.random.default_rng(47)
        for _ in range(30):
            Nc = int(rng.integers(1, 5))
            cfg = LatticeConfig(N=2 * Nc + 3,
                                kappa=tuple(rng.uniform(0, 1, Nc).tolist()))
            rep = hypothesis_check(WaveParameters(q=float(rng.uniform(0.05, 0.95)),
                                                  omega=1.0),
                                   cfg, cubic, float(rng.uniform(0, 5)))
            assert rep.threshold >= rep.R

    def test_threshold_monotone_in_budget_and_a(self, ring):
        params = WaveParameters(q=0.4, omega=3.0)
        cub = Nonlinearity.cubic()
        t = [hypothesis_check(params, ring, cub, P).threshold for P in (0.0, 1.0, 4.0)]
        assert t[0] <= t[1] <= t[2]
        stronger = Nonlinearity(kind="cubic", F=cub.F, G=cub.G, a=3.0, b=1.0)
        assert hypothesis_check(params, ring, stronger, 1.0).threshold >= t[1]

    def test_negative_budget_rejected(self, ring, cubic, worked_params):
        with pytest.raises(ValueError):
            hypothesis_check(worked_params, ring, cubic, -1.0)


class TestAprioriBounds:
    def test_zero_profile(self, ring, cubic, worked_params):
        chk = apriori_bounds_check(Profile.zero(), worked_params, ring, cubic, 2.0)
        assert chk.c0_ok and chk.c1_ok
        R = band_range(ring).R
        sq = np.sqrt(2.0)
        assert chk.slack[0] == pytest.approx(sq)
        assert chk.slack[1] == pytest.approx((0.5 + (4.0 + 3.0) / R) * sq)

    def test_constant_at_the_bound(self, ring, cubic, worked_params):
        budget = 1.7
        p = Profile.constant(np.sqrt(budget), M=32)
        chk = apriori_bounds_check(p, worked_params, ring, cubic, budget)
        assert chk.c0_ok and chk.c1_ok
        assert chk.slack[0] == pytest.approx(0.0, abs=1e-12)

    def test_constant_exceeding_the_bound(self, ring, cubic, worked_params):
        p = Profile.constant(2.0 * np.sqrt(1.7), M=32)
        chk = apriori_bounds_check(p, worked_params, ring, cubic, 1.7)
        assert not chk.c0_ok

    def test_zero_band_radius_is_an_error(self, cubic, worked_params):
        cfg = LatticeConfig(N=9, kappa=(0.0,))
        with pytest.raises(ValueError):
            apriori_bounds_check(Profile.zero(), worked_params, cfg, cubic, 1.0)


class TestResonanceScan:
    def test_satisfying_draw_is_clear(self, ring, cubic):
        scan = resonance_scan(WaveParameters(q=0.5, omega=3.0), ring, L_max=2000)
        assert scan.min_abs_nu > 0.0
        assert scan.certified

    def test_constructed_resonance(self, ring):
        omega = -4.0 * np.sin(0.25) ** 2 / 0.5   # makes nu_0 vanish
        scan = resonance_scan(WaveParameters(q=0.5, omega=omega), ring, L_max=100)
        assert scan.argmin == 0
        assert scan.min_abs_nu < 1e-15

    def test_coupling_free(self):
        cfg = LatticeConfig(N=9, kappa=(0.0,))
        scan = resonance_scan(WaveParameters(q=0.5, omega=1.0), cfg, L_max=100)
        assert scan.min_abs_nu == pytest.approx(0.5)
        assert scan.argmin == 0

    def test_tail_certificate_is_sound(self, ring, worked_params):
        scan = resonance_scan(worked_params, ring, L_max=500)
        # every multiplier beyond the certified index exceeds the scanned minimum
        ls = np.concatenate([np.arange(scan.tail_index, scan.tail_index + 200),
                             -np.arange(scan.tail_index, scan.tail_index + 200)])
        nus = multiplier_nu(ls, worked_params, ring)
        assert np.min(np.abs(nus)) > scan.min_abs_nu
        # and the analytic lower bound is indeed increasing past it
        lower = (abs(worked_params.omega) * np.abs(ls + worked_params.q)
                 - 4.0 * sum(abs(k) for k in ring.kappa))
        assert np.all(lower > scan.min_abs_nu)

    def test_no_resonance_for_satisfying_draws(self, cubic):
        # the no-resonance consequence of the existence condition
        rng = np.random.default_rng(53)
        draws = draw_satisfying(rng, cubic, 200, allow_negative_kappa=True)
        for params, config, _ in draws:
            scan = resonance_scan(params, config, L_max=1000)
            assert scan.min_abs_nu > 0.0
