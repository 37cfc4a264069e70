import numpy as np
import pytest
from scipy.optimize import brentq

from conftest import draw_satisfying, random_band_limited
from dnlswave import (BandViolation, LatticeConfig, Nonlinearity, Profile,
                      ResonanceError, WaveParameters, apply_M, apply_M_inverse,
                      band_range, g_eval, inverse_norm_estimate, multiplier_nu,
                      profile_norms, q_tilde, shifted_difference)


class TestProfile:
    def test_roundtrip_and_parseval(self):
        rng = np.random.default_rng(3)
        s = rng.normal(size=128) + 1j * rng.normal(size=128)
        p = Profile.from_samples(s)
        back = Profile.from_coeffs(p.coeffs)
        assert np.max(np.abs(back.samples - s)) < 1e-12
        grid_power = np.sum(np.abs(s) ** 2) / p.M
        coeff_power = np.sum(np.abs(p.coeffs) ** 2)
        assert abs(grid_power - coeff_power) < 1e-12 * grid_power

    def test_constant_and_pure_mode_conventions(self):
        p = Profile.constant(2.0, M=64)
        assert p.coeffs[0] == pytest.approx(2.0)
        assert np.max(np.abs(p.coeffs[1:])) < 1e-15
        u = np.arange(32) * 2 * np.pi / 32
        p1 = Profile.from_samples(np.exp(1j * u))
        assert p1.coeffs[1] == pytest.approx(1.0)
        others = np.abs(p1.coeffs[np.arange(32) != 1])
        assert np.max(others) < 1e-14

    def test_from_coeffs_examples(self):
        c = np.zeros(16, complex)
        c[0] = 1.0
        assert np.max(np.abs(Profile.from_coeffs(c).samples - 1.0)) < 1e-14
        c = np.zeros(16, complex)
        c[1] = 1.0
        p = Profile.from_coeffs(c)
        assert np.max(np.abs(p.samples - np.exp(1j * p.grid))) < 1e-14

    def test_grid_size_validation(self):
        with pytest.raises(ValueError):
            Profile.from_samples(np.zeros(100, complex))   # not a power of two
        with pytest.raises(ValueError):
            Profile.from_samples(np.zeros(4, complex))     # below minimum

    def test_derivative_exact_on_trig_polynomials(self):
        u = np.arange(64) * 2 * np.pi / 64
        p = Profile.from_samples(np.exp(2j * u) + 3.0 * np.exp(-5j * u))
        expected = 2j * np.exp(2j * u) - 15j * np.exp(-5j * u)
        assert np.max(np.abs(p.derivative().samples - expected)) < 1e-12

    def test_evaluate_interpolates(self):
        rng = np.random.default_rng(8)
        p = random_band_limited(rng, M=64, max_mode=10, period=5.0)
        assert np.max(np.abs(p.evaluate(p.grid) - p.samples)) < 1e-11
        fine = p.refined(2)
        assert np.max(np.abs(fine.evaluate(p.grid) - p.samples)) < 1e-11

    def test_immutability(self):
        p = Profile.constant(1.0, M=16)
        with pytest.raises(ValueError):
            p.samples[0] = 5.0


class TestShiftedDifference:
    def test_constant_profile(self):
        # hand value: the zero mode picks up 2 cos(q j) - 2
        params = WaveParameters(q=0.5, omega=2.0)
        p = Profile.constant(3.0, M=32)
        out = shifted_difference(p, params, 1)
        expected = (2.0 * np.cos(0.5) - 2.0) * 3.0
        assert np.max(np.abs(out.samples - expected)) < 1e-14

    def test_zero_profile(self, worked_params):
        out = shifted_difference(Profile.zero(M=16), worked_params, 2)
        assert np.all(out.samples == 0)

    def test_pure_mode_factor(self, worked_params):
        c = np.zeros(32, complex)
        c[3] = 1.0
        out = shifted_difference(Profile.from_coeffs(c), worked_params, 2)
        factor = -4.0 * np.sin((0.5 + 3) * 2 / 2.0) ** 2
        assert out.coeffs[3] == pytest.approx(factor, abs=1e-14)

    def test_matches_direct_shift_evaluation(self):
        # independent oracle: interpolate Phi at u +- j and assemble directly
        rng = np.random.default_rng(21)
        params = WaveParameters(q=0.3, omega=1.5)
        p = random_band_limited(rng, M=64, max_mode=12)
        for j in (1, 3):
            direct = (p.evaluate(p.grid + j) * np.exp(1j * params.q * j)
                      - 2.0 * p.samples
                      + p.evaluate(p.grid - j) * np.exp(-1j * params.q * j))
            out = shifted_difference(p, params, j)
            assert np.max(np.abs(out.samples - direct)) < 1e-10

    def test_rejects_nonpositive_shift(self, worked_params):
        with pytest.raises(ValueError):
            shifted_difference(Profile.zero(), worked_params, 0)


class TestMultiplier:
    def test_worked_values(self, ring, worked_params):
        # hand evaluations of omega (q+l) + 4 kappa sin^2((q+l)/2)
        assert multiplier_nu(0, worked_params, ring) == pytest.approx(
            1.0 + 4.0 * np.sin(0.25) ** 2, abs=1e-14)
        assert multiplier_nu(-1, worked_params, ring) == pytest.approx(
            -1.0 + 4.0 * np.sin(0.25) ** 2, abs=1e-14)
        free = LatticeConfig(N=9, kappa=(0.0,))
        assert multiplier_nu(0, WaveParameters(q=0.37, omega=1.9), free) == \
            pytest.approx(1.9 * 0.37, abs=1e-14)

    def test_identity_with_band_function(self, ring):
        # nu_l = (q + l)(omega + g((q + l)/2)) at the classical period
        rng = np.random.default_rng(13)
        cfg = LatticeConfig(N=13, kappa=(0.9, -0.4, 0.25))
        for _ in range(50):
            q = float(rng.uniform(0.01, 0.99))
            omega = float(rng.uniform(-4, 4)) or 1.0
            l = int(rng.integers(-40, 40))
            params = WaveParameters(q=q, omega=omega)
            x = (q + l) / 2.0
            expected = (q + l) * (omega + g_eval(x, cfg))
            assert multiplier_nu(l, params, cfg) == pytest.approx(expected, abs=1e-12)

    def test_vectorised(self, ring, worked_params):
        ls = np.arange(-5, 6)
        vals = multiplier_nu(ls, worked_params, ring)
        assert vals.shape == (11,)
        assert vals[5] == pytest.approx(multiplier_nu(0, worked_params, ring))


class TestApplyM:
    def test_pure_mode_eigenvalue(self, ring, worked_params):
        c = np.zeros(32, complex)
        c[2] = 1.0
        out = apply_M(Profile.from_coeffs(c), worked_params, ring)
        assert out.coeffs[2] == pytest.approx(
            multiplier_nu(2, worked_params, ring), abs=1e-14)

    def test_zero(self, ring, worked_params):
        assert np.all(apply_M(Profile.zero(), worked_params, ring).samples == 0)

    def test_matches_assembled_operator(self, ring):
        # independent assembly: -i omega Phi' + omega q Phi - sum_j kappa_j D_j Phi
        rng = np.random.default_rng(17)
        cfg = LatticeConfig(N=11, kappa=(0.8, 0.3))
        params = WaveParameters(q=0.41, omega=2.3)
        p = random_band_limited(rng, M=128, max_mode=30)
        assembled = (-1j * params.omega * p.derivative().samples
                     + params.omega * params.q * p.samples)
        for j, k in enumerate(cfg.kappa, start=1):
            assembled -= k * shifted_difference(p, params, j).samples
        out = apply_M(p, params, cfg)
        assert np.max(np.abs(out.samples - assembled)) < 1e-11

    def test_linearity(self, ring, worked_params):
        rng = np.random.default_rng(19)
        p1 = random_band_limited(rng, M=64, max_mode=20)
        p2 = random_band_limited(rng, M=64, max_mode=20)
        a, b = 1.7 - 0.3j, -0.6 + 1.1j
        combo = Profile.from_coeffs(a * p1.coeffs + b * p2.coeffs)
        lhs = apply_M(combo, worked_params, ring).samples
        rhs = (a * apply_M(p1, worked_params, ring).samples
               + b * apply_M(p2, worked_params, ring).samples)
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * np.max(np.abs(lhs))


class TestApplyMInverse:
    def test_pure_mode(self, ring, worked_params):
        c = np.zeros(32, complex)
        c[1] = 1.0
        out = apply_M_inverse(Profile.from_coeffs(c), worked_params, ring)
        assert out.coeffs[1] == pytest.approx(
            1.0 / multiplier_nu(1, worked_params, ring), abs=1e-14)

    def test_roundtrip_identity(self, ring, worked_params):
        rng = np.random.default_rng(23)
        p = random_band_limited(rng, M=128, max_mode=40)
        fwd = apply_M_inverse(apply_M(p, worked_params, ring), worked_params, ring)
        bwd = apply_M(apply_M_inverse(p, worked_params, ring), worked_params, ring)
        scale = np.max(np.abs(p.samples))
        assert np.max(np.abs(fwd.samples - p.samples)) < 1e-10 * max(1.0, scale)
        assert np.max(np.abs(bwd.samples - p.samples)) < 1e-10 * max(1.0, scale)

    def test_resonance_detected(self, ring):
        # solve nu_0 = 0 for omega by hand: omega = -4 sin^2(q/2) / q at q = 1/2
        omega = -4.0 * np.sin(0.25) ** 2 / 0.5
        params = WaveParameters(q=0.5, omega=omega)
        with pytest.raises(ResonanceError) as err:
            apply_M_inverse(Profile.constant(1.0), params, ring)
        assert err.value.mode == 0
        assert abs(err.value.nu) < 1e-10

    def test_drop_resonant_projects_kernel(self, ring):
        omega = -4.0 * np.sin(0.25) ** 2 / 0.5
        params = WaveParameters(q=0.5, omega=omega)
        p = Profile.constant(1.0, M=16)
        out = apply_M_inverse(p, params, ring, drop_resonant=True)
        assert np.max(np.abs(out.samples)) < 1e-14


class TestBandFunction:
    def test_values(self, ring):
        assert g_eval(np.pi, ring) == pytest.approx(0.0, abs=1e-30)
        assert g_eval(1.0, ring) == pytest.approx(2.0 * np.sin(1.0) ** 2, abs=1e-14)

    def test_odd(self, ring):
        rng = np.random.default_rng(29)
        xs = rng.uniform(0.1, 20.0, 25)
        assert np.max(np.abs(g_eval(-xs, ring) + g_eval(xs, ring))) < 1e-14

    def test_rejects_zero(self, ring):
        with pytest.raises(ValueError):
            g_eval(0.0, ring)
        with pytest.raises(ValueError):
            g_eval(np.array([1.0, 0.0]), ring)


class TestBandRange:
    def test_nearest_neighbour_reference(self, ring):
        # oracle: the maximiser of 2 sin^2(x)/x solves tan x = 2x
        x_star = brentq(lambda x: np.tan(x) - 2.0 * x, 1.0, 1.4, xtol=1e-14)
        R_oracle = 2.0 * np.sin(x_star) ** 2 / x_star
        info = band_range(ring)
        assert info.R == pytest.approx(R_oracle, abs=1e-9)
        assert info.x_star == pytest.approx(x_star, abs=1e-7)
        assert info.band == (-info.R, info.R)
        assert abs(g_eval(info.x_star, ring)) == pytest.approx(info.R, rel=1e-9)

    def test_matches_fine_grid(self):
        rng = np.random.default_rng(31)
        for _ in range(5):
            Nc = int(rng.integers(1, 5))
            cfg = LatticeConfig(N=2 * Nc + 3,
                                kappa=tuple(rng.uniform(-1, 1, Nc).tolist()))
            info = band_range(cfg)
            xs = np.arange(1e-4, 40.0, 1e-4)
            fine = np.max(np.abs(g_eval(xs, cfg)))
            assert info.R >= fine - 1e-6
            assert info.R <= fine + 1e-6

    def test_zero_coupling(self):
        cfg = LatticeConfig(N=9, kappa=(0.0, 0.0))
        info = band_range(cfg)
        assert info.R == 0.0
        assert info.band == (0.0, 0.0)

    def test_exact_linear_scaling(self):
        base = LatticeConfig(N=13, kappa=(0.73, -0.21, 0.4))
        doubled = LatticeConfig(N=13, kappa=(1.46, -0.42, 0.8))
        i1, i2 = band_range(base), band_range(doubled)
        assert i2.R == 2.0 * i1.R           # power-of-two scaling is bitwise exact
        assert i2.x_star == i1.x_star
        tripled = LatticeConfig(N=13, kappa=(3 * 0.73, 3 * -0.21, 3 * 0.4))
        assert band_range(tripled).R == pytest.approx(3.0 * i1.R, rel=1e-12)


class TestNorms:
    def test_profile_norms_examples(self):
        c0, c1 = profile_norms(Profile.constant(-2.0 + 0j, M=16))
        assert (c0, c1) == (pytest.approx(2.0), pytest.approx(2.0))
        u = np.arange(64) * 2 * np.pi / 64
        c0, c1 = profile_norms(Profile.from_samples(np.exp(1j * u)))
        assert c0 == pytest.approx(1.0, abs=1e-13)
        assert c1 == pytest.approx(2.0, abs=1e-13)

    def test_c1_dominates_c0(self):
        rng = np.random.default_rng(37)
        for _ in range(5):
            p = random_band_limited(rng, M=64, max_mode=15)
            c0, c1 = profile_norms(p)
            assert c1 >= c0


class TestInverseNormEstimate:
    def test_worked_case(self, ring, worked_params):
        computed, bound = inverse_norm_estimate(worked_params, ring, L_max=64)
        # oracle: explicit loop over modes
        best = 0.0
        for l in range(-64, 65):
            nu = 2.0 * (0.5 + l) + 4.0 * np.sin((0.5 + l) / 2.0) ** 2
            best = max(best, (1 + abs(l)) / abs(nu))
        assert computed == pytest.approx(best, rel=1e-13)
        assert computed == pytest.approx(2.862, abs=2e-3)
        assert bound == pytest.approx(7.26, abs=2e-2)
        assert computed <= bound

    def test_coupling_free_equality(self):
        cfg = LatticeConfig(N=9, kappa=(0.0,))
        computed, bound = inverse_norm_estimate(WaveParameters(q=0.5, omega=1.0),
                                                cfg, L_max=64)
        assert computed == pytest.approx(4.0, abs=1e-13)
        assert bound == pytest.approx(4.0, abs=1e-13)

    def test_decreases_with_omega(self, ring):
        c1, _ = inverse_norm_estimate(WaveParameters(q=0.5, omega=2.0), ring, L_max=64)
        c10, _ = inverse_norm_estimate(WaveParameters(q=0.5, omega=20.0), ring, L_max=64)
        assert c10 < c1

    def test_stabilises_in_l_max(self, ring, worked_params):
        vals = [inverse_norm_estimate(worked_params, ring, L_max=L)[0]
                for L in (64, 256, 1024)]
        assert vals[0] == vals[1] == vals[2]

    def test_band_violation(self, ring):
        with pytest.raises(BandViolation):
            inverse_norm_estimate(WaveParameters(q=0.5, omega=1.0), ring, L_max=32)

    def test_bounded_for_satisfying_draws(self, cubic):
        rng = np.random.default_rng(41)
        for params, config, _ in draw_satisfying(rng, cubic, 25):
            computed, bound = inverse_norm_estimate(params, config, L_max=512)
            assert computed <= bound * (1 + 1e-9)


class TestQTilde:
    def test_branch_values(self):
        assert q_tilde(0.25) == pytest.approx(4.0)
        assert q_tilde(0.5) == pytest.approx(2.0)
        assert q_tilde(0.75) == pytest.approx(4.0)

    def test_continuity_at_half(self):
        eps = 1e-9
        assert q_tilde(0.5 - eps) == pytest.approx(q_tilde(0.5 + eps), abs=1e-7)

    def test_domain(self):
        for bad in (0.0, 1.0, -0.1, 1.7):
            with pytest.raises(ValueError):
                q_tilde(bad)


class TestWaveParameters:
    def test_validation(self):
        with pytest.raises(ValueError):
            WaveParameters(q=0.0, omega=1.0)
        with pytest.raises(ValueError):
            WaveParameters(q=1.2, omega=1.0)
        with pytest.raises(ValueError):
            WaveParameters(q=0.5, omega=0.0)
        with pytest.raises(ValueError):
            WaveParameters(q=0.5, omega=1.0, rational=(2, 4))
        p = WaveParameters(q=0.25, omega=-1.0, rational=(1, 4))
        assert p.rational == (1, 4)
