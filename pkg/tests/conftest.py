import numpy as np
import pytest

from dnlswave import LatticeConfig, Nonlinearity, WaveParameters, hypothesis_check


@pytest.fixture
def ring():
    """Nearest-neighbour ring used by the worked examples."""
    return LatticeConfig(N=12, kappa=(1.0,))


@pytest.fixture
def cubic():
    return Nonlinearity.cubic()


@pytest.fixture
def worked_params():
    """The standing reference point q = 1/2, omega = 2."""
    return WaveParameters(q=0.5, omega=2.0)


def draw_satisfying(rng, nl, n, allow_negative_kappa=False, max_extra=3.0):
    """Seeded parameter sets satisfying the existence condition.

    Draws (params, config, power_budget) with |omega| placed above the
    frequency threshold.  Couplings are nonnegative by default: the
    threshold formula (and with it the operator-norm chain) presumes a
    nonnegative net coupling.
    """
    out = []
    while len(out) < n:
        Nc = int(rng.integers(1, 6))
        lo = -1.0 if allow_negative_kappa else 0.0
        kappa = tuple(rng.uniform(lo, 1.0, Nc).tolist())
        if not any(kappa):
            continue
        config = LatticeConfig(N=2 * Nc + 3, kappa=kappa)
        q = float(rng.uniform(0.05, 0.95))
        budget = float(rng.uniform(0.0, 4.0))
        params = WaveParameters(q=q, omega=1.0)
        thr = hypothesis_check(params, config, nl, budget).threshold
        omega = (max(thr, 0.0) + float(rng.uniform(0.05, max_extra)))
        omega *= float(rng.choice([-1.0, 1.0]))
        out.append((WaveParameters(q=q, omega=omega), config, budget))
    return out


def random_band_limited(rng, M=128, max_mode=32, period=2.0 * np.pi):
    """Random band-limited profile coefficients in FFT ordering."""
    from dnlswave import Profile
    modes = np.fft.fftfreq(M, 1.0 / M).astype(int)
    c = rng.normal(size=M) + 1j * rng.normal(size=M)
    c[np.abs(modes) > max_mode] = 0.0
    return Profile.from_coeffs(c, period)
