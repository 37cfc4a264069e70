"""Periodic envelope profiles and the Fourier-multiplier machinery.

A travelling wave on the ring has the Bloch-Floquet form

    psi_n(t) = exp(i q (n - omega t)) Phi(n - omega t),

with Bloch phase q in (0, 1), frequency omega != 0 and a periodic envelope
Phi of period P (the classical setting is P = 2 pi).  The envelope solves

    -i omega Phi' + omega q Phi - sum_j kappa_j D_j Phi = F(|Phi|^2) Phi,

where D_j is the phase-shifted second difference

    D_j Phi(u) = Phi(u+j) e^{iqj} - 2 Phi(u) + Phi(u-j) e^{-iqj}.

The left-hand side is a Fourier multiplier operator M_q: on the basis mode
exp(i lam_l u) with lam_l = 2 pi l / P it acts by

    nu_l = omega (q + lam_l) + 4 sum_j kappa_j sin^2((q + lam_l) j / 2),

so M_q is diagonal in coefficient space and invertible iff no nu_l
vanishes.  Frequencies inside the phonon band [-R, R], the range of
g(x) = (2/x) sum_j kappa_j sin^2(j x), are the ones at risk of resonance.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

EPS_RESONANCE = 1e-10   # hard floor below which a multiplier counts as resonant


class ResonanceError(ArithmeticError):
    """A Fourier multiplier nu_l is (numerically) zero: M_q is not invertible."""

    def __init__(self, mode: int, nu: float):
        self.mode = int(mode)
        self.nu = float(nu)
        super().__init__(f"resonant multiplier nu_l = {nu:.3e} at mode l = {mode}")


class BandViolation(ValueError):
    """|omega| does not clear the phonon band radius R; a bound is undefined."""


@dataclass(frozen=True)
class WaveParameters:
    """Travelling-wave coordinates: Bloch phase q in (0,1) and frequency omega != 0.

    `rational` optionally records q = r/s with coprime 0 < r < s.
    """

    q: float
    omega: float
    rational: tuple | None = None

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError("Bloch phase q must lie in (0, 1)")
        if self.omega == 0.0:
            raise ValueError("frequency omega must be nonzero")
        if self.rational is not None:
            r, s = self.rational
            if not (0 < r < s and gcd(r, s) == 1):
                raise ValueError("rational data must be coprime integers 0 < r < s")
            object.__setattr__(self, "rational", (int(r), int(s)))


@dataclass(frozen=True)
class Profile:
    """Periodic envelope sampled on a uniform grid, with its Fourier coefficients.

    samples[m] = Phi(u_m) at u_m = m P / M;  coeffs holds the coefficients of
    exp(i 2 pi l u / P) in numpy FFT ordering (l = 0, 1, .., M/2-1, -M/2, .., -1,
    see `modes`).  M must be a power of two, at least 8.  Both arrays are kept
    populated and read-only; profiles are safe to share between threads.
    """

    period: float
    samples: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        M = len(self.samples)
        if M < 8 or M & (M - 1):
            raise ValueError("sample count M must be a power of two, at least 8")
        if len(self.coeffs) != M:
            raise ValueError("samples and coeffs must have equal length")
        if self.period <= 0:
            raise ValueError("period must be positive")
        for name in ("samples", "coeffs"):
            arr = np.array(getattr(self, name), dtype=complex)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_samples(cls, samples, period: float = 2.0 * np.pi) -> "Profile":
        """Grid values -> profile; normalised so a constant A gives coeff[0] = A."""
        samples = np.asarray(samples, dtype=complex)
        return cls(period=float(period), samples=samples,
                   coeffs=np.fft.fft(samples) / len(samples))

    @classmethod
    def from_coeffs(cls, coeffs, period: float = 2.0 * np.pi) -> "Profile":
        """Fourier coefficients (FFT ordering) -> profile; exact inverse of from_samples."""
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls(period=float(period), samples=np.fft.ifft(coeffs) * len(coeffs),
                   coeffs=coeffs)

    @classmethod
    def constant(cls, value: complex, M: int = 128, period: float = 2.0 * np.pi) -> "Profile":
        return cls.from_samples(np.full(M, value, dtype=complex), period)

    @classmethod
    def zero(cls, M: int = 128, period: float = 2.0 * np.pi) -> "Profile":
        return cls.constant(0.0, M, period)

    # -- geometry ---------------------------------------------------------
    @property
    def M(self) -> int:
        return len(self.samples)

    @property
    def grid(self) -> np.ndarray:
        """Sample points u_m = m P / M."""
        return np.arange(self.M) * (self.period / self.M)

    @property
    def modes(self) -> np.ndarray:
        """Integer mode numbers l in FFT ordering, l in [-M/2, M/2)."""
        return np.fft.fftfreq(self.M, 1.0 / self.M).astype(int)

    @property
    def wavenumbers(self) -> np.ndarray:
        """lam_l = 2 pi l / P for each stored mode."""
        return 2.0 * np.pi * self.modes / self.period

    # -- operations -------------------------------------------------------
    def derivative(self) -> "Profile":
        """Spectral derivative; exact for trigonometric polynomials of degree < M/2."""
        return Profile.from_coeffs(self.coeffs * (1j * self.wavenumbers), self.period)

    def evaluate(self, u) -> np.ndarray:
        """Trigonometric interpolation at arbitrary points u."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return np.exp(1j * np.outer(u, self.wavenumbers)) @ self.coeffs

    def refined(self, factor: int = 2) -> "Profile":
        """Same trigonometric polynomial on a factor-times finer grid (zero padding)."""
        M2 = self.M * int(factor)
        c2 = np.zeros(M2, dtype=complex)
        half = self.M // 2
        c2[:half] = self.coeffs[:half]
        c2[M2 - half:] = self.coeffs[half:]
        return Profile.from_coeffs(c2, self.period)


def q_tilde(q: float) -> float:
    """Mode-growth factor of the inverse-norm bound: 1/q for q < 1/2, else 1/(1-q)."""
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1)")
    return 1.0 / q if q < 0.5 else 1.0 / (1.0 - q)


def _multipliers(lam, params: WaveParameters, config) -> np.ndarray:
    """nu over an array of wavenumbers lam = 2 pi l / P."""
    lam = np.asarray(lam, dtype=float)
    s = np.zeros_like(lam)
    for j, k in enumerate(config.kappa, start=1):
        s += 4.0 * k * np.sin((params.q + lam) * j / 2.0) ** 2
    return params.omega * (params.q + lam) + s


def multiplier_nu(l, params: WaveParameters, config, period: float = 2.0 * np.pi):
    """Multiplier nu_l = omega (q + lam_l) + 4 sum_j kappa_j sin^2((q + lam_l) j / 2).

    lam_l = 2 pi l / P; at the classical period P = 2 pi this reduces to
    nu_l = omega (q + l) + 4 sum_j kappa_j sin^2((q + l) j / 2).  Accepts a
    scalar or an array of mode numbers l.
    """
    l = np.asarray(l, dtype=float)
    out = _multipliers(2.0 * np.pi * l / period, params, config)
    return float(out) if out.ndim == 0 else out


def shifted_difference(p: Profile, params: WaveParameters, j: int) -> Profile:
    """Phase-shifted second difference D_j, applied in coefficient space.

    Mode lam picks up the factor -4 sin^2((q + lam) j / 2); exact for
    band-limited profiles.
    """
    if j < 1:
        raise ValueError("shift j must be a positive integer")
    mult = -4.0 * np.sin((params.q + p.wavenumbers) * j / 2.0) ** 2
    return Profile.from_coeffs(p.coeffs * mult, p.period)


def apply_M(p: Profile, params: WaveParameters, config) -> Profile:
    """Apply the multiplier operator: coefficient l is scaled by nu_l."""
    nus = _multipliers(p.wavenumbers, params, config)
    return Profile.from_coeffs(p.coeffs * nus, p.period)


def apply_M_inverse(p: Profile, params: WaveParameters, config,
                    drop_resonant: bool = False) -> Profile:
    """Invert the multiplier operator: coefficient l is divided by nu_l.

    Raises ResonanceError if any represented multiplier falls below
    EPS_RESONANCE in magnitude.  With drop_resonant=True those modes are
    projected out instead (pseudo-inverse); callers then own the check that
    the discarded component genuinely vanishes, e.g. through the full
    equation residual.
    """
    nus = _multipliers(p.wavenumbers, params, config)
    bad = np.abs(nus) < EPS_RESONANCE
    if np.any(bad):
        if not drop_resonant:
            worst = int(np.argmin(np.abs(nus)))
            raise ResonanceError(p.modes[worst], nus[worst])
        coeffs = np.where(bad, 0.0, p.coeffs / np.where(bad, 1.0, nus))
    else:
        coeffs = p.coeffs / nus
    return Profile.from_coeffs(coeffs, p.period)


def g_eval(x, config):
    """Band function g(x) = (2/x) sum_j kappa_j sin^2(j x), defined for x != 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x == 0.0):
        raise ValueError("g(x) is defined on x != 0 (the limit at 0 is excluded)")
    s = np.zeros_like(x)
    for j, k in enumerate(config.kappa, start=1):
        s += k * np.sin(j * x) ** 2
    out = 2.0 * s / x
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BandInfo:
    """Phonon band [-R, R]: R = sup |g| and a maximiser x_star of |g|."""

    R: float
    x_star: float
    band: tuple

    def __post_init__(self):
        object.__setattr__(self, "band", (float(self.band[0]), float(self.band[1])))


def band_range(config, step: float = 1e-3) -> BandInfo:
    """Band radius R = sup_{x != 0} |g(x)| by dense grid search plus golden refinement.

    |g(x)| <= 2 sum|kappa_j| / x, so the search window [step, x_cut] is grown
    until the tail bound at x_cut drops below the running maximum; the best
    grid point is then refined by golden-section to 1e-10 in x.  By oddness
    only x > 0 is searched.
    """
    kap = np.asarray(config.kappa, dtype=float)
    if not np.any(kap):
        return BandInfo(R=0.0, x_star=1.0, band=(0.0, 0.0))
    tail = 2.0 * float(np.sum(np.abs(kap)))

    def absg(x):
        return np.abs(g_eval(x, config))

    x_lo, x_hi = step, 2.0 * np.pi
    best_x, best_v = x_lo, 0.0
    while True:
        xs = np.arange(x_lo, x_hi, step)
        vals = absg(xs)
        i = int(np.argmax(vals))
        if vals[i] > best_v:
            best_x, best_v = float(xs[i]), float(vals[i])
        if tail / x_hi < best_v:
            break
        x_lo, x_hi = x_hi, 2.0 * x_hi

    # golden-section refinement of |g| on the bracketing interval
    a, b = max(best_x - step, step * 1e-3), best_x + step
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = absg(c), absg(d)
    while b - a > 1e-10:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = absg(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = absg(d)
    x_ref = (a + b) / 2.0
    # never report less than the best coarse grid value
    if absg(x_ref) >= best_v:
        x_star, R = x_ref, float(absg(x_ref))
    else:
        x_star, R = best_x, best_v
    return BandInfo(R=R, x_star=float(x_star), band=(-R, R))


def profile_norms(p: Profile) -> tuple:
    """Grid sup norms (c0, c1): c0 = max |Phi|, c1 = c0 + max |Phi'| (spectral Phi')."""
    c0 = float(np.max(np.abs(p.samples)))
    c1 = c0 + float(np.max(np.abs(p.derivative().samples)))
    return c0, c1


def inverse_norm_estimate(params: WaveParameters, config, L_max: int = 10_000,
                          period: float = 2.0 * np.pi) -> tuple:
    """Computed vs analytic bound for the operator norm of the multiplier inverse.

    computed = max_{|l| <= L_max} (1 + |l|) / |nu_l|;
    bound    = (q_tilde(q) + 1/(1-q)) / (|omega| - R).

    At period 2 pi, computed <= bound whenever |omega| clears the frequency
    threshold of the existence condition.  Raises BandViolation when
    |omega| <= R, where the bound is undefined.
    """
    R = band_range(config).R
    if abs(params.omega) <= R:
        raise BandViolation(f"|omega| = {abs(params.omega):.6g} does not exceed the "
                            f"band radius R = {R:.6g}")
    ls = np.arange(-L_max, L_max + 1)
    nus = _multipliers(2.0 * np.pi * ls / period, params, config)
    computed = float(np.max((1.0 + np.abs(ls)) / np.abs(nus)))
    bound = (q_tilde(params.q) + 1.0 / (1.0 - params.q)) / (abs(params.omega) - R)
    return computed, bound
