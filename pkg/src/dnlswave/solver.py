"""Fixed-point computation of periodic travelling-wave envelopes.

The envelope equation M_q Phi = F(|Phi|^2) Phi is solved as the fixed-point
problem Phi = T(Phi) with T = M_q^{-1} o N, N(Phi) = F(|Phi|^2) Phi.  Plain
damped Picard iteration on power-law nonlinearities generically collapses to
the zero fixed point, so the default map is Petviashvili-stabilised: each
iterate is rescaled by gamma^g with the Rayleigh-type quotient

    gamma = <M_q Phi, Phi> / <N(Phi), Phi>      (grid-mean inner products),

which equals 1 at any true solution and therefore leaves fixed points
unchanged.  Convergence is declared only when both the iteration step and
the full-equation residual are below tolerance; collapse to zero is reported
honestly via the `trivial` flag rather than prevented artificially.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import LatticeConfig, Nonlinearity
from .spectral import (EPS_RESONANCE, Profile, ResonanceError, WaveParameters,
                       _multipliers, apply_M_inverse, multiplier_nu)


class MaxIterExceeded(RuntimeError):
    """Iteration budget exhausted before the step tolerance was met.

    The partial result is attached as `.result`.
    """

    def __init__(self, message: str, result: "SolveResult"):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class SolverOptions:
    """Iteration controls for `solve`.

    theta      damping: Phi <- (1-theta) Phi + theta S(Phi), 0 < theta <= 1.
    petviashvili / petviashvili_gamma
               stabilisation switch and exponent; the default exponent is
               1.5 for the cubic nonlinearity and (b+1)/b otherwise.
    tol_step / tol_residual
               stopping step size and residual target; convergence requires both.
    trivial_floor
               sup|Phi| below this flags collapse to the zero solution.
    on_resonance
               "error" raises ResonanceError when a represented multiplier is
               resonant; "project" iterates in the complement of the kernel
               (the full residual still decides convergence).
    """

    theta: float = 0.5
    petviashvili: bool = True
    petviashvili_gamma: float | None = None
    max_iter: int = 10_000
    tol_step: float = 1e-12
    tol_residual: float = 1e-10
    trivial_floor: float = 1e-8
    on_resonance: str = "error"

    def __post_init__(self):
        if not 0.0 < self.theta <= 1.0:
            raise ValueError("damping theta must lie in (0, 1]")
        if min(self.tol_step, self.tol_residual, self.trivial_floor) <= 0:
            raise ValueError("tolerances must be positive")
        if self.on_resonance not in ("error", "project"):
            raise ValueError("on_resonance must be 'error' or 'project'")

    def gamma_for(self, nl: Nonlinearity) -> float:
        if self.petviashvili_gamma is not None:
            return self.petviashvili_gamma
        return 1.5 if nl.kind == "cubic" else (nl.b + 1.0) / nl.b


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a fixed-point run with per-iteration (step, residual) history."""

    profile: Profile
    iterations: int
    residual_sup: float
    step_last: float
    converged: bool
    trivial: bool
    history: tuple = field(repr=False, default=())
    dropped_modes: tuple = ()


def apply_N(p: Profile, nl: Nonlinearity) -> Profile:
    """Pointwise nonlinear operator N(Phi) = F(|Phi|^2) Phi on the grid."""
    s = p.samples
    return Profile.from_samples(nl.F(np.abs(s) ** 2) * s, p.period)


def apply_T(p: Profile, params: WaveParameters, config: LatticeConfig, nl: Nonlinearity,
            drop_resonant: bool = False) -> Profile:
    """One application of the fixed-point map T = M_q^{-1} o N."""
    return apply_M_inverse(apply_N(p, nl), params, config, drop_resonant=drop_resonant)


def residual(p: Profile, params: WaveParameters, config: LatticeConfig,
             nl: Nonlinearity) -> float:
    """Sup-norm defect of the envelope equation on the grid.

    Measures max |M_q Phi - F(|Phi|^2) Phi| with the multiplier applied in
    coefficient space; zero exactly at a travelling-wave envelope.
    """
    nus = _multipliers(p.wavenumbers, params, config)
    lhs = np.fft.ifft(p.coeffs * nus) * p.M
    rhs = nl.F(np.abs(p.samples) ** 2) * p.samples
    return float(np.max(np.abs(lhs - rhs)))


def amplitude_from_dispersion(params: WaveParameters, config: LatticeConfig,
                              nl: Nonlinearity) -> float | None:
    """Amplitude A >= 0 of the constant-envelope branch, solving F(A^2) = nu_0.

    The constant envelope Phi = A is an exact solution iff F(A^2) equals the
    zeroth multiplier nu_0 = omega q + 4 sum_j kappa_j sin^2(q j / 2).  Found
    by bracketing on a geometric grid followed by bisection; returns None
    when no root exists (e.g. nu_0 < 0 with the cubic nonlinearity).
    """
    nu0 = multiplier_nu(0, params, config)
    if nu0 == 0.0:
        return 0.0
    h = lambda A: float(nl.F(A ** 2)) - nu0
    # bracket: h(0) = -nu0; scan amplitudes up to a generous cap
    cap = 1e3 * max(1.0, (abs(nu0) / nl.a) ** (1.0 / (2.0 * nl.b)))
    grid = np.geomspace(1e-9, cap, 800)
    sign0 = np.sign(-nu0)
    lo = 0.0
    hi = None
    for A in grid:
        if np.sign(h(A)) != sign0:
            hi = A
            break
        lo = A
    if hi is None:
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.sign(h(mid)) == sign0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def solve(seed: Profile, params: WaveParameters, config: LatticeConfig, nl: Nonlinearity,
          opts: SolverOptions | None = None) -> SolveResult:
    """Iterate the damped (optionally Petviashvili-stabilised) fixed-point map.

    Stops when the sup-norm step drops below opts.tol_step; `converged`
    additionally requires the equation residual to be at most
    opts.tol_residual.  Raises MaxIterExceeded (with the partial result
    attached) if the step tolerance is not reached within opts.max_iter, and
    ResonanceError for resonant multipliers unless opts.on_resonance is
    "project".
    """
    opts = opts or SolverOptions()
    nus = _multipliers(seed.wavenumbers, params, config)
    kernel = np.abs(nus) < EPS_RESONANCE
    if np.any(kernel) and opts.on_resonance == "error":
        worst = int(np.argmin(np.abs(nus)))
        raise ResonanceError(seed.modes[worst], nus[worst])
    nus_safe = np.where(kernel, 1.0, nus)
    gamma_exp = opts.gamma_for(nl)
    M = seed.M

    phi = np.array(seed.samples, dtype=complex)
    history = []
    step = np.inf
    res = np.inf
    it = 0
    for it in range(1, opts.max_iter + 1):
        coeffs = np.fft.fft(phi) / M
        Mphi = np.fft.ifft(coeffs * nus) * M
        Nphi = nl.F(np.abs(phi) ** 2) * phi
        Tc = np.fft.fft(Nphi) / M / nus_safe
        Tc[kernel] = 0.0
        Tphi = np.fft.ifft(Tc) * M
        if opts.petviashvili:
            num = float(np.mean(Mphi * np.conj(phi)).real)
            den = float(np.mean(Nphi * np.conj(phi)).real)
            gamma = num / den if den != 0.0 else 1.0
            if gamma > 0.0:
                Tphi = gamma ** gamma_exp * Tphi
        new = (1.0 - opts.theta) * phi + opts.theta * Tphi
        step = float(np.max(np.abs(new - phi)))
        phi = new
        if not np.all(np.isfinite(phi)):
            result = _make_result(np.nan_to_num(phi), seed.period, it, np.inf, step,
                                  opts, kernel, seed.modes, history)
            raise MaxIterExceeded(f"iterate diverged (non-finite values) at iteration {it}",
                                  result)
        res = _residual_arrays(phi, nus, nl, M)
        history.append((step, res))
        if step < opts.tol_step:
            break
    else:
        result = _make_result(phi, seed.period, it, res, step, opts, kernel,
                              seed.modes, history)
        raise MaxIterExceeded(
            f"step {step:.3e} above tolerance {opts.tol_step:.3e} "
            f"after {opts.max_iter} iterations", result)

    return _make_result(phi, seed.period, it, res, step, opts, kernel,
                        seed.modes, history)


def _residual_arrays(phi, nus, nl, M) -> float:
    coeffs = np.fft.fft(phi) / M
    lhs = np.fft.ifft(coeffs * nus) * M
    rhs = nl.F(np.abs(phi) ** 2) * phi
    return float(np.max(np.abs(lhs - rhs)))


def _make_result(phi, period, it, res, step, opts, kernel, modes, history) -> SolveResult:
    profile = Profile.from_samples(phi, period)
    c0 = float(np.max(np.abs(phi)))
    converged = bool(step < opts.tol_step and res <= opts.tol_residual)
    return SolveResult(profile=profile, iterations=it, residual_sup=float(res),
                       step_last=float(step), converged=converged,
                       trivial=bool(c0 < opts.trivial_floor), history=tuple(history),
                       dropped_modes=tuple(int(m) for m in modes[kernel]))
