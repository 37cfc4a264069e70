"""Embedding travelling-wave envelopes as exact states on finite rings.

The wave psi_n(t) = exp(i q (n - omega t)) Phi(n - omega t) closes on a ring
of N sites iff exp(i q N) = 1 and the envelope period P divides N.  Both are
arranged by the commensurate plan

    q = 2 pi m / N   (winding number m),    P = N / M_wraps,

so the envelope wraps the ring M_wraps times.  A non-constant envelope of
the classical period 2 pi can never close exactly on an integer ring (2 pi
is irrational), which is why embedded waves are solved at period P instead;
all pure-profile computations keep the 2 pi default.

Note the commensurate setting admits a genuine multiplier kernel: whenever
M_wraps divides m, the mode l = -m / M_wraps has q + 2 pi l / P = 0 and
nu_l = 0 exactly.  That mode represents a constant added to the carrier
wave, which the envelope equation cannot see; solvers must project it out
(see SolverOptions.on_resonance) and verify it through the full residual.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .dynamics import SimulationResult
from .lattice import LatticeConfig, LatticeState, Nonlinearity, eval_rhs
from .spectral import Profile, WaveParameters


@dataclass(frozen=True)
class EmbeddingPlan:
    """Commensurability data tying an envelope of period P to a ring of N sites.

    k and L report, when rational wavenumber data (r, s) is available, the
    conventional wavenumber pi r / s and the associated minimal spatial
    period s / r; they are informational only.
    """

    N: int
    m: int
    M_wraps: int
    q: float
    P: float
    closure_defect: float
    k: float | None = None
    L: Fraction | None = None

    @property
    def ring_exact(self) -> bool:
        return self.closure_defect <= 1e-12


def plan_commensurate(m: int, M_wraps: int, N: int) -> EmbeddingPlan:
    """Ring-exact plan with q = 2 pi m / N and envelope period P = N / M_wraps.

    Requires N >= 3, M_wraps dividing N, and the resulting q to land in the
    admissible Bloch range (0, 1).
    """
    if N < 3:
        raise ValueError("ring size N must be at least 3")
    if m < 1 or M_wraps < 1:
        raise ValueError("m and M_wraps must be positive integers")
    if N % M_wraps:
        raise ValueError(f"M_wraps = {M_wraps} does not divide N = {N}")
    q = 2.0 * np.pi * m / N
    if not 0.0 < q < 1.0:
        raise ValueError(f"q = 2 pi {m}/{N} = {q:.6g} falls outside (0, 1)")
    defect = float(abs(np.exp(1j * q * N) - 1.0))
    return EmbeddingPlan(N=int(N), m=int(m), M_wraps=int(M_wraps), q=q,
                         P=N / M_wraps, closure_defect=defect)


def minimal_period_report(r: int, s: int) -> tuple:
    """Spatial periods for rational wavenumber data k = pi r / s.

    Returns (L, N_min): L = s / r is the conventional minimal spatial period;
    N_min = 2 s / gcd(2, r) is the smallest ring size on which the phase
    k N is a whole number of turns.  The two conventions disagree for odd r;
    both are reported, neither corrected.
    """
    r, s = int(r), int(s)
    if not (0 < r < s):
        raise ValueError("need 0 < r < s")
    if gcd(r, s) != 1:
        raise ValueError("r and s must be coprime")
    return Fraction(s, r), 2 * s // gcd(2, r)


def embed(p: Profile, params: WaveParameters, plan: EmbeddingPlan,
          t: float = 0.0) -> LatticeState:
    """Lattice state psi_n(t) = exp(i q (n - omega t)) Phi(n - omega t).

    The envelope is evaluated by trigonometric interpolation (exact for
    band-limited Phi).  Requires a ring-exact plan whose period matches the
    profile and whose q matches the wave parameters.
    """
    _check_plan(p, params, plan)
    n = np.arange(plan.N, dtype=float)
    u = n - params.omega * t
    psi = np.exp(1j * params.q * u) * p.evaluate(u)
    return LatticeState(psi, t=t)


def ansatz_derivative(p: Profile, params: WaveParameters, plan: EmbeddingPlan,
                      t: float = 0.0) -> np.ndarray:
    """Exact time derivative of the embedded wave, from the ansatz.

    d psi_n / dt = exp(i q (n - omega t)) [ -i q omega Phi(u) - omega Phi'(u) ].
    """
    _check_plan(p, params, plan)
    n = np.arange(plan.N, dtype=float)
    u = n - params.omega * t
    carrier = np.exp(1j * params.q * u)
    return carrier * (-1j * params.q * params.omega * p.evaluate(u)
                      - params.omega * p.derivative().evaluate(u))


def lattice_equation_defect(p: Profile, params: WaveParameters, config: LatticeConfig,
                            nl: Nonlinearity, plan: EmbeddingPlan,
                            t: float = 0.0) -> float:
    """Pointwise defect of the ring ODE for the embedded wave.

    max_n |i (d psi_n/dt)_ansatz - RHS_n|; equals the envelope-equation
    defect evaluated along the travelling coordinate, so it stays within a
    small factor of the profile residual.
    """
    state = embed(p, params, plan, t)
    return float(np.max(np.abs(ansatz_derivative(p, params, plan, t)
                               - eval_rhs(state, config, nl))))


def translation_error(traj: SimulationResult, p: Profile, params: WaveParameters,
                      plan: EmbeddingPlan) -> float:
    """Largest deviation of a trajectory from the travelling-wave ansatz.

    max over stored times and sites of |psi_n(t) - e^{i q (n - omega t)}
    Phi(n - omega t)|; discriminates true travelling waves (error at the
    integrator level) from non-solutions (error grows with time).
    """
    err = 0.0
    for t, state in zip(traj.times, traj.states):
        expected = embed(p, params, plan, float(t))
        err = max(err, float(np.max(np.abs(state.psi - expected.psi))))
    return err


def _check_plan(p: Profile, params: WaveParameters, plan: EmbeddingPlan):
    if abs(p.period - plan.P) > 1e-12 * max(1.0, plan.P):
        raise ValueError(f"profile period {p.period:.6g} does not match plan period "
                         f"{plan.P:.6g}")
    if not plan.ring_exact:
        raise ValueError(f"plan is not ring-exact (closure defect "
                         f"{plan.closure_defect:.3e})")
    if abs(params.q - plan.q) > 1e-12:
        raise ValueError(f"wave q = {params.q:.12g} does not match plan q = "
                         f"{plan.q:.12g}")
