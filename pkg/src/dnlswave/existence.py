"""Existence condition for nonzero periodic travelling waves, and a priori bounds.

Nonzero travelling waves with Bloch phase q and power budget P exist whenever
the frequency clears the phonon band with a nonlinearity-dependent margin:

    |omega| >= R * (1 + p * a(1+P^b) / (R(1+q) + 4 kappa_bar + a(1+P^b))),

with p = q_tilde + 1/(1-q).  Frequencies satisfying this lie strictly outside
the band [-R, R], so every multiplier nu_l = (q+l)(omega + g((q+l)/2)) is
nonzero and the fixed-point construction goes through.  This module evaluates
all constants of that condition, scans multipliers for resonances (with an
analytic tail certificate), and checks the a priori solution bounds

    max |Phi|  <= P^(1/2),
    max |Phi'| <= (q + (4 kappa_bar + a(1+P^b)) / R) * P^(1/2).

The threshold formula is meaningful for kappa_bar >= 0 (nonnegative net
coupling); for kappa_bar < 0 the denominator may change sign and the literal
value is reported without interpretation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .lattice import LatticeConfig, Nonlinearity
from .spectral import (Profile, WaveParameters, _multipliers, band_range,
                       profile_norms, q_tilde)


@dataclass(frozen=True)
class HypothesisReport:
    """All constants of the existence condition for one parameter set."""

    kappa_bar: float
    q_tilde: float
    p: float
    R: float
    power_budget: float
    threshold: float
    satisfied: bool
    margin: float


def hypothesis_check(params: WaveParameters, config: LatticeConfig, nl: Nonlinearity,
                     power_budget: float) -> HypothesisReport:
    """Evaluate the frequency threshold and whether |omega| clears it."""
    if power_budget < 0:
        raise ValueError("power budget must be nonnegative")
    R = band_range(config).R
    qt = q_tilde(params.q)
    p = qt + 1.0 / (1.0 - params.q)
    growth = nl.a * (1.0 + power_budget ** nl.b)
    denom = R * (1.0 + params.q) + 4.0 * config.kappa_bar + growth
    threshold = R * (1.0 + p * growth / denom) if R > 0.0 else 0.0
    margin = abs(params.omega) - threshold
    return HypothesisReport(kappa_bar=config.kappa_bar, q_tilde=qt, p=p, R=R,
                            power_budget=float(power_budget), threshold=threshold,
                            satisfied=bool(margin >= 0.0), margin=margin)


class BoundsCheck(NamedTuple):
    c0_ok: bool
    c1_ok: bool
    slack: tuple


def apriori_bounds_check(p: Profile, params: WaveParameters, config: LatticeConfig,
                         nl: Nonlinearity, power_budget: float) -> BoundsCheck:
    """Check the sup-norm bounds on Phi and Phi' against a power budget.

    Returns per-bound booleans and slacks (bound minus attained value).
    """
    R = band_range(config).R
    if R == 0.0:
        raise ValueError("a priori bounds are undefined for zero band radius")
    c0, c1 = profile_norms(p)
    sqp = np.sqrt(power_budget)
    growth = nl.a * (1.0 + power_budget ** nl.b)
    c0_bound = sqp
    c1_bound = (params.q + (4.0 * config.kappa_bar + growth) / R) * sqp
    deriv_max = c1 - c0
    return BoundsCheck(c0_ok=bool(c0 <= c0_bound), c1_ok=bool(deriv_max <= c1_bound),
                       slack=(c0_bound - c0, c1_bound - deriv_max))


class ResonanceScan(NamedTuple):
    min_abs_nu: float
    argmin: int
    tail_index: int
    certified: bool


def resonance_scan(params: WaveParameters, config: LatticeConfig, L_max: int = 10_000,
                   period: float = 2.0 * np.pi) -> ResonanceScan:
    """Minimum multiplier magnitude over |l| <= L_max, with a tail certificate.

    Since |nu_l| >= |omega| |q + lam_l| - 4 sum|kappa_j|, every index beyond

        tail_index = smallest L with |omega| (2 pi L / P - q) - 4 sum|kappa_j|
                     > min_abs_nu

    has a multiplier strictly larger than the scanned minimum; the scan range
    is exhaustive iff tail_index <= L_max (`certified`).
    """
    ls = np.arange(-L_max, L_max + 1)
    nus = _multipliers(2.0 * np.pi * ls / period, params, config)
    absnu = np.abs(nus)
    min_abs = float(absnu.min())
    ties = ls[absnu == min_abs]
    argmin = int(ties[np.argmin(np.abs(ties))])   # smallest |l| on exact ties
    kap_abs = 4.0 * float(np.sum(np.abs(config.kappa)))
    # first L with |omega| (2 pi L / P - q) - kap_abs > min_abs
    L_tail = int(np.floor((period / (2.0 * np.pi))
                          * (params.q + (min_abs + kap_abs) / abs(params.omega)))) + 1
    return ResonanceScan(min_abs_nu=min_abs, argmin=argmin,
                         tail_index=L_tail, certified=bool(L_tail <= L_max))
