"""Periodic travelling waves of general discrete NLS equations on rings.

The package splits into a model layer (lattice), the spectral machinery for
periodic envelopes (spectral), the existence condition and its constants
(existence), the fixed-point solver (solver), ring embedding (embedding) and
dynamical verification (dynamics).  A small CLI (cli) wires these together
from a YAML/JSON configuration document.
"""

from .dynamics import BlowUpError, SimulationResult, integrate, rk4_step
from .embedding import (EmbeddingPlan, ansatz_derivative, embed,
                        lattice_equation_defect, minimal_period_report,
                        plan_commensurate, translation_error)
from .existence import (BoundsCheck, HypothesisReport, ResonanceScan,
                        apriori_bounds_check, hypothesis_check, resonance_scan)
from .lattice import (LatticeConfig, LatticeState, Nonlinearity, energy, eval_rhs,
                      plane_wave_frequency, plane_wave_state, power)
from .solver import (MaxIterExceeded, SolveResult, SolverOptions,
                     amplitude_from_dispersion, apply_N, apply_T, residual, solve)
from .spectral import (BandInfo, BandViolation, EPS_RESONANCE, Profile,
                       ResonanceError, WaveParameters, apply_M, apply_M_inverse,
                       band_range, g_eval, inverse_norm_estimate, multiplier_nu,
                       profile_norms, q_tilde, shifted_difference)

__version__ = "0.1.0"

__all__ = [
    "BandInfo", "BandViolation", "BlowUpError", "BoundsCheck", "EPS_RESONANCE",
    "EmbeddingPlan", "HypothesisReport", "LatticeConfig", "LatticeState",
    "MaxIterExceeded", "Nonlinearity", "Profile", "ResonanceError",
    "ResonanceScan", "SimulationResult", "SolveResult", "SolverOptions",
    "WaveParameters", "amplitude_from_dispersion", "ansatz_derivative",
    "apply_M", "apply_M_inverse", "apply_N", "apply_T", "apriori_bounds_check",
    "band_range", "embed", "energy", "eval_rhs", "g_eval", "hypothesis_check",
    "integrate", "inverse_norm_estimate", "lattice_equation_defect",
    "minimal_period_report", "multiplier_nu", "plan_commensurate",
    "plane_wave_frequency", "plane_wave_state", "power", "profile_norms",
    "q_tilde", "residual", "resonance_scan", "rk4_step", "shifted_difference",
    "solve", "translation_error",
]
