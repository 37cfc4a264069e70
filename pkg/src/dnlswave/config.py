"""Run configuration: a strict, validated key-value document.

Configs are YAML (or JSON) with the sections below; unknown keys are
rejected so typos fail loudly before any computation starts.

    lattice:       N, N_c (optional), kappa: [..]
    nonlinearity:  kind (cubic|saturable|power), sigma, a, b
    wave:          q | m | (r, s), omega, M_wraps, modes, power_budget
    solver:        theta, petviashvili, gamma, max_iter, tol_step,
                   tol_residual, trivial_floor, on_resonance,
                   seed, seed_perturbation, seed_mode
    simulate:      T, dt, sample_every
    sweep:         q: [..], omega: [..]
    output:        directory, formats: [csv, json]

The Bloch phase may be given directly (q), as a ring winding number (m,
paired with lattice.N: q = 2 pi m / N), or as rational data (r, s: q = r/s);
explicit q wins over m, which wins over (r, s).  The resolved source is
recorded in every artifact.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from math import gcd

import numpy as np
import yaml

from .embedding import EmbeddingPlan, plan_commensurate
from .lattice import LatticeConfig, Nonlinearity
from .solver import SolverOptions
from .spectral import WaveParameters


class ConfigError(ValueError):
    """Malformed or out-of-range configuration."""


_SCHEMA = {
    "lattice": {"N", "N_c", "kappa"},
    "nonlinearity": {"kind", "sigma", "a", "b"},
    "wave": {"q", "m", "r", "s", "omega", "M_wraps", "modes", "power_budget"},
    "solver": {"theta", "petviashvili", "gamma", "max_iter", "tol_step",
               "tol_residual", "trivial_floor", "on_resonance", "seed",
               "seed_perturbation", "seed_mode"},
    "simulate": {"T", "dt", "sample_every"},
    "sweep": {"q", "omega"},
    "output": {"directory", "formats"},
}

DEFAULT_OUTPUT_ENV = "DNLSWAVE_OUT"


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration resolved into library objects."""

    lattice: LatticeConfig
    nonlinearity: Nonlinearity
    wave: WaveParameters
    q_source: str
    M_wraps: int
    modes: int
    power_budget: float
    solver: SolverOptions
    seed_kind: str
    seed_perturbation: float
    seed_mode: int
    simulate_T: float
    simulate_dt: float
    sample_every: int
    sweep_q: tuple
    sweep_omega: tuple
    output_dir: str
    formats: tuple
    raw: dict   # effective document (after overrides), sans output section

    @property
    def period(self) -> float:
        """Envelope period: N / M_wraps for winding-specified waves, else 2 pi."""
        if self.q_source == "winding":
            return self.lattice.N / self.M_wraps
        return 2.0 * np.pi

    def plan(self) -> EmbeddingPlan:
        if self.q_source != "winding":
            raise ConfigError("ring embedding requires the wave phase to be given "
                              "as a winding number m (wave.m)")
        return plan_commensurate(self.raw["wave"]["m"], self.M_wraps, self.lattice.N)


def load_document(path: str) -> dict:
    """Read a YAML or JSON config file into a plain dict."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            if path.endswith(".json"):
                doc = json.load(fh)
            else:
                doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping of sections")
    return doc


def build_config(doc: dict, overrides: dict | None = None) -> RunConfig:
    """Validate a raw document (strict keys, numeric ranges) and resolve objects.

    `overrides` may carry q / omega / out values from the command line; they
    are merged into the document before validation, so the effective config
    embedded in artifacts reflects them.
    """
    doc = {k: (dict(v) if isinstance(v, dict) else v) for k, v in doc.items()}
    overrides = overrides or {}
    if overrides.get("q") is not None:
        doc.setdefault("wave", {})["q"] = float(overrides["q"])
        doc["wave"].pop("m", None)
        doc["wave"].pop("r", None)
        doc["wave"].pop("s", None)
    if overrides.get("omega") is not None:
        doc.setdefault("wave", {})["omega"] = float(overrides["omega"])
    if overrides.get("out") is not None:
        doc.setdefault("output", {})["directory"] = str(overrides["out"])

    _check_keys(doc)

    lat = doc.get("lattice") or {}
    if "N" not in lat or "kappa" not in lat:
        raise ConfigError("lattice section must provide N and kappa")
    kappa = lat["kappa"]
    if not isinstance(kappa, (list, tuple)) or not kappa:
        raise ConfigError("lattice.kappa must be a nonempty list")
    try:
        lattice = LatticeConfig(N=int(lat["N"]), kappa=tuple(float(k) for k in kappa),
                                Nc=int(lat["N_c"]) if "N_c" in lat else None)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid lattice section: {exc}") from exc

    nl = _build_nonlinearity(doc.get("nonlinearity") or {})

    wave = doc.get("wave") or {}
    if "omega" not in wave:
        raise ConfigError("wave.omega is required")
    omega = _as_float(wave["omega"], "wave.omega")
    M_wraps = int(wave.get("M_wraps", 1))
    modes = int(wave.get("modes", 128))
    power_budget = _as_float(wave.get("power_budget", 1.0), "wave.power_budget")
    if power_budget < 0:
        raise ConfigError("wave.power_budget must be nonnegative")

    q, q_source, rational = _resolve_q(wave, lattice, M_wraps)
    try:
        params = WaveParameters(q=q, omega=omega, rational=rational)
    except ValueError as exc:
        raise ConfigError(f"invalid wave parameters: {exc}") from exc

    sol = doc.get("solver") or {}
    try:
        solver = SolverOptions(
            theta=_as_float(sol.get("theta", 0.5), "solver.theta"),
            petviashvili=bool(sol.get("petviashvili", True)),
            petviashvili_gamma=(None if sol.get("gamma") is None
                                else _as_float(sol["gamma"], "solver.gamma")),
            max_iter=int(sol.get("max_iter", 10_000)),
            tol_step=_as_float(sol.get("tol_step", 1e-12), "solver.tol_step"),
            tol_residual=_as_float(sol.get("tol_residual", 1e-10), "solver.tol_residual"),
            trivial_floor=_as_float(sol.get("trivial_floor", 1e-8), "solver.trivial_floor"),
            on_resonance=str(sol.get("on_resonance", "error")),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid solver section: {exc}") from exc
    seed_kind = str(sol.get("seed", "dispersion"))
    if seed_kind not in ("dispersion", "zero"):
        raise ConfigError("solver.seed must be 'dispersion' or 'zero'")
    seed_perturbation = _as_float(sol.get("seed_perturbation", 0.1),
                                  "solver.seed_perturbation")
    seed_mode = int(sol.get("seed_mode", 1))

    sim = doc.get("simulate") or {}
    simulate_T = _as_float(sim.get("T", 10.0), "simulate.T")
    simulate_dt = _as_float(sim.get("dt", 1e-3), "simulate.dt")
    sample_every = int(sim.get("sample_every", 10))
    if simulate_T <= 0 or simulate_dt <= 0 or sample_every < 1:
        raise ConfigError("simulate section requires T > 0, dt > 0, sample_every >= 1")

    sweep = doc.get("sweep") or {}
    sweep_q = tuple(float(v) for v in sweep.get("q", ()))
    sweep_omega = tuple(float(v) for v in sweep.get("omega", ()))
    if any(not 0.0 < v < 1.0 for v in sweep_q):
        raise ConfigError("sweep.q values must lie in (0, 1)")
    if any(v == 0.0 for v in sweep_omega):
        raise ConfigError("sweep.omega values must be nonzero")

    out = doc.get("output") or {}
    output_dir = str(out.get("directory",
                             os.environ.get(DEFAULT_OUTPUT_ENV, "out")))
    formats = tuple(out.get("formats", ("csv", "json")))
    if not set(formats) <= {"csv", "json"} or not formats:
        raise ConfigError("output.formats must be a nonempty subset of {csv, json}")

    if (modes & (modes - 1)) or modes < 8:
        raise ConfigError("wave.modes must be a power of two, at least 8")
    if M_wraps < 1:
        raise ConfigError("wave.M_wraps must be a positive integer")
    if q_source == "winding" and lattice.N % M_wraps:
        raise ConfigError("wave.M_wraps must divide lattice.N")

    effective = {k: v for k, v in doc.items() if k != "output" and v}
    return RunConfig(lattice=lattice, nonlinearity=nl, wave=params, q_source=q_source,
                     M_wraps=M_wraps, modes=modes, power_budget=power_budget,
                     solver=solver, seed_kind=seed_kind,
                     seed_perturbation=seed_perturbation, seed_mode=seed_mode,
                     simulate_T=simulate_T, simulate_dt=simulate_dt,
                     sample_every=sample_every, sweep_q=sweep_q,
                     sweep_omega=sweep_omega, output_dir=output_dir,
                     formats=formats, raw=effective)


def _check_keys(doc: dict):
    unknown_sections = set(doc) - set(_SCHEMA)
    if unknown_sections:
        raise ConfigError(f"unknown config sections: {sorted(unknown_sections)}")
    for section, body in doc.items():
        if body is None:
            continue
        if not isinstance(body, dict):
            raise ConfigError(f"section '{section}' must be a mapping")
        unknown = set(body) - _SCHEMA[section]
        if unknown:
            raise ConfigError(f"unknown keys in '{section}': {sorted(unknown)}")


def _build_nonlinearity(section: dict) -> Nonlinearity:
    kind = str(section.get("kind", "cubic"))
    if kind == "cubic":
        nl = Nonlinearity.cubic()
    elif kind == "saturable":
        nl = Nonlinearity.saturable()
    elif kind == "power":
        if "sigma" not in section:
            raise ConfigError("power nonlinearity requires nonlinearity.sigma")
        nl = Nonlinearity.power(_as_float(section["sigma"], "nonlinearity.sigma"))
    else:
        raise ConfigError(f"unknown nonlinearity kind '{kind}'")
    a = section.get("a")
    b = section.get("b")
    if a is not None or b is not None:
        nl = Nonlinearity(kind=nl.kind, F=nl.F, G=nl.G,
                          a=_as_float(a, "nonlinearity.a") if a is not None else nl.a,
                          b=_as_float(b, "nonlinearity.b") if b is not None else nl.b)
    return nl


def _resolve_q(wave: dict, lattice: LatticeConfig, M_wraps: int) -> tuple:
    """Apply the precedence explicit q > winding m > rational (r, s)."""
    if "q" in wave:
        return _as_float(wave["q"], "wave.q"), "explicit", None
    if "m" in wave:
        m = int(wave["m"])
        if m < 1:
            raise ConfigError("wave.m must be a positive integer")
        return 2.0 * np.pi * m / lattice.N, "winding", None
    if "r" in wave or "s" in wave:
        if not ("r" in wave and "s" in wave):
            raise ConfigError("rational wave data needs both wave.r and wave.s")
        r, s = int(wave["r"]), int(wave["s"])
        if not (0 < r < s) or gcd(r, s) != 1:
            raise ConfigError("wave.r, wave.s must be coprime with 0 < r < s")
        return r / s, "rational", (r, s)
    raise ConfigError("wave section must provide q, m, or (r, s)")


def _as_float(value, name: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be a number, got {value!r}") from exc
