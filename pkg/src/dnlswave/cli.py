"""Command-line front end: band, check, solve, simulate, sweep.

Every command takes a config document plus optional --q / --omega / --out
overrides and writes deterministic CSV/JSON artifacts:

    band      g(x) samples CSV + band info JSON
    check     existence-condition report JSON
    solve     envelope CSV (u, re_phi, im_phi) + solve summary JSON
    simulate  solve, embed on the ring, integrate; diagnostics CSV
              (t, power, energy, translation_error) + summary JSON
    sweep     one row per (q, omega) grid point:
              q, omega, converged, trivial, residual, margin

Exit codes: 0 success, 1 invalid config, 2 solver non-convergence,
3 resonant parameters, 4 simulation blow-up.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from . import artifacts
from .config import ConfigError, RunConfig, build_config, load_document
from .dynamics import BlowUpError, integrate
from .embedding import embed, lattice_equation_defect
from .existence import hypothesis_check
from .solver import MaxIterExceeded, SolveResult, amplitude_from_dispersion, solve
from .spectral import (Profile, ResonanceError, WaveParameters, band_range, g_eval,
                       profile_norms)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NO_CONVERGENCE = 2
EXIT_RESONANCE = 3
EXIT_BLOWUP = 4


def run_command(argv) -> int:
    """Entry point used by tests and the console script; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return EXIT_CONFIG
    try:
        doc = load_document(args.config)
        cfg = build_config(doc, overrides={"q": args.q, "omega": args.omega,
                                           "out": args.out})
        paths = _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MaxIterExceeded as exc:
        print(f"error: solver did not converge: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except ResonanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESONANCE
    except BlowUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    for p in paths:
        print(p)
    return EXIT_OK


def main():
    sys.exit(run_command(sys.argv[1:]))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dnlswave",
                                     description="travelling waves on DNLS rings")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("band", "check", "solve", "simulate", "sweep"):
        sp = sub.add_parser(name)
        sp.add_argument("config", help="YAML or JSON config document")
        sp.add_argument("--q", type=float, default=None, help="override wave.q")
        sp.add_argument("--omega", type=float, default=None, help="override wave.omega")
        sp.add_argument("--out", default=None, help="override output.directory")
    return parser


# -- workflows -------------------------------------------------------------

def _cmd_band(cfg: RunConfig):
    info = band_range(cfg.lattice)
    paths = []
    if "csv" in cfg.formats:
        x_hi = max(4.0 * np.pi, 3.0 * info.x_star)
        xs = np.linspace(x_hi / 2000.0, x_hi, 2000)
        rows = zip(xs.tolist(), np.atleast_1d(g_eval(xs, cfg.lattice)).tolist())
        paths.append(artifacts.emit_csv("band", ["x", "g"], rows, cfg.raw,
                                        cfg.output_dir))
    if "json" in cfg.formats:
        paths.append(artifacts.emit_json("band", {
            "R": info.R, "x_star": info.x_star, "band": list(info.band),
        }, cfg.raw, cfg.output_dir))
    return paths


def _cmd_check(cfg: RunConfig):
    report = hypothesis_check(cfg.wave, cfg.lattice, cfg.nonlinearity,
                              cfg.power_budget)
    payload = {
        "q": cfg.wave.q, "q_source": cfg.q_source, "omega": cfg.wave.omega,
        "kappa_bar": report.kappa_bar, "q_tilde": report.q_tilde, "p": report.p,
        "R": report.R, "power_budget": report.power_budget,
        "threshold": report.threshold, "satisfied": report.satisfied,
        "margin": report.margin,
    }
    return [artifacts.emit_json("check", payload, cfg.raw, cfg.output_dir)]


def _make_seed(cfg: RunConfig) -> Profile:
    period = cfg.period
    if cfg.seed_kind == "zero":
        return Profile.zero(cfg.modes, period)
    A = amplitude_from_dispersion(cfg.wave, cfg.lattice, cfg.nonlinearity)
    if A is None or A == 0.0:
        A = 1.0   # no constant branch: start from unit amplitude
    u = np.arange(cfg.modes) * period / cfg.modes
    if cfg.seed_mode == 0:
        values = A * (1.0 + cfg.seed_perturbation) * np.ones(cfg.modes)
    else:
        values = A * (1.0 + cfg.seed_perturbation
                      * np.cos(2.0 * np.pi * cfg.seed_mode * u / period))
    return Profile.from_samples(values.astype(complex), period)


def _run_solve(cfg: RunConfig) -> SolveResult:
    return solve(_make_seed(cfg), cfg.wave, cfg.lattice, cfg.nonlinearity, cfg.solver)


def _cmd_solve(cfg: RunConfig):
    result = _run_solve(cfg)
    return _emit_solve(cfg, result)


def _emit_solve(cfg: RunConfig, result: SolveResult):
    c0, c1 = profile_norms(result.profile)
    paths = []
    if "csv" in cfg.formats:
        p = result.profile
        rows = zip(p.grid.tolist(), p.samples.real.tolist(), p.samples.imag.tolist())
        paths.append(artifacts.emit_csv("solve", ["u", "re_phi", "im_phi"], rows,
                                        cfg.raw, cfg.output_dir, stem="profile"))
    if "json" in cfg.formats:
        paths.append(artifacts.emit_json("solve", {
            "q": cfg.wave.q, "q_source": cfg.q_source, "omega": cfg.wave.omega,
            "period": result.profile.period, "modes": result.profile.M,
            "iterations": result.iterations, "residual_sup": result.residual_sup,
            "step_last": result.step_last, "converged": result.converged,
            "trivial": result.trivial, "c0": c0, "c1": c1,
            "dropped_modes": list(result.dropped_modes),
        }, cfg.raw, cfg.output_dir))
    return paths


def _cmd_simulate(cfg: RunConfig):
    plan = cfg.plan()
    result = _run_solve(cfg)
    prof = result.profile
    state0 = embed(prof, cfg.wave, plan, t=0.0)
    traj = integrate(state0, cfg.lattice, cfg.nonlinearity, T=cfg.simulate_T,
                     dt=cfg.simulate_dt, sample_every=cfg.sample_every)
    trans = [float(np.max(np.abs(st.psi - embed(prof, cfg.wave, plan, float(t)).psi)))
             for t, st in zip(traj.times, traj.states)]
    paths = []
    if "csv" in cfg.formats:
        rows = zip(traj.times.tolist(), traj.power_series.tolist(),
                   traj.energy_series.tolist(), trans)
        paths.append(artifacts.emit_csv("simulate",
                                        ["t", "power", "energy", "translation_error"],
                                        rows, cfg.raw, cfg.output_dir,
                                        stem="diagnostics"))
    if "json" in cfg.formats:
        p0, e0 = traj.power_series[0], traj.energy_series[0]
        paths.append(artifacts.emit_json("simulate", {
            "q": cfg.wave.q, "omega": cfg.wave.omega, "N": plan.N,
            "M_wraps": plan.M_wraps, "closure_defect": plan.closure_defect,
            "residual_sup": result.residual_sup, "converged": result.converged,
            "trivial": result.trivial,
            "equation_defect": lattice_equation_defect(
                prof, cfg.wave, cfg.lattice, cfg.nonlinearity, plan),
            "power_drift": float(np.max(np.abs(traj.power_series - p0))
                                 / max(p0, 1e-30)),
            "energy_drift": float(np.max(np.abs(traj.energy_series - e0))
                                  / max(abs(e0), 1.0)),
            "translation_error": max(trans),
        }, cfg.raw, cfg.output_dir))
    return paths


def _cmd_sweep(cfg: RunConfig):
    if not cfg.sweep_q or not cfg.sweep_omega:
        raise ConfigError("sweep requires nonempty sweep.q and sweep.omega lists")
    rows = []
    for q in cfg.sweep_q:
        for omega in cfg.sweep_omega:
            rows.append(_sweep_point(cfg, q, omega))
    paths = []
    if "csv" in cfg.formats:
        paths.append(artifacts.emit_csv(
            "sweep", ["q", "omega", "converged", "trivial", "residual", "margin"],
            rows, cfg.raw, cfg.output_dir))
    if "json" in cfg.formats:
        paths.append(artifacts.emit_json("sweep", {"points": len(rows)},
                                         cfg.raw, cfg.output_dir))
    return paths


def _sweep_point(cfg: RunConfig, q: float, omega: float):
    params = WaveParameters(q=q, omega=omega)
    margin = hypothesis_check(params, cfg.lattice, cfg.nonlinearity,
                              cfg.power_budget).margin
    point_cfg = dataclasses.replace(cfg, wave=params, q_source="explicit")
    try:
        res = solve(_make_seed(point_cfg), params, cfg.lattice, cfg.nonlinearity,
                    cfg.solver)
        return (q, omega, res.converged, res.trivial, res.residual_sup, margin)
    except MaxIterExceeded as exc:
        res = exc.result
        return (q, omega, False, res.trivial, res.residual_sup, margin)
    except ResonanceError:
        return (q, omega, False, False, float("nan"), margin)


_COMMANDS = {
    "band": _cmd_band,
    "check": _cmd_check,
    "solve": _cmd_solve,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
}
