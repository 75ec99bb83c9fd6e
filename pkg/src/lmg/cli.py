"""Command-line entry points.

Every run is driven by a JSON config file (schema below), optionally patched
by repeatable ``--override key.path=value`` flags, and writes its outputs into
``--out`` (default: current directory).  Each emitted file carries a header
with the sha256 hash of the run report, and identical configs produce
bit-identical files.

Commands and their config blocks:

  spectrum         model, grid        -> spectrum.csv
  susy-check       model              -> susy.json
  evolve           model, schedule, evolution -> trajectory.csv, report JSON
  gap-bound        model, bounds      -> gap_bounds.csv
  iontrap-compare  model (iontrap), schedule, evolution, compare
                                      -> compare.csv, report JSON
  scan             model, scan        -> scan.csv

The model block carries either a direct collective-spin parameter set
(``"source": "lmg"``: xi, lam, mu, J) or trapped-ion parameters
(``"source": "iontrap"``: nu, eta, delta, N, n_max) that are mapped onto the
effective model where one is needed.

Exit codes: 0 success, 2 config error, 3 numerical-validity error,
4 phonon-cutoff overflow.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .adiabatic import (
    DEFAULT_NORM_DT,
    DEFAULT_WINDOW_FACTOR,
    PulseSchedule,
    adiabaticity_scan,
    run_lmg_transfer,
    transfer_efficiency,
)
from .errors import ConfigError, CutoffOverflowError, LmgError
from .gapbounds import beta_estimate, interlacing_check, iterated_gap_bound
from .iontrap import IonTrapParams, compare_effective, effective_params
from .model import (
    LMGParams,
    build_hamiltonian,
    classify_case,
    spectrum,
    susy_ground_energy,
    susy_ground_state,
    susy_residual,
)

_FMT = "%.17g"


# ---------------------------------------------------------------- config


def _check_keys(block: dict, allowed, where: str):
    unknown = set(block) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}; allowed: {sorted(allowed)}")


def _require(block: dict, keys, where: str):
    missing = [k for k in keys if k not in block]
    if missing:
        raise ConfigError(f"missing key(s) {missing} in {where}")


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("top-level config must be a JSON object")
    return cfg


def apply_overrides(cfg: dict, overrides) -> dict:
    """Patch dotted paths; values are parsed as JSON, falling back to strings."""
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key.path=value")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = cfg
        parts = key.split(".")
        for p in parts[:-1]:
            nxt = node.setdefault(p, {})
            if not isinstance(nxt, dict):
                raise ConfigError(f"override path {key!r} descends through a non-object")
            node = nxt
        node[parts[-1]] = value
    return cfg


def _model_block(cfg: dict):
    """Returns ("lmg", LMGParams) or ("iontrap", IonTrapParams)."""
    _require(cfg, ["model"], "config")
    block = cfg["model"]
    if not isinstance(block, dict):
        raise ConfigError("model block must be an object")
    source = block.get("source", "lmg")
    try:
        if source == "lmg":
            _check_keys(block, {"source", "xi", "lam", "mu", "J"}, "model")
            _require(block, ["xi", "lam", "J"], "model")
            return "lmg", LMGParams(float(block["xi"]), float(block["lam"]),
                                    float(block.get("mu", 0.0)), 1.0, 1.0,
                                    float(block["J"]))
        if source == "iontrap":
            _check_keys(block, {"source", "nu", "eta", "delta", "N", "n_max"}, "model")
            _require(block, ["nu", "eta", "delta", "N"], "model")
            return "iontrap", IonTrapParams(float(block["nu"]), float(block["eta"]),
                                            float(block["delta"]), int(block["N"]),
                                            int(block.get("n_max", 6)))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, LmgError):
            raise
        raise ConfigError(f"bad model block: {exc}") from exc
    raise ConfigError(f"model source must be 'lmg' or 'iontrap', got {source!r}")


def _effective_lmg(cfg: dict) -> LMGParams:
    kind, params = _model_block(cfg)
    if kind == "iontrap":
        return effective_params(params, 1.0, 1.0)
    return params


def _schedule_block(cfg: dict) -> PulseSchedule:
    _require(cfg, ["schedule"], "config")
    block = cfg["schedule"]
    _check_keys(block, {"alpha", "T1", "T2"}, "schedule")
    _require(block, ["alpha", "T1", "T2"], "schedule")
    return PulseSchedule(float(block["alpha"]), float(block["T1"]), float(block["T2"]))


_EVOLUTION_DEFAULTS = {"norm_dt": DEFAULT_NORM_DT, "window_factor": DEFAULT_WINDOW_FACTOR,
                       "record_stride": None}


def _evolution_block(cfg: dict) -> dict:
    block = dict(cfg.get("evolution", {}))
    _check_keys(block, _EVOLUTION_DEFAULTS, "evolution")
    out = dict(_EVOLUTION_DEFAULTS)
    out.update(block)
    return out


# ---------------------------------------------------------------- output


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating, float)):
        f = float(x)
        return None if not math.isfinite(f) else f
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def make_report(cfg: dict, defaults: dict, results: dict) -> dict:
    report = {
        "library": "lmg-adiabatic",
        "version": __version__,
        "config": _jsonable(cfg),
        "defaults_used": _jsonable(defaults),
        "results": _jsonable(results),
    }
    report["report_hash"] = hashlib.sha256(_canonical_json(report).encode()).hexdigest()
    return report


def write_report(path: str, report: dict):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, sort_keys=True, indent=2, allow_nan=False)
        fh.write("\n")


def write_csv(path: str, report_hash: str, columns, rows):
    """17-significant-digit CSV, comma delimiter, LF endings, '#' header."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# lmg-adiabatic {__version__}\n")
        fh.write(f"# report_hash: {report_hash}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_FMT % v if isinstance(v, (float, np.floating))
                              else str(v) for v in row) + "\n")


def _out_path(out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


# ---------------------------------------------------------------- commands


def cmd_spectrum(cfg: dict, out_dir: str) -> dict:
    p = _effective_lmg(cfg)
    grid_block = dict(cfg.get("grid", {}))
    _check_keys(grid_block, {"points", "ratio_min", "ratio_max"}, "grid")
    npts = int(grid_block.get("points", 101))
    lo = float(grid_block.get("ratio_min", 0.0))
    hi = float(grid_block.get("ratio_max", 1.0))
    if npts < 2 or not lo < hi:
        raise ConfigError("grid needs points >= 2 and ratio_min < ratio_max")
    ratios = np.linspace(lo, hi, npts)
    rows = []
    for r in ratios:
        q = dataclasses.replace(p, chi1=r * p.chi2)
        vals = np.linalg.eigvalsh(build_hamiltonian(q).mat)
        rows.append([float(r)] + [float(v) for v in vals])
    dim = len(rows[0]) - 1
    results = {"levels": dim, "ratio_points": npts,
               "first_row": rows[0], "last_row": rows[-1]}
    report = make_report(cfg, {"grid": [lo, hi, npts]}, results)
    cols = ["chi_ratio"] + [f"E_{k}" for k in range(dim)]
    write_csv(_out_path(out_dir, "spectrum.csv"), report["report_hash"], cols, rows)
    write_report(_out_path(out_dir, "report.json"), report)
    print(f"spectrum: {npts} ratio points, {dim} levels -> spectrum.csv")
    return report


def cmd_susy_check(cfg: dict, out_dir: str) -> dict:
    p = _effective_lmg(cfg)
    block = dict(cfg.get("susy", {}))
    _check_keys(block, {"chi1", "chi2", "mu_values"}, "susy")
    chi1 = float(block.get("chi1", 0.5))
    chi2 = float(block.get("chi2", 1.0))
    mu_values = block.get("mu_values", [p.mu])
    rows = []
    for mu in mu_values:
        q = dataclasses.replace(p, lam=1.0, mu=float(mu), chi1=chi1, chi2=chi2)
        psi = susy_ground_state(q)
        res = susy_residual(q, psi)
        e_pred = susy_ground_energy(q)
        vals, vecs = np.linalg.eigh(build_hamiltonian(q).mat)
        fid = float(np.abs(np.vdot(vecs[:, 0], psi.amplitudes)) ** 2)
        rows.append({"mu": float(mu), "residual": res, "energy_predicted": e_pred,
                     "energy_exact": float(vals[0]), "fidelity": fid})
    report = make_report(cfg, {"lam": 1.0, "chi1": chi1, "chi2": chi2}, {"checks": rows})
    write_report(_out_path(out_dir, "susy.json"), report)
    worst = max(r["residual"] for r in rows)
    print(f"susy-check: {len(rows)} mu values, worst residual {worst:.3e} -> susy.json")
    return report


def cmd_evolve(cfg: dict, out_dir: str) -> dict:
    p = _effective_lmg(cfg)
    schedule = _schedule_block(cfg)
    evo = _evolution_block(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        traj, case, tgt = run_lmg_transfer(
            p.xi, p.lam, p.mu, p.J, schedule,
            norm_dt=evo["norm_dt"],
            record_stride=evo["record_stride"],
            window_factor=evo["window_factor"])
    eff = transfer_efficiency(traj, tgt)
    results = {
        "case": case.label,
        "initial_m": case.initial_m,
        "final_target_population": eff,
        "final_populations": traj.populations[-1],
        "dt": traj.metadata["dt"],
        "n_steps": traj.metadata["n_steps"],
        "norm_drift": traj.metadata["norm_drift"],
        "window": [traj.metadata["t_start"], traj.metadata["t_end"]],
        "propagator": traj.metadata["propagator"],
        "population_basis": "y",
    }
    report = make_report(cfg, {"evolution": evo}, results)
    dim = traj.populations.shape[1]
    m_vals = np.arange(dim) - (dim - 1) / 2.0
    cols = (["t"] + [f"pop_my_{m:g}" for m in m_vals] + ["gap", "fidelity"])
    rows = [[traj.times[i]] + list(traj.populations[i]) + [traj.gaps[i], traj.fidelity[i]]
            for i in range(len(traj.times))]
    write_csv(_out_path(out_dir, "trajectory.csv"), report["report_hash"], cols, rows)
    write_report(_out_path(out_dir, "report.json"), report)
    print(f"evolve: case ({case.label}), final target population {eff:.6f} -> trajectory.csv")
    return report


def cmd_gap_bound(cfg: dict, out_dir: str) -> dict:
    p = _effective_lmg(cfg)
    block = dict(cfg.get("bounds", {}))
    _check_keys(block, {"N_values", "chi_ratio", "beta", "grid"}, "bounds")
    n_values = [int(n) for n in block.get("N_values", [p.N])]
    ratio = float(block.get("chi_ratio", 0.5))
    rows, cols = [], ["N", "mean_h", "var_h", "temple_bound", "A",
                      "iterated_bound", "exact_gap", "exact_ratio", "valid",
                      "interlacing_margin"]
    for n in n_values:
        q = dataclasses.replace(p, J=n / 2.0, mu=0.0, chi1=ratio * p.chi2)
        res = iterated_gap_bound(q)
        _, margin = interlacing_check(q)
        rows.append([res.N, res.mean_h, res.var_h, res.temple_bound, res.A,
                     res.iterated_bound, res.exact_gap, res.exact_ratio,
                     int(res.valid), margin])
    results = {"rows": [dict(zip(cols, r)) for r in rows]}
    if block.get("beta", False):
        beta_rows = beta_estimate(p.xi, p.lam, p.chi2, n_values,
                                  grid=int(block.get("grid", 201)))
        results["beta"] = beta_rows
    report = make_report(cfg, {"chi_ratio": ratio}, results)
    write_csv(_out_path(out_dir, "gap_bounds.csv"), report["report_hash"], cols, rows)
    write_report(_out_path(out_dir, "report.json"), report)
    n_valid = sum(r[-2] for r in rows)
    print(f"gap-bound: {len(rows)} N values, {n_valid} valid iterated bounds -> gap_bounds.csv")
    return report


def cmd_iontrap_compare(cfg: dict, out_dir: str) -> dict:
    kind, params = _model_block(cfg)
    if kind != "iontrap":
        raise ConfigError("iontrap-compare needs a model block with source 'iontrap'")
    schedule = _schedule_block(cfg)
    evo = _evolution_block(cfg)
    block = dict(cfg.get("compare", {}))
    _check_keys(block, {"coarse_periods", "norm_dt_effective"}, "compare")
    periods = int(block.get("coarse_periods", 3))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        comp = compare_effective(
            params, schedule, coarse_periods=periods,
            norm_dt=evo["norm_dt"],
            norm_dt_effective=float(block.get("norm_dt_effective", DEFAULT_NORM_DT)),
            window_factor=evo["window_factor"])
    results = {
        "rms": comp.rms,
        "coarse_window": comp.coarse_window,
        "effective_xi": comp.metadata["effective_xi"],
        "effective_lambda": comp.metadata["effective_lambda"],
        "cutoff_overflow": comp.metadata["cutoff_overflow"],
        "full_final_populations": comp.full_pops[-1],
        "effective_final_populations": comp.effective_pops[-1],
        "phonon_mean_max": float(np.max(comp.traj_full.metadata["phonon_mean"])),
    }
    report = make_report(cfg, {"evolution": evo, "coarse_periods": periods}, results)
    dim = comp.full_pops.shape[1]
    m_vals = np.arange(dim) - (dim - 1) / 2.0
    cols = (["t"] + [f"full_pop_my_{m:g}" for m in m_vals]
            + [f"eff_pop_my_{m:g}" for m in m_vals])
    rows = [[comp.times[i]] + list(comp.full_pops[i]) + list(comp.effective_pops[i])
            for i in range(len(comp.times))]
    write_csv(_out_path(out_dir, "compare.csv"), report["report_hash"], cols, rows)
    write_report(_out_path(out_dir, "report.json"), report)
    print(f"iontrap-compare: RMS deviation {comp.rms:.5f} "
          f"(coarse window {comp.coarse_window:.1f}) -> compare.csv")
    if comp.metadata["cutoff_overflow"]:
        raise CutoffOverflowError(
            "phonon population reached the Fock cutoff; results written but suspect")
    return report


def _scan_one(args):
    xi, lam, mu, J, alpha, t1, t2, norm_dt, window_factor = args
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows = adiabaticity_scan(xi, lam, mu, J, [PulseSchedule(alpha, t1, t2)],
                                 norm_dt=norm_dt, window_factor=window_factor)
    return rows[0]


def cmd_scan(cfg: dict, out_dir: str, threads: int = 1) -> dict:
    p = _effective_lmg(cfg)
    block = dict(cfg.get("scan", {}))
    _check_keys(block, {"schedules"}, "scan")
    _require(block, ["schedules"], "scan")
    sched_specs = block["schedules"]
    if not isinstance(sched_specs, list) or not sched_specs:
        raise ConfigError("scan.schedules must be a non-empty list of {alpha, T1, T2}")
    evo = _evolution_block(cfg)
    jobs = []
    for spec in sched_specs:
        _check_keys(spec, {"alpha", "T1", "T2"}, "scan.schedules[]")
        _require(spec, ["alpha", "T1", "T2"], "scan.schedules[]")
        jobs.append((p.xi, p.lam, p.mu, p.J, float(spec["alpha"]),
                     float(spec["T1"]), float(spec["T2"]),
                     evo["norm_dt"], evo["window_factor"]))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            scan_rows = list(pool.map(_scan_one, jobs))
    else:
        scan_rows = [_scan_one(j) for j in jobs]
    cols = ["alpha", "T", "chi1max_sqrtT", "chi2max_sqrtT", "efficiency"]
    rows = [[r[c] for c in cols] for r in scan_rows]
    report = make_report(cfg, {"evolution": evo, "threads": threads},
                         {"rows": scan_rows})
    write_csv(_out_path(out_dir, "scan.csv"), report["report_hash"], cols, rows)
    write_report(_out_path(out_dir, "report.json"), report)
    best = max(r["efficiency"] for r in scan_rows)
    print(f"scan: {len(rows)} schedules, best efficiency {best:.6f} -> scan.csv")
    return report


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "susy-check": cmd_susy_check,
    "evolve": cmd_evolve,
    "gap-bound": cmd_gap_bound,
    "iontrap-compare": cmd_iontrap_compare,
    "scan": cmd_scan,
}

_TOP_KEYS = {"command", "model", "schedule", "evolution", "grid", "susy",
             "bounds", "compare", "scan", "emit"}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lmg",
        description="Adiabatic entanglement generation in collective spin systems")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--override", action="append", default=[],
                        metavar="KEY.PATH=VALUE",
                        help="patch a config entry (repeatable; JSON-parsed value)")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        cfg = apply_overrides(cfg, args.override)
        _check_keys(cfg, _TOP_KEYS, "config")
        if "command" in cfg and cfg["command"] != args.command:
            raise ConfigError(
                f"config declares command {cfg['command']!r} but {args.command!r} was requested")
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.command == "scan":
            _COMMANDS["scan"](cfg, args.out, threads=args.threads)
        else:
            _COMMANDS[args.command](cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CutoffOverflowError as exc:
        print(f"cutoff overflow: {exc}", file=sys.stderr)
        return 4
    except LmgError as exc:
        print(f"numerical-validity error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
