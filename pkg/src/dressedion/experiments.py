"""Config-driven experiments: named presets, sweeps, and result files.

User-facing configs use kHz for frequencies (multiplied by 2*pi on load),
ms for times and rad/ms for adiabatic rates.  A config is a plain mapping;
YAML and JSON files are both accepted.
"""
from __future__ import annotations

import copy
import csv
import io
import json
import math
import os
import time
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .noise import NoisePreset, preset as noise_preset
from .propagate import IntegratorConfig, evolve_pure, run_ensemble
from .qops import MERIT_FLOOR, merit_from_infidelity
from .regimes import YB171, classify, zeeman_gap
from .single import (KET_0P, KET_D, basic_protocol, fit_lifetime, hamiltonian_at, idle_protocol,
                     relative_phase, sigmaz_protocol, stark_sigmaz_fields, transfer_protocol)
from .svgplot import line_plot
from .two_ion import TrapConfig, effective_eta, ms_plan, simulate_ms_gate

KHZ = 2 * math.pi * 1e3
MS = 1e-3
RAD_PER_MS = 1e3
CSV_HEADER = ["sweep_value", "noise_marker", "F", "F2", "M", "sem", "wall_time_s"]


def _logspace(lo, hi, n=20):
    return [float(f"{v:.6g}") for v in np.logspace(math.log10(lo), math.log10(hi), n)]


def _base(experiment, sweep, noise, params, description, **extra):
    cfg = {
        "experiment": experiment,
        "description": description,
        "sweep": sweep,
        "noise": noise,
        "trajectories": None,
        "base_seed": 2024,
        "ou_start": "rest",
        "integrator": {"dt_factor": 0.1, "method": "midpoint-exponential", "noise_step_ms": 0.001},
        "params": params,
        "outputs": None,
        "workers": None,
        "timing": False,
    }
    cfg.update(extra)
    return cfg


PRESETS = {
    "fig4-top": _base(
        "basic", {"name": "omega_khz", "values": _logspace(50, 1000)}, ["black", "red"],
        {"omega_g_khz": 1.1785, "qubit": "D", "duration_ms": None},
        "Basic sigma_y gate on the D-qubit: M vs dressing Rabi frequency"),
    "fig4-middle": _base(
        "transfer", {"name": "omega_khz", "values": _logspace(50, 1000)}, ["black", "blue"],
        {"rate_rad_per_ms": 31.416, "start": "D"},
        "Adiabatic transfer D -> B at 31.416 rad/ms: M vs dressing Rabi frequency"),
    "fig4-bottom": _base(
        "sigma-z", {"name": "omega_khz", "values": _logspace(50, 1000)}, ["black", "red"],
        {"rate_rad_per_ms": 47.124, "x": 3.1416},
        "Adiabatic sigma_z gate (x = 3.1416, 47.124 rad/ms): M vs dressing Rabi frequency"),
    "ms-gate": _base(
        "ms-gate", {"name": "heating_rate", "values": [0, 10, 100]}, ["none"],
        {"omega_khz": 20.0, "delta_0_khz": 2.0, "omega_g_khz": 100.0, "nu_khz": 500.0, "omega_z_khz": 10.0,
         "delta_z_khz": 1000.0, "eta": 0.0071, "R": 1, "initial_phonons": 0, "fock_dim": 8,
         "dt_ns": 15.625, "heating_mode": "heating-only"},
        "Two-ion Molmer-Sorensen gate: F^2(t) of (|DD> + i|0'0'>)/sqrt2 per heating rate"),
    "d-lifetime": _base(
        "lifetime", {"name": "omega_khz", "values": [36.5]}, ["lifetime"],
        {"horizon_ms": 50.0, "record_ms": 0.1, "floor": 1.0 / 3.0,
         "noise": {"sd_mu_hz": 100.0, "tau_mu_ms": 0.1, "f": 0.01, "tau_f_ms": 3.2, "runs": 50}},
        "Dressed-state |D> lifetime under magnetic and Rabi noise, exponential fit of P_D(t)"),
    "stark-z-dressed": _base(
        "stark-dressed", {"name": "omega_z_khz", "values": [2.5, 5.0, 10.0]}, ["black"],
        {"omega_khz": 20.0, "delta_z_khz": 1000.0, "duration_ms": 2.0},
        "Stark-shift sigma_z via a detuned |0> <-> |0'> field under dressing"),
    "stark-z-rf": _base(
        "stark-rf", {"name": "omega_g_khz", "values": [0.5, 1.0, 2.0]}, ["black"],
        {"omega_khz": 100.0, "delta_khz": 20.0, "duration_ms": 2.0},
        "Stark-shift sigma_z via two oppositely detuned RF fields"),
    "regime-report": _base(
        "regime", {"name": "b_gauss", "values": [1.0, 2.0, 5.0, 9.8, 20.0, 50.0, 100.0]}, [],
        {"omega_g_khz": 1.9, "eta": 0.0071, "threshold": 10.0},
        "Zeeman gap and linear/non-linear regime classification vs magnetic field"),
}

TOP_KEYS = set(PRESETS["fig4-top"]) | {"preset"}
EXPERIMENTS = {"basic", "transfer", "sigma-z", "ms-gate", "lifetime", "stark-dressed", "stark-rf", "regime"}


class ConfigError(ValueError):
    pass


def list_presets() -> list[tuple[str, str]]:
    return sorted((name, cfg["description"]) for name, cfg in PRESETS.items())


def preset_config(name: str) -> dict:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}")
    cfg = copy.deepcopy(PRESETS[name])
    cfg["preset"] = name
    cfg["outputs"] = cfg["outputs"] or f"xsim-out/{name}"
    return cfg


def load_config(path) -> dict:
    """Read a YAML/JSON config, a saved manifest, or a config naming a preset to extend."""
    text = Path(path).read_text()
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    if "config" in data and "manifest_version" in data:
        data = data["config"]
    if "experiment" not in data:
        if "preset" not in data:
            raise ConfigError("config needs 'preset' or 'experiment'")
        base = preset_config(data["preset"])
        data = _merge(base, data)
    return data


def _merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def apply_override(cfg: dict, item: str) -> dict:
    """Apply one ``dotted.key=value`` override; the value is parsed as YAML."""
    if "=" not in item:
        raise ConfigError(f"override must look like key=value, got {item!r}")
    key, raw = item.split("=", 1)
    value = yaml.safe_load(raw)
    node = cfg
    parts = key.strip().split(".")
    for p in parts[:-1]:
        if not isinstance(node.get(p), dict):
            node[p] = {}
        node = node[p]
    node[parts[-1]] = value
    return cfg


def sweep_values(sweep: dict) -> list[float]:
    if "values" in sweep and sweep["values"] is not None:
        vals = [float(v) for v in sweep["values"]]
    else:
        n = int(sweep.get("num", 20))
        lo, hi = float(sweep["start"]), float(sweep["stop"])
        vals = _logspace(lo, hi, n) if sweep.get("spacing", "log") == "log" else list(np.linspace(lo, hi, n))
    return vals


def validate(cfg: dict) -> dict:
    unknown = set(cfg) - TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if cfg.get("experiment") not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {sorted(EXPERIMENTS)}")
    if cfg.get("preset") is not None and cfg["preset"] not in PRESETS:
        raise ConfigError(f"unknown preset {cfg['preset']!r}")
    vals = sweep_values(cfg.get("sweep") or {})
    if not vals:
        raise ConfigError("sweep has no values")
    if any(v < 0 for v in vals) or (cfg["experiment"] != "ms-gate" and any(v <= 0 for v in vals)):
        raise ConfigError("sweep values must be positive")
    for m in cfg.get("noise") or []:
        if m not in ("none", "lifetime"):
            noise_preset(m)
    t = cfg.get("trajectories")
    if t is not None and int(t) < 1:
        raise ConfigError("trajectories must be >= 1")
    if cfg.get("ou_start", "rest") not in ("rest", "stationary"):
        raise ConfigError("ou_start must be 'rest' or 'stationary'")
    integ = cfg.get("integrator") or {}
    if float(integ.get("dt_factor", 0.1)) > 0.1:
        raise ConfigError("integrator.dt_factor must be <= 0.1 (dt * omega_max)")
    out = cfg.get("outputs")
    if not out:
        raise ConfigError("outputs directory not set")
    try:
        Path(out).mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"outputs not writable: {e}") from None
    if not os.access(out, os.W_OK):
        raise ConfigError(f"outputs not writable: {out}")
    return cfg


def _fmt(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, str):
        return x
    return f"{float(x):.12g}"


# ---------------------------------------------------------------- runners


def _integrator(cfg, omega_max):
    integ = cfg.get("integrator") or {}
    dt = float(integ.get("dt_factor", 0.1)) / omega_max
    return IntegratorConfig(dt=dt, method=integ.get("method", "midpoint-exponential"))


def _noise_step(cfg):
    return float((cfg.get("integrator") or {}).get("noise_step_ms", 0.001)) * MS


def _protocol(cfg, value):
    p = cfg["params"]
    kind = cfg["experiment"]
    omega = value * KHZ
    if kind == "basic":
        dur = p.get("duration_ms")
        return basic_protocol(omega, p["omega_g_khz"] * KHZ, p.get("qubit", "D"), dur * MS if dur else None)
    if kind == "transfer":
        return transfer_protocol(omega, p["rate_rad_per_ms"] * RAD_PER_MS, p.get("start", "D"))
    if kind == "sigma-z":
        return sigmaz_protocol(omega, p["x"], p["rate_rad_per_ms"] * RAD_PER_MS)
    raise ConfigError(kind)


def _n_traj(cfg, marker, pr: NoisePreset):
    if pr.noiseless:
        return 1
    t = cfg.get("trajectories")
    return int(t) if t is not None else pr.runs


def _run_single(cfg, workers):
    rows, series = [], {}
    for marker in cfg["noise"]:
        pr = noise_preset(marker)
        xs, ms = [], []
        for v in sweep_values(cfg["sweep"]):
            proto = _protocol(cfg, v)
            t0 = time.perf_counter()
            res = run_ensemble(proto, pr, _n_traj(cfg, marker, pr), int(cfg["base_seed"]),
                               _integrator(cfg, proto.omega_max), workers=workers,
                               noise_step=_noise_step(cfg), ou_start=cfg.get("ou_start", "rest"))
            wall = time.perf_counter() - t0
            rows.append([v, marker, res.fidelity, res.fidelity**2, res.merit, res.sem, wall])
            xs.append(v)
            ms.append(res.merit)
        series[marker] = (xs, ms)
    plot = line_plot(series, "dressing Rabi frequency (kHz)", "M = log10(1 - F^2)",
                     cfg.get("preset") or cfg["experiment"], logx=True)
    return rows, plot, {}, {}


def _run_ms(cfg, workers):
    p = cfg["params"]
    k = {key: p[f"{key}_khz"] * KHZ for key in ("omega", "delta_0", "omega_g", "nu", "omega_z", "delta_z")}
    eta = p.get("eta")
    if eta is None:
        eta = effective_eta(TrapConfig(nu=k["nu"], magnetic_gradient=p.get("gradient_t_per_m", 46.0)))
    plan = ms_plan(int(p["R"]), float(eta), k["omega_g"], k["omega"], k["delta_0"], k["omega_z"], k["delta_z"])
    rows, series, warnings, extra = [], {}, [], {}
    ts = io.StringIO()
    w = csv.writer(ts, lineterminator="\n")
    w.writerow(["heating_rate", "t_ms", "F2_bell", "F2_DD", "F2_0p0p", "re_rho_DD_0p0p", "im_rho_DD_0p0p"])
    for rate in sweep_values(cfg["sweep"]):
        trap = TrapConfig(nu=k["nu"], fock_dim=int(p["fock_dim"]), initial_phonons=int(p["initial_phonons"]),
                          heating_rate=rate)
        t0 = time.perf_counter()
        run = simulate_ms_gate(plan, trap, dt=float(p["dt_ns"]) * 1e-9, heating_mode=p.get("heating_mode", "heating-only"))
        wall = time.perf_counter() - t0
        f2 = min(1.0, max(0.0, run.final_f2))
        rows.append([rate, "none", math.sqrt(f2), f2, merit_from_infidelity(1 - f2), 0.0, wall])
        warnings += [f"heating {rate:g}/s: {m}" for m in run.flags]
        stride = max(1, len(run.times) // 4000)
        for i in list(range(0, len(run.times), stride)) + ([len(run.times) - 1] if (len(run.times) - 1) % stride else []):
            c = run.coherence[i]
            w.writerow([_fmt(rate), _fmt(run.times[i] / MS), _fmt(run.bell_f2[i]), _fmt(run.dd_f2[i]),
                        _fmt(run.pp_f2[i]), _fmt(c.real), _fmt(c.imag)])
        series[f"{rate:g} phonons/s"] = (list(run.times[::stride] / MS), list(run.bell_f2[::stride]))
    extra["timeseries.csv"] = ts.getvalue()
    plot = line_plot(series, "t (ms)", "F^2 of (|DD> + i|0'0'>)/sqrt2", "ms-gate")
    return rows, plot, {"plan": {"T_ms": plan.T / MS, "q_khz": plan.q / KHZ, "eta": plan.eta}}, extra, warnings


def _run_lifetime(cfg, workers):
    p = cfg["params"]
    nz = p["noise"]
    pr = NoisePreset("lifetime", nz["sd_mu_hz"] * 2 * math.pi, nz["tau_mu_ms"] * MS, nz["f"], nz["tau_f_ms"] * MS,
                     int(nz["runs"]))
    rows, series, info = [], {}, {}
    n_traj = int(cfg["trajectories"]) if cfg.get("trajectories") is not None else pr.runs
    for v in sweep_values(cfg["sweep"]):
        proto = idle_protocol(v * KHZ, p["horizon_ms"] * MS)
        t0 = time.perf_counter()
        res = run_ensemble(proto, pr, n_traj, int(cfg["base_seed"]), _integrator(cfg, proto.omega_max),
                           workers=workers, noise_step=_noise_step(cfg), record_every=p["record_ms"] * MS,
                           ou_start=cfg.get("ou_start", "rest"))
        wall = time.perf_counter() - t0
        pops = np.abs(res.states @ KET_D.conj()) ** 2
        fit = fit_lifetime(res.times, pops, floor=p.get("floor", 1 / 3), seed=int(cfg["base_seed"]))
        rows.append([v, "lifetime", res.fidelity, res.fidelity**2, res.merit, res.sem, wall])
        info[f"{v:g}"] = {"T1_s": fit.t1, "ci68_s": [fit.ci_low, fit.ci_high], "floor": fit.floor}
        series[f"{v:g} kHz"] = (list(res.times / MS), list(pops.mean(axis=1)))
    plot = line_plot(series, "t (ms)", "P_D", "d-lifetime")
    return rows, plot, {"lifetime": info}, {}


def stark_run(variant: str, omega: float, duration: float, *, omega_z=0.0, delta_z=0.0, omega_g=0.0, delta=0.0,
              dt_factor: float = 0.1):
    """Propagate (|D> + |0'>)/sqrt2 under a Stark sigma_z setting.

    Returns (predicted phase rate, measured phase rate, final fidelity against
    the predicted state).  Phase rates refer to arg(<0'|psi>) - arg(<D|psi>).
    """
    fields, shift = stark_sigmaz_fields(variant, omega=omega, omega_z=omega_z, delta_z=delta_z,
                                        omega_g=omega_g, delta=delta)
    predicted = -shift if variant == "dressed" else -2 * shift
    psi0 = (KET_D + KET_0P) / math.sqrt(2)
    cfg = IntegratorConfig(dt=dt_factor / fields.omega_max, record_stride=50)
    traj = evolve_pure(lambda t: hamiltonian_at(t, fields), psi0, (0.0, duration), cfg, omega_max=fields.omega_max)
    phases = np.unwrap([relative_phase(s, KET_D, KET_0P) for s in traj.values])
    measured = float(np.polyfit(traj.times, phases, 1)[0])
    ideal = (KET_D + np.exp(1j * predicted * duration) * KET_0P) / math.sqrt(2)
    f = float(min(1.0, abs(np.vdot(ideal, traj.final))))
    return predicted, measured, f


def _run_stark(cfg, workers):
    p = cfg["params"]
    rows, xs, ms = [], [], []
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sweep_value", "predicted_rate_rad_s", "measured_rate_rad_s"])
    for v in sweep_values(cfg["sweep"]):
        t0 = time.perf_counter()
        if cfg["experiment"] == "stark-dressed":
            pred, meas, f = stark_run("dressed", p["omega_khz"] * KHZ, p["duration_ms"] * MS,
                                      omega_z=v * KHZ, delta_z=p["delta_z_khz"] * KHZ)
        else:
            pred, meas, f = stark_run("rf", p["omega_khz"] * KHZ, p["duration_ms"] * MS,
                                      omega_g=v * KHZ, delta=p["delta_khz"] * KHZ)
        wall = time.perf_counter() - t0
        m = merit_from_infidelity(1 - f * f) if f < 1 else MERIT_FLOOR
        rows.append([v, "black", f, f * f, m, 0.0, wall])
        w.writerow([_fmt(v), _fmt(pred), _fmt(meas)])
        xs.append(v)
        ms.append(m)
    plot = line_plot({"black": (xs, ms)}, cfg["sweep"]["name"], "M vs predicted Stark state", cfg["experiment"],
                     logx=True)
    return rows, plot, {}, {"stark.csv": buf.getvalue()}


def _run_regime(cfg, workers):
    p = cfg["params"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["b_gauss", "delta_khz", "regime", "rf_margin", "sideband_margin", "nonlinear_margin", "field_margin"])
    xs, ds = [], []
    for b in sweep_values(cfg["sweep"]):
        d = zeeman_gap(YB171, b * 1e-4)
        og = p["omega_g_khz"] * KHZ
        rep = classify(og, p["eta"] * og, d, b * 1e-4, p.get("threshold", 10.0))
        w.writerow([_fmt(b), _fmt(d / KHZ), rep.regime, _fmt(rep.rf_margin), _fmt(rep.sideband_margin),
                    _fmt(rep.nonlinear_margin), _fmt(rep.field_margin)])
        xs.append(b)
        ds.append(d / KHZ)
    plot = line_plot({"Delta": (xs, ds)}, "B (gauss)", "Delta / 2pi (kHz)", "regime-report", logx=True)
    return [], plot, {}, {"regime.csv": buf.getvalue()}


RUNNERS = {"basic": _run_single, "transfer": _run_single, "sigma-z": _run_single, "ms-gate": _run_ms,
           "lifetime": _run_lifetime, "stark-dressed": _run_stark, "stark-rf": _run_stark, "regime": _run_regime}


def results_csv(rows, timing: bool) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(r[0]), r[1]] + [_fmt(x) for x in r[2:6]] + [_fmt(r[6]) if timing else ""])
    return buf.getvalue()


def run_experiment(cfg: dict, workers: int | None = None) -> dict:
    """Run a validated config and write results.csv, manifest.json and plot.svg."""
    cfg = validate(copy.deepcopy(cfg))
    workers = workers if workers is not None else cfg.get("workers")
    out = Path(cfg["outputs"])
    t0 = time.perf_counter()
    result = RUNNERS[cfg["experiment"]](cfg, workers)
    rows, plot, info, extra = result[:4]
    warnings = result[4] if len(result) > 4 else []
    (out / "results.csv").write_text(results_csv(rows, bool(cfg.get("timing"))))
    (out / "plot.svg").write_text(plot)
    for name, text in extra.items():
        (out / name).write_text(text)
    manifest = {
        "manifest_version": 1,
        "package_version": __version__,
        "config": cfg,
        "seeds": {"base_seed": int(cfg["base_seed"]),
                  "streams": "trajectory k uses (base_seed, 3k), (base_seed, 3k+1), (base_seed, 3k+2) "
                             "for mu, dOmega, dOmega_g"},
        "info": info,
        "warnings": warnings,
        "files": sorted(["results.csv", "plot.svg", "manifest.json", *extra]),
        "wall_time_s": time.perf_counter() - t0 if cfg.get("timing") else None,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return {"rows": rows, "info": info, "warnings": warnings, "outputs": str(out)}
