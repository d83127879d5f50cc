"""Time evolution: Schrodinger and Lindblad integrators plus noisy-trajectory ensembles.

Two fixed-step schemes are provided.  ``rk4`` is classic fourth-order
Runge-Kutta.  ``midpoint-exponential`` applies exp(-i H(t + dt/2) dt) per
step; it preserves the norm exactly and is exact for piecewise-constant
Hamiltonians, which is how the stochastic noise is injected.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .noise import NoisePreset, sample_trajectory
from .qops import MERIT_FLOOR, merit_from_infidelity

METHODS = ("rk4", "midpoint-exponential")
HEATING_MODES = ("heating-only", "infinite-temperature")
SATURATION_LIMIT = 1e-4


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    method: str = "midpoint-exponential"
    norm_renormalize: bool = False
    record_stride: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")

    def check(self, omega_max: float | None):
        """Raise if dt does not resolve the fastest declared frequency."""
        if omega_max is not None and self.dt * omega_max > 0.1 + 1e-12:
            raise ValueError(
                f"dt too coarse for declared omega_max: dt*omega_max = {self.dt * omega_max:.3g} > 0.1")


@dataclass(frozen=True)
class HeatingModel:
    rate: float = 0.0
    mode: str = "heating-only"

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError("heating rate must be non-negative")
        if self.mode not in HEATING_MODES:
            raise ValueError(f"mode must be one of {HEATING_MODES}")


@dataclass
class Trajectory:
    """Recorded times and either states or observable values.

    ``values`` holds whatever ``observe`` returned at every recorded time
    (or the states themselves when no observer is given).
    """

    times: np.ndarray
    values: np.ndarray
    final: np.ndarray
    flags: list = field(default_factory=list)


def _grid(t_span, dt):
    t0, t1 = map(float, t_span)
    if t1 < t0:
        raise ValueError("t_span must be increasing")
    n = max(1, math.ceil((t1 - t0) / dt - 1e-9))
    return t0, n, (t1 - t0) / n


def expm_hermitian(h: np.ndarray, tau: float) -> np.ndarray:
    """exp(-i H tau) for a Hermitian H (or a stack of them) via eigendecomposition."""
    w, v = np.linalg.eigh(h)
    phase = np.exp(-1j * tau * w)
    return (v * phase[..., None, :]) @ np.swapaxes(v.conj(), -1, -2)


def _apply(h, psi):
    if psi.ndim == 1:
        return h @ psi
    if isinstance(h, np.ndarray) and h.ndim == 3:
        return np.einsum("bij,bj->bi", h, psi)
    return (h @ psi.T).T


def evolve_pure(h_of_t: Callable, psi0, t_span, cfg: IntegratorConfig, omega_max: float | None = None,
                observe: Callable | None = None) -> Trajectory:
    """Integrate i dpsi/dt = H(t) psi.

    ``psi0`` may carry a leading batch axis, in which case ``h_of_t`` may
    return a matching stack of Hamiltonians.
    """
    cfg.check(omega_max)
    psi = np.array(getattr(psi0, "amplitudes", psi0), dtype=complex)
    t0, n, h = _grid(t_span, cfg.dt)
    obs = observe or (lambda x: x.copy())
    times, values = [t0], [obs(psi)]
    for k in range(n):
        t = t0 + k * h
        if cfg.method == "rk4":
            h0 = h_of_t(t)
            hm = h_of_t(t + 0.5 * h)
            h1 = h_of_t(t + h)
            k1 = -1j * _apply(h0, psi)
            k2 = -1j * _apply(hm, psi + 0.5 * h * k1)
            k3 = -1j * _apply(hm, psi + 0.5 * h * k2)
            k4 = -1j * _apply(h1, psi + h * k3)
            psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        else:
            u = expm_hermitian(np.asarray(h_of_t(t + 0.5 * h)), h)
            psi = _apply(u, psi)
        if cfg.norm_renormalize:
            psi = psi / np.linalg.norm(psi, axis=-1, keepdims=True)
        if (k + 1) % cfg.record_stride == 0 or k == n - 1:
            times.append(t0 + (k + 1) * h)
            values.append(obs(psi))
    return Trajectory(np.array(times), np.array(values), psi)


def collapse_operators(heating: HeatingModel, phonon_ops):
    """(rate, L) pairs for the heating model; phonon_ops = (b, b_dagger) in the full space."""
    b, bd = phonon_ops
    if heating.rate == 0:
        return []
    ops = [(heating.rate, bd)]
    if heating.mode == "infinite-temperature":
        ops.append((heating.rate, b))
    return ops


def lindblad_rhs(h, rho, collapse):
    """-i[H, rho] + sum_k g_k (L rho L^dag - 1/2 {L^dag L, rho}) for Hermitian rho."""
    hr = h @ rho
    out = -1j * (hr - hr.conj().T)
    for rate, l, ldl in collapse:
        lr = l @ rho
        jump = l @ lr.conj().T
        anti = ldl @ rho
        out += rate * (jump.conj().T - 0.5 * (anti + anti.conj().T))
    return out


def _top_fock_population(rho, number_diag):
    top = number_diag >= number_diag.max() - 0.5
    return float(np.real(np.diagonal(rho)[top]).sum())


def evolve_open(h_of_t: Callable, rho0, heating: HeatingModel, phonon_ops, t_span, cfg: IntegratorConfig,
                omega_max: float | None = None, observe: Callable | None = None) -> Trajectory:
    """RK4 integration of the Lindblad master equation.

    Collapse operators follow ``heating``: b^dagger at the quoted rate, plus b
    at the same rate in infinite-temperature mode.  ``h_of_t`` may return a
    dense array or a scipy sparse matrix.  A flag is appended to the result
    when the top Fock level population exceeds 1e-4.
    """
    cfg.check(omega_max)
    from scipy import sparse

    rho = np.array(getattr(rho0, "matrix", rho0), dtype=complex)
    b, bd = phonon_ops
    number_diag = np.real(np.diagonal(np.asarray((sparse.csr_matrix(bd) @ sparse.csr_matrix(b)).todense())))
    collapse = []
    for rate, l in collapse_operators(heating, phonon_ops):
        ls = sparse.csr_matrix(l)
        collapse.append((rate, ls, (ls.conj().T @ ls).tocsr()))
    t0, n, h = _grid(t_span, cfg.dt)
    obs = observe or (lambda x: x.copy())
    times, values = [t0], [obs(rho)]
    peak_top = _top_fock_population(rho, number_diag)
    for k in range(n):
        t = t0 + k * h
        h0, hm, h1 = h_of_t(t), h_of_t(t + 0.5 * h), h_of_t(t + h)
        k1 = lindblad_rhs(h0, rho, collapse)
        k2 = lindblad_rhs(hm, rho + 0.5 * h * k1, collapse)
        k3 = lindblad_rhs(hm, rho + 0.5 * h * k2, collapse)
        k4 = lindblad_rhs(h1, rho + h * k3, collapse)
        rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        if (k + 1) % cfg.record_stride == 0 or k == n - 1:
            times.append(t0 + (k + 1) * h)
            values.append(obs(rho))
            peak_top = max(peak_top, _top_fock_population(rho, number_diag))
    flags = []
    if peak_top > SATURATION_LIMIT:
        flags.append(f"truncation saturation: top Fock population reached {peak_top:.3g}")
    return Trajectory(np.array(times), np.array(values), rho, flags)


# ------------------------------------------------------------------ ensembles


def tree_sum(x: np.ndarray) -> np.ndarray:
    """Pairwise sum over axis 0 with a shape fixed by the length alone."""
    x = np.asarray(x)
    while x.shape[0] > 1:
        if x.shape[0] % 2:
            x = np.concatenate([x, np.zeros_like(x[:1])])
        x = x[0::2] + x[1::2]
    return x[0]


@dataclass
class EnsembleResult:
    times: np.ndarray
    mean_density: np.ndarray  # (n_times, 4, 4)
    merit_series: np.ndarray
    fidelity_series: np.ndarray
    final_infidelities: np.ndarray  # per trajectory, against the final ideal state
    seeds: list
    trajectory_count: int
    final_states: np.ndarray = field(repr=False, default=None)
    states: np.ndarray = field(repr=False, default=None)  # (n_times, n_traj, 4)

    @property
    def infidelity(self) -> float:
        return float(np.mean(self.final_infidelities))

    @property
    def sem(self) -> float:
        n = self.trajectory_count
        return float(np.std(self.final_infidelities, ddof=1) / math.sqrt(n)) if n > 1 else 0.0

    @property
    def merit(self) -> float:
        return merit_from_infidelity(self.infidelity)

    @property
    def fidelity(self) -> float:
        return float(math.sqrt(max(0.0, 1.0 - self.infidelity)))


def stream_ids(index: int) -> tuple[int, int, int]:
    """OU stream ids (mu, dOmega, dOmega_g) of trajectory ``index``."""
    return 3 * index, 3 * index + 1, 3 * index + 2


def _noise_tracks(protocol, preset: NoisePreset, indices, base_seed, noise_step, n_noise, ou_start="stationary"):
    tracks = np.zeros((3, len(indices), n_noise))
    if preset.noiseless:
        return tracks
    params = (preset.mu_params(), preset.delta_omega_params(protocol.omega),
              preset.delta_omega_g_params(max(protocol.omega_g, 0.0)))
    if ou_start == "rest":
        params = tuple(replace(p, initial_value=0.0) for p in params)
    elif ou_start != "stationary":
        raise ValueError("ou_start must be 'stationary' or 'rest'")
    for j, idx in enumerate(indices):
        for s, (p, sid) in enumerate(zip(params, stream_ids(idx))):
            if p.stationary_sd > 0:
                tracks[s, j] = sample_trajectory(p, noise_step, n_noise, base_seed, sid).samples
    return tracks


def _run_chunk(args):
    protocol, preset, indices, base_seed, cfg, noise_step, record_every, ou_start = args
    return simulate_trajectories(protocol, preset, indices, base_seed, cfg, noise_step, record_every, ou_start)


def simulate_trajectories(protocol, preset: NoisePreset, indices, base_seed: int, cfg: IntegratorConfig,
                          noise_step: float = 1e-6, record_every: float | None = None,
                          ou_start: str = "stationary"):
    """Propagate a batch of noisy trajectories; returns (times, states[n_times, batch, 4]).

    Noise is piecewise constant on a ``noise_step`` grid and every integrator
    step lies inside one noise interval, so each step is an exact exponential.
    """
    cfg.check(protocol.omega_max)
    duration = protocol.duration
    sub = max(1, math.ceil(noise_step / cfg.dt - 1e-9))
    h = noise_step / sub
    n_noise = max(1, math.ceil(duration / noise_step - 1e-9))
    n_steps = max(1, math.ceil(duration / h - 1e-9))
    h = duration / n_steps
    tracks = _noise_tracks(protocol, preset, indices, base_seed, noise_step, n_noise + 1, ou_start)
    stride = max(1, round(record_every / h)) if record_every else cfg.record_stride

    batch = len(indices)
    psi = np.tile(np.asarray(protocol.psi0, dtype=complex), (batch, 1))
    static = protocol.static_operators() if protocol.is_static else None
    times, states = [0.0], [psi.copy()]
    for k in range(n_steps):
        tm = (k + 0.5) * h
        j = min(int(tm // noise_step), n_noise)
        h0, a, bop, c = static if static is not None else protocol.operators_at(tm)
        hb = (h0[None] + tracks[0, :, j, None, None] * a[None]
              + tracks[1, :, j, None, None] * bop[None] + tracks[2, :, j, None, None] * c[None])
        u = expm_hermitian(hb, h)
        psi = np.einsum("bij,bj->bi", u, psi)
        if cfg.norm_renormalize:
            psi /= np.linalg.norm(psi, axis=1, keepdims=True)
        if (k + 1) % stride == 0 or k == n_steps - 1:
            times.append((k + 1) * h)
            states.append(psi.copy())
    return np.array(times), np.stack(states)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("XSIM_WORKERS", "1")))
    except ValueError:
        return 1


def run_ensemble(protocol, noise_preset: NoisePreset, n_traj: int, base_seed: int, cfg: IntegratorConfig,
                 workers: int | None = None, noise_step: float = 1e-6, record_every: float | None = None,
                 chunk: int = 25, ou_start: str = "stationary") -> EnsembleResult:
    """Average |psi><psi| over ``n_traj`` noisy trajectories of ``protocol``.

    Trajectory k draws its three OU streams from (base_seed, 3k..3k+2), so
    results do not depend on batching or on the number of workers.
    ``ou_start='rest'`` pins every OU track to zero at t = 0 (noise switched
    on with the gate) instead of drawing it from the stationary distribution.
    """
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    workers = default_workers() if workers is None else max(1, int(workers))
    idx = list(range(n_traj))
    chunks = [idx[i:i + chunk] for i in range(0, n_traj, chunk)]
    jobs = [(protocol, noise_preset, c, base_seed, cfg, noise_step, record_every, ou_start) for c in chunks]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]
    times = parts[0][0]
    states = np.concatenate([p[1] for p in parts], axis=1)  # (n_times, n_traj, 4)
    return summarize(protocol, times, states, base_seed)


def summarize(protocol, times, states, base_seed) -> EnsembleResult:
    n_traj = states.shape[1]
    outer = states[..., :, None] * states[..., None, :].conj()  # (t, traj, 4, 4)
    mean = tree_sum(np.moveaxis(outer, 1, 0)) / n_traj
    fid2 = np.empty(len(times))
    merits = np.empty(len(times))
    for i, t in enumerate(times):
        ideal = protocol.ideal_at(t)
        p = float(np.real(np.vdot(ideal, mean[i] @ ideal)))
        fid2[i] = min(1.0, max(0.0, p))
        merits[i] = merit_from_infidelity(1.0 - fid2[i]) if fid2[i] < 1.0 else MERIT_FLOOR
    final_ideal = protocol.ideal_at(times[-1])
    per_traj = 1.0 - np.abs(states[-1] @ final_ideal.conj()) ** 2
    return EnsembleResult(times, mean, merits, np.sqrt(fid2), np.clip(per_traj, 0.0, 1.0),
                          [base_seed, [stream_ids(k) for k in range(n_traj)]], n_traj, states[-1], states)


def timed(fn, *args, **kwargs):
    t = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t
