"""Ornstein-Uhlenbeck colored noise for the magnetic and Rabi-frequency fluctuations.

The update rule is the exact one-step solution of the OU process, so any
sampling step ``dt`` gives the correct statistics; there is no Euler error
to calibrate away.  Trajectories are keyed by ``(seed, stream_id)`` through a
counter-based generator, so every stream can be regenerated on its own.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class OUParams:
    """Relaxation time ``tau`` (s) and stationary standard deviation ``sd`` (rad/s).

    ``initial_value`` of None means the first sample is drawn from the
    stationary distribution.
    """

    relaxation_time: float
    stationary_sd: float
    initial_value: float | None = None

    def __post_init__(self):
        if not self.relaxation_time > 0:
            raise ValueError("relaxation_time must be positive")
        if self.stationary_sd < 0:
            raise ValueError("stationary_sd must be non-negative")

    @property
    def diffusion(self) -> float:
        """Diffusion constant c, with sd = sqrt(c*tau/2)."""
        return 2.0 * self.stationary_sd**2 / self.relaxation_time

    @classmethod
    def from_diffusion(cls, relaxation_time: float, diffusion: float, initial_value=None):
        return cls(relaxation_time, math.sqrt(diffusion * relaxation_time / 2.0), initial_value)


@dataclass(frozen=True)
class NoiseTrajectory:
    dt: float
    samples: np.ndarray
    seed: int
    stream_id: int

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.size == 0:
            raise ValueError("empty trajectory")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def __len__(self):
        return self.samples.size


@dataclass(frozen=True)
class NoisePreset:
    """One row of the single-qubit noise table (all rates in rad/s, times in s)."""

    marker: str
    sd_mu: float
    tau_mu: float
    f: float
    tau_f: float
    runs: int

    @property
    def noiseless(self) -> bool:
        return self.sd_mu == 0.0 and self.f == 0.0

    def mu_params(self) -> OUParams:
        return OUParams(self.tau_mu, self.sd_mu)

    def delta_omega_params(self, omega: float) -> OUParams:
        """Microwave imbalance noise, SD = sqrt(2) f Omega."""
        return OUParams(self.tau_f, math.sqrt(2.0) * self.f * omega)

    def delta_omega_g_params(self, omega_g: float) -> OUParams:
        """RF amplitude noise, SD = f Omega_g."""
        return OUParams(self.tau_f, self.f * omega_g)


def _row(marker, sd_hz, tau_mu_ms, f, tau_f_ms, runs=200):
    return NoisePreset(marker, TWO_PI * sd_hz, tau_mu_ms * 1e-3, f, tau_f_ms * 1e-3, runs)


# tau values for the noiseless row are placeholders (never sampled with sd = 0)
PRESETS: dict[str, NoisePreset] = {
    p.marker: p
    for p in (
        _row("black", 0.0, 1.0, 0.0, 1.0, runs=1),
        _row("red", 100, 0.16, 0.01, 32),
        _row("yellow", 100, 0.016, 0.01, 32),
        _row("green", 100, 0.16, 0.01, 3.2),
        _row("blue", 100, 0.016, 0.01, 3.2),
        _row("red-dashed", 500, 0.16, 0.05, 32),
        _row("yellow-dashed", 500, 0.016, 0.05, 32),
        _row("green-dashed", 500, 0.16, 0.05, 3.2),
        _row("blue-dashed", 500, 0.016, 0.05, 3.2),
    )
}


def preset(marker: str) -> NoisePreset:
    key = marker.strip().lower().replace(" ", "-").replace("_", "-")
    try:
        return PRESETS[key]
    except KeyError:
        raise KeyError(f"unknown noise marker {marker!r}; known: {sorted(PRESETS)}") from None


def ou_update(x, dt: float, params: OUParams, gauss):
    """Exact OU step: x' = x e^{-dt/tau} + sqrt(sd^2 (1 - e^{-2 dt/tau})) * gauss."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    decay = math.exp(-dt / params.relaxation_time)
    spread = params.stationary_sd * math.sqrt(-math.expm1(-2.0 * dt / params.relaxation_time))
    return x * decay + spread * gauss


def generator(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Counter-based generator for one (seed, stream) pair."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream_id),))
    return np.random.Generator(np.random.Philox(ss))


def _ou_filter(first: float, gauss: np.ndarray, decay: float, spread: float) -> np.ndarray:
    # x[k] = decay*x[k-1] + spread*g[k], seeded with x[0] = first
    y, _ = lfilter([spread], [1.0, -decay], gauss, zi=[decay * first])
    return np.concatenate(([first], y))


def sample_trajectory(params: OUParams, dt: float, n: int, seed: int, stream_id: int = 0) -> NoiseTrajectory:
    """n samples spaced by dt, starting from the stationary distribution unless pinned."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not dt > 0:
        raise ValueError("dt must be positive")
    rng = generator(seed, stream_id)
    g = rng.standard_normal(n)
    if params.initial_value is None:
        first = params.stationary_sd * g[0]
    else:
        first = float(params.initial_value)
    if params.stationary_sd == 0.0:
        x = first * np.exp(-dt * np.arange(n) / params.relaxation_time)
        return NoiseTrajectory(dt, x, seed, stream_id)
    decay = math.exp(-dt / params.relaxation_time)
    spread = params.stationary_sd * math.sqrt(-math.expm1(-2.0 * dt / params.relaxation_time))
    x = _ou_filter(first, g[1:], decay, spread)
    return NoiseTrajectory(dt, x, seed, stream_id)


def spectral_density(params: OUParams, omega):
    """Two-sided Lorentzian S(w) = 2 sd^2 tau / (1 + w^2 tau^2).

    Normalized so that (1/2pi) * integral over all w equals sd^2.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("omega must be non-negative")
    tau = params.relaxation_time
    s = 2.0 * params.stationary_sd**2 * tau / (1.0 + (omega * tau) ** 2)
    return float(s) if s.ndim == 0 else s


def autocorrelation(x: np.ndarray, lag: int) -> float:
    """Normalized sample autocorrelation at an integer lag."""
    x = np.asarray(x, dtype=float) - np.mean(x)
    return float(np.dot(x[:-lag], x[lag:]) / np.dot(x, x)) if lag else 1.0


def periodogram(trajectories: np.ndarray, dt: float):
    """Averaged two-sided periodogram of rows of ``trajectories``.

    Returns angular frequencies (rad/s, non-negative) and the estimate of
    S(w) in the same normalization as :func:`spectral_density`.
    """
    x = np.atleast_2d(np.asarray(trajectories, dtype=float))
    n = x.shape[1]
    spec = np.abs(np.fft.rfft(x, axis=1)) ** 2 * dt / n
    w = TWO_PI * np.fft.rfftfreq(n, dt)
    return w, spec.mean(axis=0)
