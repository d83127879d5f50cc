"""Single-ion four-level model: interaction-picture Hamiltonian, dressed frames,
gate field settings, adiabatic schedules, Berry phases and noise budgets.

Bare basis order is fixed as (|-1>, |0>, |0'>, |1>).  The dressing fields act
on |0> <-> |+-1>, the RF field on |0'> <-> |+-1>, and an optional detuned
field on |0> <-> |0'>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .qops import ket

M1, Z0, ZP, P1 = 0, 1, 2, 3  # |-1>, |0>, |0'>, |1>
DIM = 4
SQ2 = math.sqrt(2.0)

KET_M1, KET_0, KET_0P, KET_P1 = (ket(DIM, i) for i in range(DIM))
KET_D = (KET_M1 - KET_P1) / SQ2
KET_B = (KET_M1 + KET_P1) / SQ2

SIGMA_Z = np.diag([-1.0, 0.0, 0.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class SingleQubitFields:
    """All field parameters of the interaction-picture Hamiltonian.

    Rabi frequencies and detunings in rad/s, phases in radians.
    ``delta_omega_mismatch`` is a static Omega_+ - Omega_- imbalance and
    ``delta_phi_error`` a static offset added to both RF phases.
    """

    omega_minus: float = 0.0
    omega_plus: float = 0.0
    theta_minus: float = 0.0
    theta_plus: float = 0.0
    omega_g: float = 0.0
    phi_minus: float = 0.0
    phi_plus: float = 0.0
    delta_minus: float = 0.0
    delta_plus: float = 0.0
    omega_z: float = 0.0
    theta_z: float = 0.0
    delta_z: float = 0.0
    delta_omega_mismatch: float = 0.0
    delta_phi_error: float = 0.0

    def __post_init__(self):
        for name in ("omega_minus", "omega_plus", "omega_g", "omega_z"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def omega_max(self) -> float:
        """Largest angular frequency present, for integrator step checks."""
        dressing = max(self.omega_minus, self.omega_plus)
        return max(
            dressing / SQ2 + self.omega_g,
            self.omega_g,
            abs(self.delta_minus),
            abs(self.delta_plus),
            abs(self.delta_z) + self.omega_z,
            1.0,
        )


def hamiltonian_at(t: float, fields: SingleQubitFields, mu: float = 0.0, d_omega: float = 0.0,
                   d_omega_g: float = 0.0) -> np.ndarray:
    """4x4 Hamiltonian with instantaneous noise values substituted.

    Omega_- = omega_minus + d_omega/2, Omega_+ = omega_plus - d_omega/2 (so that
    Omega_- - Omega_+ carries the microwave noise), the RF amplitude is
    omega_g + d_omega_g, and mu multiplies |1><1| - |-1><-1|.
    """
    f = fields
    om_m = f.omega_minus + 0.5 * d_omega - 0.5 * f.delta_omega_mismatch
    om_p = f.omega_plus - 0.5 * d_omega + 0.5 * f.delta_omega_mismatch
    og = f.omega_g + d_omega_g
    phi_m = f.phi_minus + f.delta_phi_error
    phi_p = f.phi_plus + f.delta_phi_error

    h = np.zeros((DIM, DIM), dtype=complex)
    h[Z0, M1] = 0.5 * om_m * np.exp(-1j * f.theta_minus)
    h[Z0, P1] = 0.5 * om_p * np.exp(-1j * f.theta_plus)
    h[M1, ZP] = 0.5 * og * np.exp(1j * (phi_m - f.delta_minus * t))
    h[ZP, P1] = 0.5 * og * np.exp(1j * (phi_p - f.delta_plus * t))
    h[Z0, ZP] = 0.5 * f.omega_z * np.exp(-1j * (f.theta_z - f.delta_z * t))
    h = h + h.conj().T
    h[P1, P1] += mu
    h[M1, M1] -= mu
    return h


def noise_operators() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Linear response of the Hamiltonian to (mu, d_omega, d_omega_g) at zero fields.

    Useful for building batched Hamiltonians: H = H0 + mu*A + dW*B + dWg*C,
    valid when the static phases are folded in by :func:`noise_operators_for`.
    """
    return noise_operators_for(SingleQubitFields())


def noise_operators_for(fields: SingleQubitFields, t: float = 0.0):
    """Derivatives of :func:`hamiltonian_at` with respect to mu, d_omega, d_omega_g."""
    h0 = hamiltonian_at(t, fields)
    a = hamiltonian_at(t, fields, mu=1.0) - h0
    b = hamiltonian_at(t, fields, d_omega=1.0) - h0
    if fields.omega_g > 0:
        c = (hamiltonian_at(t, fields, d_omega_g=fields.omega_g) - h0) / fields.omega_g
    else:
        c = hamiltonian_at(t, replace(fields, omega_g=1.0)) - h0
    return a, b, c


# ---------------------------------------------------------------- dressed frames


@dataclass(frozen=True)
class DressedFrame:
    """Unitary whose columns are (|u>, |d>, |D or B>, |0'>) in the bare basis."""

    qubit_kind: str
    basis_map: np.ndarray = field(repr=False)

    @classmethod
    def for_qubit(cls, kind: str) -> "DressedFrame":
        kind = _qubit_kind(kind)
        qubit, other = (KET_D, KET_B) if kind == "D" else (KET_B, KET_D)
        up = (other + KET_0) / SQ2
        down = (other - KET_0) / SQ2
        v = np.column_stack([up, down, qubit, KET_0P])
        v.setflags(write=False)
        return cls(kind, v)

    @property
    def labels(self) -> tuple[str, ...]:
        return ("u", "d", self.qubit_kind, "0'")


def _qubit_kind(kind: str) -> str:
    k = str(kind).strip().upper().replace("-QUBIT", "")
    if k not in ("D", "B"):
        raise ValueError(f"qubit kind must be 'D' or 'B', got {kind!r}")
    return k


def to_dressed(frame: DressedFrame, x):
    """Express an operator (conjugation) or a state (change of coordinates) in the dressed frame."""
    v = frame.basis_map
    x = np.asarray(x, dtype=complex)
    if x.shape[-2:] == (DIM, DIM):
        return v.conj().T @ x @ v
    if x.shape[-1] == DIM:
        return x @ v.conj()
    raise ValueError(f"expected dim-4 operator or state, got shape {x.shape}")


def from_dressed(frame: DressedFrame, x):
    v = frame.basis_map
    x = np.asarray(x, dtype=complex)
    if x.shape[-2:] == (DIM, DIM):
        return v @ x @ v.conj().T
    return x @ v.T


# ------------------------------------------------------------------ gate fields


def basic_gate_fields(kind: str, omega: float, omega_g: float) -> SingleQubitFields:
    """sigma_y gate on the D-qubit or sigma_x gate on the B-qubit."""
    if not (omega > 0 and omega_g > 0):
        raise ValueError("omega and omega_g must be positive")
    if _qubit_kind(kind) == "D":
        return SingleQubitFields(omega_minus=omega, omega_plus=omega, omega_g=omega_g,
                                 phi_minus=math.pi / 2, phi_plus=math.pi / 2)
    return SingleQubitFields(omega_minus=omega, omega_plus=omega, omega_g=omega_g,
                             theta_plus=math.pi)


def pi_pulse_time(omega_g: float) -> float:
    """Duration of a full |qubit> -> |0'> flop; the qubit coupling is Omega_g/sqrt(2)."""
    return math.pi / (SQ2 * omega_g)


def qubit_states(kind: str) -> tuple[np.ndarray, np.ndarray]:
    return (KET_D, KET_0P) if _qubit_kind(kind) == "D" else (KET_B, KET_0P)


def ideal_basic_gate(kind: str, omega_g: float, t: float) -> np.ndarray:
    """Exact qubit-space propagator of the noiseless basic gate, as a 4x4 matrix.

    Only the (qubit, |0'>) block is rotated; the dressed pair is left out
    because it never exchanges amplitude with the qubit.
    """
    q, zp = qubit_states(kind)
    a = omega_g * t / SQ2
    if _qubit_kind(kind) == "D":
        # H = g (i|D><0'| - i|0'><D|)
        gen = 1j * np.outer(q, zp.conj()) - 1j * np.outer(zp, q.conj())
    else:
        gen = np.outer(q, zp.conj()) + np.outer(zp, q.conj())
    p = np.outer(q, q.conj()) + np.outer(zp, zp.conj())
    return (np.eye(DIM) - p) + math.cos(a) * p - 1j * math.sin(a) * gen


# ------------------------------------------------------------- adiabatic paths


@dataclass(frozen=True)
class AdiabaticSchedule:
    """Piecewise-linear parameter path traversed at constant rate.

    ``waypoints`` holds (R1, R2) pairs for the sigma-z gate, or
    (theta_plus, 0) pairs for the transfer.  ``jumps`` lists segment indices
    traversed instantaneously.
    """

    kind: str
    rate: float
    waypoints: tuple[tuple[float, float], ...]
    x: float = 0.0
    jumps: tuple[int, ...] = ()
    smooth: bool = False

    @property
    def segment_durations(self) -> np.ndarray:
        p = np.asarray(self.waypoints, dtype=float)
        lengths = np.abs(np.diff(p, axis=0)).sum(axis=1)
        lengths[list(self.jumps)] = 0.0
        return lengths / self.rate

    @property
    def duration(self) -> float:
        return float(self.segment_durations.sum())

    def parameters_at(self, t: float) -> tuple[float, float]:
        p = np.asarray(self.waypoints, dtype=float)
        bounds = np.concatenate(([0.0], np.cumsum(self.segment_durations)))
        t = min(max(t, 0.0), bounds[-1])
        for k in range(len(p) - 1):
            if k in self.jumps:
                continue
            t0, t1 = bounds[k], bounds[k + 1]
            if t <= t1 or k == len(p) - 2:
                s = (t - t0) / (t1 - t0) if t1 > t0 else 1.0
                if self.smooth:
                    s = math.sin(0.5 * math.pi * s) ** 2
                r = p[k] + s * (p[k + 1] - p[k])
                return float(r[0]), float(r[1])
        return float(p[-1][0]), float(p[-1][1])

    def fields_at(self, t: float, omega: float) -> SingleQubitFields:
        r1, r2 = self.parameters_at(t)
        if self.kind == "transfer":
            return SingleQubitFields(omega_minus=omega, omega_plus=omega, theta_plus=r1)
        return SingleQubitFields(
            omega_minus=omega * math.sin(r2), omega_plus=omega * math.sin(r2),
            theta_minus=r1, theta_plus=r1, omega_g=omega * abs(math.cos(r2)),
        )


def transfer_schedule(rate: float, start: str = "D", smooth: bool = False) -> AdiabaticSchedule:
    """Microwave phase ramp theta_+ 0 -> pi (D to B) or pi -> 0 (B to D)."""
    if not rate > 0:
        raise ValueError("rate must be positive")
    a, b = (0.0, math.pi) if _qubit_kind(start) == "D" else (math.pi, 0.0)
    return AdiabaticSchedule("transfer", rate, ((a, 0.0), (b, 0.0)), smooth=smooth)


def sigmaz_path(x: float, rate: float, smooth: bool = False) -> AdiabaticSchedule:
    """A -> B -> C, instantaneous C -> D, then D -> A; imprints phase -x on |0'>."""
    if not 0 < x <= 2 * math.pi:
        raise ValueError("x must lie in (0, 2*pi]")
    if not rate > 0:
        raise ValueError("rate must be positive")
    h = math.pi / 2
    pts = ((0.0, h), (x, h), (x, 0.0), (0.0, 0.0), (0.0, h))
    return AdiabaticSchedule("sigma-z", rate, pts, x=x, jumps=(2,), smooth=smooth)


def zero_energy_state(schedule: AdiabaticSchedule, t: float) -> np.ndarray:
    """Instantaneous dark state followed by the adiabatic schedule."""
    r1, r2 = schedule.parameters_at(t)
    if schedule.kind == "transfer":
        return (KET_M1 - np.exp(1j * r1) * KET_P1) / SQ2
    return -np.exp(-1j * r1) * math.cos(r2) * KET_0 + math.sin(r2) * KET_0P


def berry_phase(path: Sequence[tuple[float, float]]) -> float:
    """Integral of cos^2(R2) dR1 along a piecewise-linear (R1, R2) path."""
    p = np.asarray(path, dtype=float)
    total = 0.0
    for (a1, a2), (b1, b2) in zip(p[:-1], p[1:]):
        d1, d2 = b1 - a1, b2 - a2
        if d1 == 0.0:
            continue
        if abs(d2) < 1e-15:
            total += d1 * math.cos(a2) ** 2
        else:
            total += d1 * (0.5 + (math.sin(2 * b2) - math.sin(2 * a2)) / (4 * d2))
    return total


# ------------------------------------------------------------ Stark sigma-z


def stark_sigmaz_fields(variant: str, *, omega: float = 0.0, omega_z: float = 0.0,
                        delta_z: float = 0.0, omega_g: float = 0.0, delta: float = 0.0,
                        min_ratio: float = 10.0) -> tuple[SingleQubitFields, float]:
    """Field setting and predicted |0'> phase rate for the two Stark-shift sigma-z gates.

    ``dressed``: detuned |0> <-> |0'> field under dressing; shift on |0'> is
    delta_z*Omega_z^2 / (2 Omega^2 - 4 delta_z^2).
    ``rf``: opposite RF detunings and phases; returns Omega_g^2/(2 delta), the
    coefficient of (|0'><0'| - |D><D|).
    """
    if variant == "dressed":
        if omega_z > 0:
            ratio = min(abs(omega + SQ2 * delta_z), abs(omega - SQ2 * delta_z)) / omega_z
            if ratio < min_ratio:
                raise ValueError(f"|Omega +- sqrt2 delta_z| / Omega_z = {ratio:.3g} < {min_ratio}")
        fields = SingleQubitFields(omega_minus=omega, omega_plus=omega, omega_z=omega_z, delta_z=delta_z)
        return fields, delta_z * omega_z**2 / (2 * omega**2 - 4 * delta_z**2)
    if variant == "rf":
        if omega_g > 0 and abs(delta) / omega_g < min_ratio:
            raise ValueError(f"delta / Omega_g = {abs(delta) / omega_g:.3g} < {min_ratio}")
        fields = SingleQubitFields(omega_minus=omega, omega_plus=omega, omega_g=omega_g,
                                   phi_plus=math.pi, phi_minus=0.0, delta_plus=-delta, delta_minus=delta)
        return fields, (omega_g**2 / (2 * delta) if omega_g else 0.0)
    raise ValueError(f"unknown Stark variant {variant!r}")


# -------------------------------------------------------------- noise budgets


@dataclass(frozen=True)
class NoiseBudget:
    """Closed-form noise magnitudes (rad/s) with SDs substituted for mu, dOmega.

    ``higher_order_terms`` is only filled for the sigma-z gate, where the
    third-order qubit-space term grows as Omega is lowered.
    """

    gate: str
    second_order_shift: float
    gate_coupling_correction: float
    leakage_terms: tuple[float, ...]
    constraint_margin: dict
    first_order_term: float = 0.0
    higher_order_terms: tuple[float, ...] = ()

    @property
    def total(self) -> float:
        return (self.first_order_term + self.second_order_shift + self.gate_coupling_correction
                + sum(self.leakage_terms) + sum(self.higher_order_terms))


def noise_budget(gate: str, omega: float, omega_g: float, sd_mu: float, sd_delta_omega: float) -> NoiseBudget:
    mu, dw = abs(sd_mu), abs(sd_delta_omega)
    if gate == "basic":
        gap2 = omega**2 - omega_g**2
        if gap2 == 0:
            raise ValueError("degenerate Omega == Omega_g")
        shift = abs(mu * omega * dw / (2 * gap2))
        coupling = abs((8 * mu**2 + dw**2) * omega_g / (8 * SQ2 * gap2))
        leak = []
        for s in (+1, -1):
            c = abs(math.sqrt(8) * mu + s * dw) ** 3 / (32 * gap2**2)
            leak += [omega**2 * c, omega * omega_g * c]
        root = math.sqrt(abs(gap2))
        margin = {"mu": root / mu if mu else math.inf, "delta_omega": root / dw if dw else math.inf}
        return NoiseBudget("basic", shift, coupling, tuple(leak), margin)
    if gate == "transfer":
        leak = tuple(mu**a * dw**(3 - a) / omega**2 for a in (3, 2, 1, 0))
        margin = {"mu": omega / mu if mu else math.inf, "delta_omega": omega / dw if dw else math.inf}
        return NoiseBudget("transfer", mu * dw / omega, 0.0, leak, margin)
    if gate == "sigma-z":
        first = dw / (4 * SQ2)
        third = dw * (8 * mu**2 + dw**2) / (16 * SQ2 * omega**2)
        leak = tuple(mu**a * dw**(3 - a) / omega**2 for a in (3, 2, 1, 0))
        second_leak = (dw * mu / omega, dw**2 / omega)
        margin = {"mu": omega / mu if mu else math.inf, "delta_omega": omega / dw if dw else math.inf}
        return NoiseBudget("sigma-z", mu * dw / omega, 0.0, second_leak + leak, margin,
                           first_order_term=first, higher_order_terms=(third,))
    raise ValueError(f"unknown gate {gate!r}")


def gradient_shift(eta: float, nu: float) -> float:
    """Second-order energy shift -eta^2 nu of |D> from the static gradient."""
    return -eta**2 * nu


# -------------------------------------------------------------- gate protocols


@dataclass(frozen=True)
class GateProtocol:
    """A noisy single-ion experiment: fields vs time, input state and ideal output.

    ``kind`` is one of basic, transfer, sigma-z, idle.  Noise enters
    multiplicatively on time-varying amplitudes: the microwave and RF noise
    tracks are drawn at the nominal ``omega``/``omega_g`` and scaled by the
    instantaneous amplitude over the nominal one.
    """

    kind: str
    omega: float
    omega_g: float
    duration: float
    psi0: np.ndarray = field(repr=False)
    qubit: str = "D"
    schedule: AdiabaticSchedule | None = None
    delta_phi_error: float = 0.0
    delta_omega_mismatch: float = 0.0

    @property
    def is_static(self) -> bool:
        return self.schedule is None

    @property
    def omega_max(self) -> float:
        return max(self.omega / SQ2 + self.omega_g / SQ2, 1.0)

    def fields_at(self, t: float) -> SingleQubitFields:
        if self.kind == "basic":
            f = basic_gate_fields(self.qubit, self.omega, self.omega_g)
        elif self.kind == "idle":
            f = SingleQubitFields(omega_minus=self.omega, omega_plus=self.omega)
        else:
            f = self.schedule.fields_at(t, self.omega)
        if self.delta_phi_error or self.delta_omega_mismatch:
            f = replace(f, delta_phi_error=self.delta_phi_error, delta_omega_mismatch=self.delta_omega_mismatch)
        return f

    def operators_at(self, t: float):
        """(H0, dH/dmu, dH/d(dOmega track), dH/d(dOmega_g track)) at time t."""
        f = self.fields_at(t)
        a, b, c = noise_operators_for(f, t)
        dress = max(f.omega_minus, f.omega_plus)
        b = b * (dress / self.omega if self.omega else 0.0)
        c = c * (f.omega_g / self.omega_g if self.omega_g else 0.0)
        return hamiltonian_at(t, f), a, b, c

    def static_operators(self):
        return self.operators_at(0.0)

    def hamiltonian(self, t: float, mu: float = 0.0, d_omega: float = 0.0, d_omega_g: float = 0.0):
        h0, a, b, c = self.operators_at(t)
        return h0 + mu * a + d_omega * b + d_omega_g * c

    def ideal_at(self, t: float) -> np.ndarray:
        psi = np.asarray(self.psi0, dtype=complex)
        if self.kind == "basic":
            return ideal_basic_gate(self.qubit, self.omega_g, t) @ psi
        if self.kind == "idle":
            return psi
        sched = self.schedule
        if sched.kind == "transfer":
            q0 = zero_energy_state(sched, 0.0)
            a, b = np.vdot(q0, psi), np.vdot(KET_0P, psi)
            th0, _ = sched.parameters_at(0.0)
            th, _ = sched.parameters_at(t)
            return a * np.exp(-0.5j * (th - th0)) * zero_energy_state(sched, t) + b * KET_0P
        a, b = np.vdot(KET_D, psi), np.vdot(KET_0P, psi)
        return a * KET_D + b * np.exp(1j * berry_phase(traversed_path(sched, t))) * zero_energy_state(sched, t)


def traversed_path(schedule: AdiabaticSchedule, t: float) -> list[tuple[float, float]]:
    """Waypoints passed by time t plus the current point; a jump counts once passed."""
    bounds = np.concatenate(([0.0], np.cumsum(schedule.segment_durations)))
    pts = [schedule.waypoints[0]]
    for k in range(len(schedule.waypoints) - 1):
        if t >= bounds[k + 1] and (k in schedule.jumps or bounds[k + 1] > bounds[k]):
            pts.append(schedule.waypoints[k + 1])
        else:
            break
    pts.append(schedule.parameters_at(t))
    return pts


def basic_protocol(omega: float, omega_g: float, qubit: str = "D", duration: float | None = None,
                   psi0=None, delta_phi_error: float = 0.0, delta_omega_mismatch: float = 0.0) -> GateProtocol:
    """Basic flip; default input is the qubit state itself, default duration a pi pulse."""
    q, _ = qubit_states(qubit)
    return GateProtocol("basic", omega, omega_g, duration or pi_pulse_time(omega_g),
                        q if psi0 is None else np.asarray(psi0, dtype=complex), qubit=_qubit_kind(qubit),
                        delta_phi_error=delta_phi_error, delta_omega_mismatch=delta_omega_mismatch)


def _equal_superposition(q):
    return (q + KET_0P) / SQ2


def transfer_protocol(omega: float, rate: float, start: str = "D", psi0=None, smooth: bool = False) -> GateProtocol:
    sched = transfer_schedule(rate, start, smooth)
    q, _ = qubit_states(start)
    psi = _equal_superposition(q) if psi0 is None else np.asarray(psi0, dtype=complex)
    return GateProtocol("transfer", omega, 0.0, sched.duration, psi, qubit=_qubit_kind(start), schedule=sched)


def sigmaz_protocol(omega: float, x: float, rate: float, psi0=None, smooth: bool = False) -> GateProtocol:
    sched = sigmaz_path(x, rate, smooth)
    psi = _equal_superposition(KET_D) if psi0 is None else np.asarray(psi0, dtype=complex)
    return GateProtocol("sigma-z", omega, omega, sched.duration, psi, schedule=sched)


def idle_protocol(omega: float, duration: float, qubit: str = "D") -> GateProtocol:
    """Dressing only; the ideal output is the input (used for dressed-state lifetimes)."""
    q, _ = qubit_states(qubit)
    return GateProtocol("idle", omega, 0.0, duration, q, qubit=_qubit_kind(qubit))


def relative_phase(psi, ref, other) -> float:
    """arg(<other|psi>) - arg(<ref|psi>)."""
    return float(np.angle(np.vdot(other, psi) * np.conj(np.vdot(ref, psi))))


# ------------------------------------------------------------ lifetime fits


@dataclass(frozen=True)
class LifetimeFit:
    t1: float
    ci_low: float
    ci_high: float
    floor: float


def _decay_time(times, pop, floor):
    y = (np.asarray(pop) - floor) / (1.0 - floor)
    ok = (y > 0) & (np.asarray(times) > 0)
    t, logy = np.asarray(times)[ok], np.log(y[ok])
    slope = np.dot(t, logy) / np.dot(t, t)  # least squares through the origin
    return -1.0 / slope if slope < 0 else math.inf


def fit_lifetime(times, populations, floor: float = 1.0 / 3.0, n_boot: int = 200, seed: int = 0,
                 level: float = 0.68) -> LifetimeFit:
    """Fit P(t) = floor + (1 - floor) exp(-t/T1) to the trajectory-averaged population.

    ``populations`` is (n_times, n_traj); the interval comes from a bootstrap
    over trajectories.  The default floor 1/3 is the value reached when
    classical noise fully mixes the qubit state with |u> and |d>.
    """
    p = np.asarray(populations, dtype=float)
    if p.ndim == 1:
        p = p[:, None]
    t1 = _decay_time(times, p.mean(axis=1), floor)
    rng = np.random.default_rng(seed)
    n = p.shape[1]
    boots = [_decay_time(times, p[:, rng.integers(0, n, n)].mean(axis=1), floor) for _ in range(n_boot)]
    lo, hi = np.quantile(boots, [(1 - level) / 2, (1 + level) / 2])
    return LifetimeFit(float(t1), float(lo), float(hi), floor)
