"""Two dressed ions sharing a centre-of-mass phonon mode: Molmer-Sorensen gate
planning, the full (untruncated in eta) Hamiltonian, Schrieffer-Wolff checks,
constraint ratios and analytic corrections.

Ordering is ion1 x ion2 x phonon; each ion uses the bare basis
(|-1>, |0>, |0'>, |1>).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.constants import hbar, physical_constants, atomic_mass
from scipy.linalg import expm

from .qops import destroy, tensor
from .single import KET_0P, KET_D, M1, P1, Z0, ZP, SIGMA_Z

MU_B = physical_constants["Bohr magneton"][0]
YB171_MASS = 170.936323 * atomic_mass
ION_DIM = 4
PAIR_DIM = ION_DIM * ION_DIM


@dataclass(frozen=True)
class TrapConfig:
    ion_mass: float = YB171_MASS
    magnetic_gradient: float = 46.0
    nu: float = 2 * math.pi * 500e3
    zeta: float = 1 / math.sqrt(2)
    fock_dim: int = 8
    initial_phonons: int = 0
    heating_rate: float = 0.0

    def __post_init__(self):
        if self.fock_dim < self.initial_phonons + 4:
            raise ValueError("fock_dim must be >= initial_phonons + 4")
        if not (self.nu > 0 and self.ion_mass > 0):
            raise ValueError("nu and ion_mass must be positive")
        if self.heating_rate < 0:
            raise ValueError("heating_rate must be non-negative")


@dataclass(frozen=True)
class MSPlan:
    R: int
    eta: float
    omega_g: float
    q: float
    T: float
    omega: float = 0.0
    delta_0: float = 0.0
    omega_z: float = 0.0
    delta_z: float = 0.0


@dataclass(frozen=True)
class ConstraintReport:
    jc_ratio: float
    resonance_ratio: float
    delta0_ratio: float
    linear_regime_ratio: float
    threshold: float = 0.05
    passes: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(self.passes.values())


def effective_eta(trap: TrapConfig) -> float:
    """eta = kappa/nu with kappa = (mu_B/hbar) * gradient * zeta * sqrt(hbar / (2 m nu))."""
    grad = MU_B / hbar * trap.magnetic_gradient
    kappa = grad * trap.zeta * math.sqrt(hbar / (2 * trap.ion_mass * trap.nu))
    return kappa / trap.nu


def ms_plan(R: int, eta: float, omega_g: float, omega: float = 0.0, delta_0: float = 0.0,
            omega_z: float = 0.0, delta_z: float = 0.0) -> MSPlan:
    """Gate time and sideband detuning closing the phonon loop R times."""
    if R < 1 or int(R) != R:
        raise ValueError("R must be a positive integer")
    if eta == 0:
        raise ZeroDivisionError("eta = 0: no spin-motion coupling (missing gradient?)")
    if eta < 0 or omega_g <= 0:
        raise ValueError("eta and omega_g must be positive")
    T = math.pi * math.sqrt(R) / (math.sqrt(2) * eta * omega_g)
    q = 2 * math.pi * R / T
    return MSPlan(int(R), eta, omega_g, q, T, omega, delta_0, omega_z, delta_z)


# ------------------------------------------------------------------ operators


def _ion_ops(plan: MSPlan):
    dress = np.zeros((ION_DIM, ION_DIM), complex)
    dress[Z0, M1] = dress[Z0, P1] = 0.5 * plan.omega
    dress = dress + dress.conj().T
    dress[Z0, Z0] += 2 * plan.delta_0
    rf = np.zeros((ION_DIM, ION_DIM), complex)
    rf[ZP, M1] = rf[P1, ZP] = 1.0
    rf = rf + rf.conj().T
    aux = np.zeros((ION_DIM, ION_DIM), complex)
    aux[Z0, ZP] = 0.5 * plan.omega_z
    return dress, rf, aux


def _two(op):
    i = np.eye(ION_DIM)
    return np.kron(op, i) + np.kron(i, op)


def charge_operator() -> np.ndarray:
    """sigma_z1 + sigma_z2 on the 16-dimensional pair space."""
    return _two(SIGMA_Z)


class TwoIonModel:
    """Cached operator pieces of the two-ion Hamiltonian.

    ``frame='lab'`` includes nu b^dag b and kappa Q (b + b^dag) with
    Q = sigma_z1 + sigma_z2.  ``frame='phonon'`` is the interaction picture
    with respect to nu b^dag b, where the gradient term picks up e^{+-i nu t}
    and the phonon energy disappears; this is the form propagated.
    ``mu`` adds a static magnetic offset mu*Q (common mode) or, when a pair is
    given, independent offsets per ion.
    """

    def __init__(self, plan: MSPlan, trap: TrapConfig, frame: str = "lab", mu=0.0):
        if frame not in ("lab", "phonon"):
            raise ValueError("frame must be 'lab' or 'phonon'")
        self.plan, self.trap, self.frame = plan, trap, frame
        n = trap.fock_dim
        self.fock_dim = n
        self.dim = PAIR_DIM * n
        dress, rf, aux = _ion_ops(plan)
        eye_f = np.eye(n)
        b = destroy(n)
        self.b = np.kron(np.eye(PAIR_DIM), b)
        self.bd = self.b.conj().T
        self.kappa = plan.eta * trap.nu
        mu1, mu2 = (mu, mu) if np.isscalar(mu) else mu
        magnetic = mu1 * np.kron(SIGMA_Z, np.eye(ION_DIM)) + mu2 * np.kron(np.eye(ION_DIM), SIGMA_Z)
        self.static = np.kron(_two(dress) + magnetic, eye_f)
        self.rf = np.kron(_two(rf), eye_f)
        self.aux = np.kron(_two(aux), eye_f)
        self.coupling = self.kappa * np.kron(charge_operator(), b.conj().T)  # kappa Q b^dag
        if frame == "lab":
            self.static = self.static + trap.nu * np.kron(np.eye(PAIR_DIM), b.conj().T @ b)
        self._sparse = None

    @property
    def omega_rf(self) -> float:
        return self.trap.nu + self.plan.q

    @property
    def omega_max(self) -> float:
        """Fastest rotation frequency appearing explicitly in the Hamiltonian."""
        return max(abs(self.plan.delta_z), self.omega_rf, self.trap.nu, 1.0)

    def _coefficients(self, t):
        c_rf = self.plan.omega_g * math.cos(self.omega_rf * t)
        c_aux = complex(math.cos(self.plan.delta_z * t), math.sin(self.plan.delta_z * t))
        c_ph = 1.0 if self.frame == "lab" else complex(math.cos(self.trap.nu * t), math.sin(self.trap.nu * t))
        return c_rf, c_aux, c_ph

    def hamiltonian(self, t: float) -> np.ndarray:
        c_rf, c_aux, c_ph = self._coefficients(t)
        off = c_aux * self.aux + c_ph * self.coupling
        return self.static + c_rf * self.rf + off + off.conj().T

    def sparse_hamiltonian(self, t: float) -> sparse.csr_matrix:
        """Same as :meth:`hamiltonian` but assembled on a fixed sparsity pattern."""
        if self._sparse is None:
            parts = [self.static, self.rf, self.aux, self.aux.conj().T, self.coupling, self.coupling.conj().T]
            pattern = sparse.csr_matrix(sum(np.abs(p) for p in parts) + 0.0)
            pattern.sort_indices()
            rows = np.repeat(np.arange(self.dim), np.diff(pattern.indptr))
            cols = pattern.indices
            self._sparse = (pattern.indptr, cols, [np.asarray(p[rows, cols]) for p in parts])
        indptr, cols, data = self._sparse
        c_rf, c_aux, c_ph = self._coefficients(t)
        vals = (data[0] + c_rf * data[1] + c_aux * data[2] + np.conj(c_aux) * data[3]
                + c_ph * data[4] + np.conj(c_ph) * data[5])
        return sparse.csr_matrix((vals, cols, indptr), shape=(self.dim, self.dim))


def two_ion_hamiltonian_at(t: float, plan: MSPlan, trap: TrapConfig, frame: str = "lab", mu=0.0) -> np.ndarray:
    return TwoIonModel(plan, trap, frame, mu).hamiltonian(t)


def pair_state(a, b, fock_dim: int, n: int = 0) -> np.ndarray:
    """|a> x |b> x |n> in the full space."""
    f = np.zeros(fock_dim, complex)
    f[n] = 1.0
    return tensor(np.asarray(a)[:, None], np.asarray(b)[:, None], f[:, None])[:, 0]


def bell_target() -> np.ndarray:
    """(|DD> + i|0'0'>)/sqrt2 on the 16-dimensional pair space."""
    return (np.kron(KET_D, KET_D) + 1j * np.kron(KET_0P, KET_0P)) / math.sqrt(2)


# ------------------------------------------------------------ analysis tools


def sw_transform(op, eta: float, charge_op, fock_dim: int | None = None) -> np.ndarray:
    """exp(S) op exp(-S) with S = eta * charge x (b^dag - b).

    ``charge_op`` lives on the spin space; the phonon dimension is inferred
    from the operator size unless given.
    """
    op = np.asarray(op, dtype=complex)
    q = np.asarray(charge_op, dtype=complex)
    n = fock_dim or op.shape[0] // q.shape[0]
    if q.shape[0] * n != op.shape[0]:
        raise ValueError("operator and charge dimensions are incompatible")
    b = destroy(n)
    s = eta * np.kron(q, b.conj().T - b)
    u = expm(s)
    return u @ op @ expm(-s)


def resonance_shift(eta: float, nu: float, omega: float) -> float:
    """Coefficient -2 eta^2 nu^3 / (2 nu^2 - Omega^2) of the resonant qubit-space terms."""
    den = 2 * nu**2 - omega**2
    if den == 0:
        raise ValueError("degenerate 2 nu^2 = Omega^2")
    return -2 * eta**2 * nu**3 / den


def constraint_report(plan: MSPlan, trap: TrapConfig, delta_zeeman: float, threshold: float = 0.05,
                      nu: float | None = None) -> ConstraintReport:
    nu = trap.nu if nu is None else nu
    eog = plan.eta * plan.omega_g
    jc = eog / nu
    res = plan.eta * nu / plan.omega_g
    d0 = plan.eta**2 * nu / plan.delta_0 if plan.delta_0 else math.inf
    lin = abs(delta_zeeman) / eog
    passes = {"jc": jc <= threshold, "resonance": res <= threshold, "delta0": d0 <= threshold,
              "linear_regime": lin <= threshold}
    return ConstraintReport(jc, res, d0, lin, threshold, passes)


def sigma_y_qubit() -> np.ndarray:
    """-i|D><0'| + i|0'><D| in the (|D>, |0'>) basis."""
    return np.array([[0, -1j], [1j, 0]])


def target_unitary() -> np.ndarray:
    """exp(-i pi/4 (1 + sy x sy)) on the two-qubit space ordered (DD, D0', 0'D, 0'0')."""
    yy = np.kron(sigma_y_qubit(), sigma_y_qubit())
    return np.exp(-0.25j * math.pi) * (math.cos(math.pi / 4) * np.eye(4) - 1j * math.sin(math.pi / 4) * yy)


def fidelity_oscillation(omega_g: float, q: float, nu: float, t, min_ratio: float = 5.0):
    """1 - (2 Omega_g^2/(q+nu)^2) sin^2((q+nu) t), the fast ripple on the Bell-state F^2."""
    w = q + nu
    if omega_g > 0 and w / omega_g < min_ratio:
        raise ValueError(f"(q+nu)/Omega_g = {w / omega_g:.3g} < {min_ratio}")
    return 1 - 2 * omega_g**2 / w**2 * np.sin(w * np.asarray(t, dtype=float)) ** 2


def oscillation_amplitude(omega_g: float, q: float, nu: float) -> float:
    return 2 * omega_g**2 / (q + nu) ** 2


# ---------------------------------------------------------------- simulation


PARAMS_KHZ = dict(omega=20.0, delta_0=2.0, omega_g=100.0, nu=500.0, omega_z=10.0, delta_z=1000.0)


def reference_setup(eta: float = 0.0071, R: int = 1, fock_dim: int = 8, heating_rate: float = 0.0):
    """The reference two-ion parameter set (frequencies in rad/s)."""
    k = {key: 2 * math.pi * 1e3 * v for key, v in PARAMS_KHZ.items()}
    trap = TrapConfig(nu=k["nu"], fock_dim=fock_dim, heating_rate=heating_rate)
    plan = ms_plan(R, eta, k["omega_g"], k["omega"], k["delta_0"], k["omega_z"], k["delta_z"])
    return plan, trap


@dataclass
class GateRun:
    times: np.ndarray
    bell_f2: np.ndarray
    dd_f2: np.ndarray
    pp_f2: np.ndarray
    coherence: np.ndarray  # rho_{DD, 0'0'}
    final_qubit_density: np.ndarray
    flags: list

    @property
    def final_f2(self) -> float:
        return float(self.bell_f2[-1])


def simulate_ms_gate(plan: MSPlan, trap: TrapConfig, dt: float = 1.5625e-8, heating_mode: str = "heating-only",
                     duration: float | None = None, record_stride: int = 1, mu=0.0,
                     force_density: bool = False) -> GateRun:
    """Propagate the gate from |DD>|n> in the phonon interaction picture (RK4).

    Without heating the state stays pure and a state vector is propagated;
    otherwise (or with ``force_density``) the full Lindblad equation is used.
    """
    from .propagate import HeatingModel, IntegratorConfig, evolve_open, evolve_pure
    from .qops import partial_trace_phonon

    model = TwoIonModel(plan, trap, frame="phonon", mu=mu)
    psi0 = pair_state(KET_D, KET_D, trap.fock_dim, trap.initial_phonons)
    bell = bell_target()
    dd = np.kron(KET_D, KET_D)
    pp = np.kron(KET_0P, KET_0P)
    n = trap.fock_dim

    def observe(state):
        r = partial_trace_phonon(state, PAIR_DIM, n)
        return np.array([np.vdot(bell, r @ bell), np.vdot(dd, r @ dd), np.vdot(pp, r @ pp), np.vdot(dd, r @ pp)])

    cfg = IntegratorConfig(dt=dt, method="rk4", record_stride=record_stride)
    span = (0.0, plan.T if duration is None else duration)
    if trap.heating_rate == 0 and not force_density:
        traj = evolve_pure(model.sparse_hamiltonian, psi0, span, cfg, omega_max=model.omega_max, observe=observe)
        top = np.abs(traj.final.reshape(PAIR_DIM, n)[:, -1]) ** 2
        if top.sum() > 1e-4:
            traj.flags.append(f"truncation saturation: top Fock population reached {top.sum():.3g}")
    else:
        traj = evolve_open(model.sparse_hamiltonian, np.outer(psi0, psi0.conj()),
                           HeatingModel(trap.heating_rate, heating_mode), (model.b, model.bd), span, cfg,
                           omega_max=model.omega_max, observe=observe)
    v = traj.values
    return GateRun(traj.times, v[:, 0].real, v[:, 1].real, v[:, 2].real, v[:, 3],
                   partial_trace_phonon(traj.final, PAIR_DIM, n), traj.flags)
