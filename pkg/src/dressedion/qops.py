"""Dense operator plumbing and the fidelity metrics shared by every experiment.

Operators and states are plain complex numpy arrays.  The thin wrappers
below exist for validation at construction time; every function accepts
raw arrays as well.  Units: hbar = 1, Hamiltonian entries in rad/s.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

MERIT_FLOOR = -16.0

HERMITIAN_RTOL = 1e-12
NORM_TOL = 1e-10


def _as_matrix(x) -> np.ndarray:
    return np.asarray(getattr(x, "entries", getattr(x, "matrix", x)), dtype=complex)


def _as_vector(x) -> np.ndarray:
    return np.asarray(getattr(x, "amplitudes", x), dtype=complex)


@dataclass(frozen=True, eq=False)
class ComplexOperator:
    entries: np.ndarray
    hamiltonian: bool = False

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        if self.hamiltonian and not is_hermitian(m):
            raise ValueError("Hamiltonian-tagged operator is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).ravel()
        if v.size == 0:
            raise ValueError("empty state")
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized (norm={np.linalg.norm(v):.12g})")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        v = np.asarray(amplitudes, dtype=complex).ravel()
        return cls(v / np.linalg.norm(v))

    def density(self) -> "MixedState":
        return MixedState(np.outer(self.amplitudes, self.amplitudes.conj()))

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)


@dataclass(frozen=True, eq=False)
class MixedState:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > 1e-8:
            raise ValueError(f"density matrix trace is {np.trace(m).real:.12g}")
        if np.linalg.eigvalsh(m).min() < -1e-8:
            raise ValueError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def is_hermitian(a, rtol: float = HERMITIAN_RTOL) -> bool:
    """Relative Frobenius-norm test of a == a^dagger."""
    m = _as_matrix(a)
    scale = np.linalg.norm(m)
    if scale == 0.0:
        return True
    return np.linalg.norm(m - m.conj().T) <= rtol * scale


def hermitian_from_upper(upper) -> np.ndarray:
    """Return U + U^dagger with the diagonal of ``upper`` counted once.

    Builders write the strictly-upper couplings plus the real diagonal and
    let this close the matrix, so the result is exactly Hermitian.
    """
    u = np.asarray(upper, dtype=complex)
    d = np.diag(np.diag(u).real)
    off = np.triu(u, 1)
    return off + off.conj().T + d


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with ``a``'s index outermost."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def tensor(*ops) -> np.ndarray:
    return reduce(np.kron, [_as_matrix(o) for o in ops])


def ket(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = _as_vector(v)
    return np.outer(v, v.conj())


def destroy(n: int) -> np.ndarray:
    """Truncated annihilation operator on an n-level Fock space."""
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex)


def number(n: int) -> np.ndarray:
    return np.diag(np.arange(n, dtype=float)).astype(complex)


def state_fidelity(target, rho) -> float:
    """F = sqrt(<target|rho|target>), clamped to [0, 1].

    ``rho`` may also be a state vector, in which case F = |<target|psi>|.
    """
    psi = _as_vector(target)
    r = np.asarray(getattr(rho, "matrix", getattr(rho, "amplitudes", rho)), dtype=complex)
    if r.ndim == 1:
        if r.size != psi.size:
            raise ValueError(f"dimension mismatch: {psi.size} vs {r.size}")
        return float(min(1.0, abs(np.vdot(psi, r))))
    if r.shape != (psi.size, psi.size):
        raise ValueError(f"dimension mismatch: {psi.size} vs {r.shape}")
    p = np.vdot(psi, r @ psi).real
    return float(np.sqrt(min(1.0, max(0.0, p))))


def merit(f: float, floor: float = MERIT_FLOOR) -> float:
    """Figure of merit log10(1 - F^2); F = 1 maps to ``floor``."""
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity {f} outside [0, 1]")
    infidelity = 1.0 - f * f
    if infidelity <= 10.0**floor:
        return floor
    return float(np.log10(infidelity))


def merit_from_infidelity(infidelity: float, floor: float = MERIT_FLOOR) -> float:
    """Same as :func:`merit` but from 1 - F^2 directly, avoiding cancellation."""
    if infidelity <= 10.0**floor:
        return floor
    return float(np.log10(infidelity))


def partial_trace_phonon(rho, qubit_dim: int, fock_dim: int) -> np.ndarray:
    """Trace out the trailing phonon factor of a (qubit x phonon) operator.

    Accepts a density matrix or a pure state vector.
    """
    r = np.asarray(getattr(rho, "matrix", getattr(rho, "amplitudes", rho)), dtype=complex)
    n = qubit_dim * fock_dim
    if r.ndim == 1:
        if r.size != n:
            raise ValueError(f"state dim {r.size} != {qubit_dim}*{fock_dim}")
        v = r.reshape(qubit_dim, fock_dim)
        return v @ v.conj().T
    if r.shape != (n, n):
        raise ValueError(f"operator dim {r.shape} != {qubit_dim}*{fock_dim}")
    return np.einsum("ikjk->ij", r.reshape(qubit_dim, fock_dim, qubit_dim, fock_dim))
