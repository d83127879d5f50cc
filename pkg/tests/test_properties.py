"""Property suites: Hermiticity, unitarity/norm, trace/positivity, determinism,
Fock convergence and Berry-phase additivity.  Runnable on their own with
``pytest tests/test_properties.py``."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dressedion.noise import preset
from dressedion.propagate import HeatingModel, IntegratorConfig, evolve_open, evolve_pure, run_ensemble
from dressedion.qops import destroy, is_hermitian
from dressedion.single import (SingleQubitFields, basic_gate_fields, basic_protocol, berry_phase, hamiltonian_at,
                               sigmaz_protocol, transfer_protocol)
from dressedion.two_ion import TwoIonModel, reference_setup, simulate_ms_gate

KHZ = 2 * math.pi * 1e3
freq = st.floats(0.0, 2e7)
phase = st.floats(-10.0, 10.0)
small = st.floats(-1e5, 1e5)


@settings(max_examples=200, deadline=None)
@given(freq, freq, phase, phase, freq, phase, phase, small, small, freq, phase, small, small, small,
       st.floats(0, 1e-3), small, small, small)
def test_single_ion_hamiltonian_hermitian(om, op, tm, tp, og, pm, pp, dm, dp, oz, tz, dz, mis, dphi, t, mu, dw, dwg):
    f = SingleQubitFields(om, op, tm, tp, og, pm, pp, dm, dp, oz, tz, dz, mis, dphi)
    assert is_hermitian(hamiltonian_at(t, f, mu, dw, dwg))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 1e-3), st.sampled_from(["lab", "phonon"]), st.floats(-1e4, 1e4))
def test_two_ion_hamiltonian_hermitian(t, frame, mu):
    plan, trap = reference_setup(fock_dim=5)
    assert is_hermitian(TwoIonModel(plan, trap, frame, mu).hamiltonian(t))


@settings(max_examples=15, deadline=None)
@given(st.floats(50.0, 1000.0), st.floats(0.5, 5.0), st.sampled_from(["D", "B"]))
def test_basic_gate_preserves_norm(om_khz, og_khz, qubit):
    proto = basic_protocol(om_khz * KHZ, og_khz * KHZ, qubit)
    cfg = IntegratorConfig(0.1 / proto.omega_max)
    tr = evolve_pure(proto.hamiltonian, proto.psi0, (0, proto.duration), cfg, omega_max=proto.omega_max)
    assert np.linalg.norm(tr.final) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=10, deadline=None)
@given(st.floats(200.0, 1000.0), st.sampled_from(["transfer", "sigma-z"]))
def test_adiabatic_rk4_norm(om_khz, kind):
    proto = (transfer_protocol(om_khz * KHZ, 31.416e3) if kind == "transfer"
             else sigmaz_protocol(om_khz * KHZ, math.pi, 47.124e3))
    cfg = IntegratorConfig(0.1 / proto.omega_max, "rk4")
    tr = evolve_pure(proto.hamiltonian, proto.psi0, (0, proto.duration), cfg, omega_max=proto.omega_max)
    assert np.linalg.norm(tr.final) == pytest.approx(1.0, abs=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 1e4), st.sampled_from(["heating-only", "infinite-temperature"]), st.integers(0, 2**31 - 1))
def test_lindblad_trace_and_positivity(rate, mode, seed):
    # full-rank start: RK4 is not positivity preserving at the rank-deficient boundary
    rng = np.random.default_rng(seed)
    fock = 6
    n = 2 * fock
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 1e4 * (a + a.conj().T)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    v /= np.linalg.norm(v)
    rho0 = 0.9 * np.outer(v, v.conj()) + 0.1 * np.eye(n) / n
    b = np.kron(np.eye(2), destroy(fock))
    omax = np.abs(np.linalg.eigvalsh(h)).max()
    tr = evolve_open(lambda t: h, rho0, HeatingModel(rate, mode), (b, b.conj().T), (0, 5e-5),
                     IntegratorConfig(0.05 / omax, "rk4"), omega_max=omax)
    for rho in tr.values:
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
        assert np.linalg.eigvalsh(rho).min() > 0.0
        assert is_hermitian(rho)
        assert np.trace(rho @ rho).real <= 1.0 + 1e-10


def test_ensemble_determinism():
    proto = basic_protocol(200 * KHZ, 1.1785 * KHZ)
    cfg = IntegratorConfig(0.1 / proto.omega_max)
    runs = [run_ensemble(proto, preset("blue-dashed"), 5, 1234, cfg, chunk=c) for c in (1, 2, 5)]
    for r in runs[1:]:
        assert np.array_equal(r.mean_density, runs[0].mean_density)
        assert np.array_equal(r.final_infidelities, runs[0].final_infidelities)


def test_fock_convergence():
    plan, _ = reference_setup()
    f8 = simulate_ms_gate(plan, reference_setup(fock_dim=8)[1]).final_f2
    f12 = simulate_ms_gate(plan, reference_setup(fock_dim=12)[1]).final_f2
    assert abs(f8 - f12) < 1e-4


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-2, 2)), min_size=2, max_size=10), st.data())
def test_berry_phase_additivity(path, data):
    cut = data.draw(st.integers(0, len(path) - 1))
    left, right = path[:cut + 1], path[cut:]
    parts = (berry_phase(left) if len(left) > 1 else 0.0) + (berry_phase(right) if len(right) > 1 else 0.0)
    assert berry_phase(path) == pytest.approx(parts, abs=1e-11)
    closed = path + [path[0]]
    shifted = [(a + 1.7, b) for a, b in closed]
    assert berry_phase(shifted) == pytest.approx(berry_phase(closed), abs=1e-11)


def test_basic_fields_hermitian_examples():
    for q in ("D", "B"):
        assert is_hermitian(hamiltonian_at(1e-4, basic_gate_fields(q, 1e6, 1e4), mu=300.0))
