import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dressedion.propagate import IntegratorConfig, evolve_pure
from dressedion.qops import is_hermitian
from dressedion.single import (KET_0, KET_0P, KET_B, KET_D, KET_M1, KET_P1, SIGMA_Z, DressedFrame,
                               SingleQubitFields, basic_gate_fields, basic_protocol, berry_phase, fit_lifetime,
                               from_dressed, gradient_shift, hamiltonian_at, ideal_basic_gate, noise_budget,
                               pi_pulse_time, relative_phase, sigmaz_path, sigmaz_protocol, stark_sigmaz_fields,
                               to_dressed, transfer_protocol, transfer_schedule, zero_energy_state)

KHZ = 2 * math.pi * 1e3


def run_protocol(proto, dt_factor=0.1, **kw):
    cfg = IntegratorConfig(dt=dt_factor / proto.omega_max, **kw)
    return evolve_pure(proto.hamiltonian, proto.psi0, (0.0, proto.duration), cfg, omega_max=proto.omega_max)


def test_basic_gate_spectrum():
    om, og = 500 * KHZ, 1.1785 * KHZ
    h = hamiltonian_at(0.0, basic_gate_fields("D", om, og))
    w = np.sort(np.linalg.eigvalsh(h))
    expected = np.sort([om / math.sqrt(2), -om / math.sqrt(2), og / math.sqrt(2), -og / math.sqrt(2)])
    assert np.allclose(w, expected, rtol=1e-12, atol=1e-6)


def test_hamiltonian_noise_terms():
    h = hamiltonian_at(0.0, SingleQubitFields(), mu=3.0)
    assert np.allclose(h, 3.0 * SIGMA_Z)
    f = basic_gate_fields("D", 100 * KHZ, 2 * KHZ)
    for kw in (dict(mu=5.0), dict(d_omega=7.0), dict(d_omega_g=11.0)):
        assert is_hermitian(hamiltonian_at(1e-5, f, **kw))


def test_b_qubit_coupling_is_real():
    og = 2 * KHZ
    f = basic_gate_fields("B", 100 * KHZ, og)
    hd = to_dressed(DressedFrame.for_qubit("B"), hamiltonian_at(0.0, f))
    assert hd[2, 3] == pytest.approx(og / math.sqrt(2))
    assert abs(hd[2, 0]) < 1e-9 and abs(hd[2, 1]) < 1e-9


def test_dressed_frame_round_trip():
    frame = DressedFrame.for_qubit("D")
    v = frame.basis_map
    assert np.allclose(v.conj().T @ v, np.eye(4))
    coords = to_dressed(frame, KET_M1)
    assert np.allclose(np.abs(coords), [0.5, 0.5, 1 / math.sqrt(2), 0])
    rng = np.random.default_rng(0)
    x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.allclose(from_dressed(frame, to_dressed(frame, x)), x)
    psi = rng.normal(size=4) + 0j
    assert np.allclose(from_dressed(frame, to_dressed(frame, psi)), psi)
    with pytest.raises(ValueError):
        DressedFrame.for_qubit("X")


def test_dressed_eigenvectors():
    om = 100 * KHZ
    h = hamiltonian_at(0.0, SingleQubitFields(omega_minus=om, omega_plus=om))
    hd = to_dressed(DressedFrame.for_qubit("D"), h)
    assert np.allclose(hd, np.diag([om / math.sqrt(2), -om / math.sqrt(2), 0, 0]), atol=1e-6)


def test_magnetic_noise_only_couples_qubit_to_dressed_pair():
    hd = to_dressed(DressedFrame.for_qubit("D"), SIGMA_Z)
    assert np.allclose(hd[2, :2], [-1 / math.sqrt(2)] * 2)
    assert abs(hd[2, 2]) < 1e-15 and abs(hd[2, 3]) < 1e-15
    assert np.allclose(hd[3], 0)


def test_pi_pulse_time_example():
    assert pi_pulse_time(1.1785 * KHZ) == pytest.approx(0.3e-3, rel=1e-3)
    u = ideal_basic_gate("D", 1.1785 * KHZ, pi_pulse_time(1.1785 * KHZ))
    assert abs(np.vdot(KET_0P, u @ KET_D)) == pytest.approx(1.0)


def test_zero_rf_leaves_qubit_states_dark():
    h = hamiltonian_at(0.0, SingleQubitFields(omega_minus=1e5, omega_plus=1e5))
    assert np.allclose(h @ KET_D, 0) and np.allclose(h @ KET_0P, 0)
    with pytest.raises(ValueError):
        basic_gate_fields("D", 1e5, 0.0)


def test_basic_gate_matches_ideal():
    proto = basic_protocol(500 * KHZ, 1.1785 * KHZ)
    traj = run_protocol(proto)
    f2 = abs(np.vdot(proto.ideal_at(proto.duration), traj.final)) ** 2
    assert 1 - f2 < 1e-8


def test_basic_gate_phase_error_is_quadratic():
    # leakage into |B> carries the delta_phi^2 term; the cos(delta_phi) rescaling is fourth order
    om, og = 50 * KHZ, 5 * KHZ

    def infidelity(e):
        proto = basic_protocol(om, og, delta_phi_error=e)
        traj = run_protocol(proto)
        return 1 - abs(np.vdot(proto.ideal_at(proto.duration), traj.final)) ** 2

    base = infidelity(0.0)
    errs = np.array([0.005, 0.0158, 0.05])
    extra = np.array([infidelity(e) - base for e in errs])
    slope = np.polyfit(np.log(errs), np.log(extra), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.2)


def test_transfer_schedule_and_phase():
    sched = transfer_schedule(31.416e3)
    assert sched.duration == pytest.approx(1e-4, rel=1e-4)
    assert np.allclose(zero_energy_state(sched, sched.duration), KET_B)
    proto = transfer_protocol(300 * KHZ, 5e3)
    traj = run_protocol(proto)
    amp_b, amp_p = np.vdot(KET_B, traj.final), np.vdot(KET_0P, traj.final)
    assert abs(amp_b) ** 2 > 0.4995
    assert float(np.angle(amp_b / amp_p)) == pytest.approx(-math.pi / 2, abs=1e-2)


def test_transfer_envelope_shrinks_with_rate():
    def worst(rate):
        out = []
        for om in np.array([150.0, 200.0, 250.0, 300.0]) * KHZ:
            p = transfer_protocol(om, rate)
            tr = run_protocol(p)
            out.append(1 - abs(np.vdot(p.ideal_at(p.duration), tr.final)) ** 2)
        return max(out)

    assert worst(31.416e3 / 2) < worst(31.416e3)


def test_sigmaz_path_phase():
    sched = sigmaz_path(math.pi, 47.124e3)
    assert sched.duration == pytest.approx((math.pi + math.pi / 2 + math.pi / 2) / 47.124e3)
    assert berry_phase(sched.waypoints) == pytest.approx(-math.pi)
    proto = sigmaz_protocol(500 * KHZ, 1.0, 10e3)
    traj = run_protocol(proto)
    assert relative_phase(traj.final, KET_D, KET_0P) == pytest.approx(-1.0, abs=1e-2)
    with pytest.raises(ValueError):
        sigmaz_path(7.0, 1e3)
    with pytest.raises(ValueError):
        sigmaz_path(0.0, 1e3)


def test_berry_phase_examples():
    assert berry_phase([(0, 0), (1, 0)]) == pytest.approx(1.0)
    assert berry_phase([(0, math.pi / 2), (1, math.pi / 2)]) == pytest.approx(0.0)
    assert berry_phase([(0, 0), (0, 1)]) == 0.0
    # the diagonal segment integrates cos^2 along the line
    r1 = np.linspace(0, 1, 20001)
    num = np.trapezoid(np.cos(0.5 * r1) ** 2, r1)
    assert berry_phase([(0, 0), (1, 0.5)]) == pytest.approx(num, rel=1e-8)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-3, 3), st.floats(0, math.pi / 2)), min_size=3, max_size=8),
       st.integers(1, 6))
def test_berry_phase_additive_and_antisymmetric(path, cut):
    cut = min(cut, len(path) - 2)
    whole = berry_phase(path)
    split = berry_phase(path[:cut + 1]) + berry_phase(path[cut:])
    assert whole == pytest.approx(split, abs=1e-12)
    assert berry_phase(path[::-1]) == pytest.approx(-whole, abs=1e-12)


def test_stark_fields_examples():
    _, shift = stark_sigmaz_fields("dressed", omega=20 * KHZ, omega_z=10 * KHZ, delta_z=1000 * KHZ)
    assert shift / (2 * math.pi) == pytest.approx(-25.0, rel=2e-3)
    _, shift_rf = stark_sigmaz_fields("rf", omega=100 * KHZ, omega_g=1 * KHZ, delta=20 * KHZ)
    assert shift_rf / (2 * math.pi) == pytest.approx(25.0, rel=1e-12)
    assert stark_sigmaz_fields("dressed", omega=20 * KHZ, delta_z=1000 * KHZ)[1] == 0.0
    with pytest.raises(ValueError):
        stark_sigmaz_fields("dressed", omega=20 * KHZ, omega_z=10 * KHZ, delta_z=20 * KHZ)
    with pytest.raises(ValueError):
        stark_sigmaz_fields("rf", omega=100 * KHZ, omega_g=10 * KHZ, delta=20 * KHZ)


def test_noise_budget_basic():
    om = 500 * KHZ
    b = noise_budget("basic", om, 1.1785 * KHZ, 0.0, math.sqrt(2) * 0.01 * om)
    assert b.second_order_shift == 0.0
    assert b.constraint_margin["delta_omega"] == pytest.approx(70.7, rel=1e-2)
    assert b.gate_coupling_correction > 0
    with pytest.raises(ValueError):
        noise_budget("basic", 1.0, 1.0, 1.0, 1.0)


def test_noise_budget_sigmaz_has_interior_minimum():
    oms = np.logspace(3, 6.8, 200)
    totals = [noise_budget("sigma-z", om, om, 2 * math.pi * 500, math.sqrt(2) * 0.05 * om).total for om in oms]
    k = int(np.argmin(totals))
    assert 0 < k < len(oms) - 1


def test_gradient_shift():
    assert gradient_shift(0.0071, 2 * math.pi * 500e3) == pytest.approx(-(0.0071**2) * 2 * math.pi * 500e3)


def test_fit_lifetime_recovers_decay():
    t = np.linspace(0, 0.05, 101)
    p = 1 / 3 + 2 / 3 * np.exp(-t / 1.7)
    fit = fit_lifetime(t, np.tile(p[:, None], (1, 5)))
    assert fit.t1 == pytest.approx(1.7, rel=1e-6)
    assert fit.ci_low <= fit.t1 <= fit.ci_high


def test_ideal_states_are_normalized():
    for proto in (transfer_protocol(1e6, 3e4), sigmaz_protocol(1e6, 2.0, 3e4), basic_protocol(1e6, 1e4)):
        for t in np.linspace(0, proto.duration, 7):
            assert np.linalg.norm(proto.ideal_at(t)) == pytest.approx(1.0)
    assert np.allclose(np.abs(KET_0), KET_0)  # basis constant sanity
    assert np.vdot(KET_D, KET_P1) == pytest.approx(-1 / math.sqrt(2))
