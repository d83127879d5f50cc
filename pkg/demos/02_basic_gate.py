"""
Basic sigma_y gate on the D-qubit
=================================

An RF field resonant with |0'> <-> |+-1> rotates |D> into |0'>.  Without
noise the gate is exact; with the "red" noise row the infidelity falls as the
dressing gets stronger and then settles on the RF-amplitude floor.
"""
import math

from dressedion.noise import preset
from dressedion.propagate import IntegratorConfig, run_ensemble
from dressedion.single import basic_protocol, pi_pulse_time

KHZ = 2 * math.pi * 1e3
omega_g = 1.1785 * KHZ
print(f"pi pulse time: {pi_pulse_time(omega_g) * 1e3:.4f} ms")

# noise free at 500 kHz: the merit hits the numerical floor
proto = basic_protocol(500 * KHZ, omega_g)
cfg = IntegratorConfig(0.1 / proto.omega_max)
print("noise free M:", round(run_ensemble(proto, preset("black"), 1, 0, cfg).merit, 2))

# red row, 30 trajectories each, OU tracks switched on with the gate
for om in (50, 158, 500):
    proto = basic_protocol(om * KHZ, omega_g)
    res = run_ensemble(proto, preset("red"), 30, 2024, IntegratorConfig(0.1 / proto.omega_max), ou_start="rest")
    print(f"Omega = {om:4d} kHz   M = {res.merit:.2f} +- {res.sem / res.infidelity / math.log(10):.2f}")
