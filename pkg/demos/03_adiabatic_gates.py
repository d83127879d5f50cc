"""
Adiabatic transfer and the geometric sigma_z gate
=================================================

Ramping the microwave phase theta_+ from 0 to pi carries |D> into |B>
with a phase -pi/2.  Walking the closed loop A-B-C-D in the (R1, R2) plane
imprints a Berry phase -x on |0'> relative to |D>.
"""
import math

import numpy as np

from dressedion.propagate import IntegratorConfig, evolve_pure
from dressedion.single import (KET_0P, KET_B, KET_D, berry_phase, relative_phase, sigmaz_path, sigmaz_protocol,
                               transfer_protocol)

KHZ = 2 * math.pi * 1e3


def run(proto):
    cfg = IntegratorConfig(0.1 / proto.omega_max)
    return evolve_pure(proto.hamiltonian, proto.psi0, (0, proto.duration), cfg, omega_max=proto.omega_max).final


# transfer: input (|D> + |0'>)/sqrt2, output (-i|B> + |0'>)/sqrt2
psi = run(transfer_protocol(500 * KHZ, 31.416e3))
print("transfer phase of |B> vs |0'>:", round(relative_phase(psi, KET_0P, KET_B), 4), "(expect -pi/2)")

# the Berry phase of the closed path equals -x
for x in (math.pi / 2, math.pi, 2.0):
    print(f"x = {x:.4f}: Berry phase of the path {berry_phase(sigmaz_path(x, 1e4).waypoints):.4f}")

# the simulated gate reproduces it
psi = run(sigmaz_protocol(1000 * KHZ, math.pi, 47.124e3))
print("sigma_z phase on |0'>:", round(relative_phase(psi, KET_D, KET_0P), 4), "(expect -pi)")
print("populations D, 0':", np.round(np.abs([np.vdot(KET_D, psi), np.vdot(KET_0P, psi)]) ** 2, 5))
