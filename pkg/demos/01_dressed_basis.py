"""
Dressed states of a single ion
==============================

Two equal microwave fields couple |0> to |+-1>.  The bright combination
|B> splits into |u>, |d> at +-Omega/sqrt2 while |D> stays at zero energy,
which is what protects it from magnetic noise.
"""
import math

import numpy as np

from dressedion.single import SIGMA_Z, DressedFrame, SingleQubitFields, hamiltonian_at, to_dressed

KHZ = 2 * math.pi * 1e3
omega = 100 * KHZ

# bare Hamiltonian with dressing only, energies in kHz
h = hamiltonian_at(0.0, SingleQubitFields(omega_minus=omega, omega_plus=omega))
print("eigenvalues / 2pi (kHz):", np.round(np.linalg.eigvalsh(h) / KHZ, 4))

# in the dressed frame (u, d, D, 0') the Hamiltonian is diagonal
frame = DressedFrame.for_qubit("D")
print("dressed-frame diagonal / 2pi (kHz):", np.round(np.diag(to_dressed(frame, h)).real / KHZ, 4))

# magnetic noise mu*sigma_z only connects |D> to the gapped pair |u>, |d>
print("sigma_z in the dressed frame:")
print(np.round(to_dressed(frame, SIGMA_Z).real, 4))
