"""
Zeeman regimes and Stark-shift sigma_z gates
============================================

The second-order Zeeman shift splits the two RF legs by Delta.  Whether that
splitting is small or large against the RF couplings decides the regime.
Two Stark-shift gates give a sigma_z rotation without an adiabatic loop.
"""
import math

from dressedion.experiments import stark_run
from dressedion.regimes import YB171, classify, dressed_delta, zeeman_gap

KHZ = 2 * math.pi * 1e3
for gauss in (1.0, 9.8, 50.0):
    d = zeeman_gap(YB171, gauss * 1e-4)
    rep = classify(1.9 * KHZ, 0.0071 * 1.9 * KHZ, d)
    print(f"B = {gauss:5.1f} G: Delta/2pi = {d / KHZ:8.3f} kHz -> {rep.regime}")

print("dressed-field Delta/2pi at B = 0:",
      round(dressed_delta(YB171, 0.0, 10 * KHZ, 1000 * KHZ, 20 * KHZ) / (2 * math.pi), 2), "Hz")

# detuned |0> <-> |0'> field under dressing, and the two-RF variant
pred, meas, f = stark_run("dressed", 20 * KHZ, 1e-3, omega_z=10 * KHZ, delta_z=1000 * KHZ)
print(f"dressed Stark: predicted {pred:.2f} rad/s, measured {meas:.2f} rad/s, F = {f:.6f}")
pred, meas, f = stark_run("rf", 100 * KHZ, 1e-3, omega_g=1 * KHZ, delta=20 * KHZ)
print(f"RF Stark:      predicted {pred:.2f} rad/s, measured {meas:.2f} rad/s, F = {f:.6f}")
