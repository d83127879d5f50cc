"""
Ornstein-Uhlenbeck noise
========================

Magnetic and Rabi-frequency fluctuations are OU processes with a Lorentzian
spectrum.  The update is exact for any step, so statistics do not depend on
the sampling grid.
"""
import math

import numpy as np

from dressedion.noise import OUParams, autocorrelation, periodogram, sample_trajectory, spectral_density

p = OUParams(relaxation_time=1e-3, stationary_sd=2 * math.pi * 100)
dt = p.relaxation_time / 100
x = sample_trajectory(p, dt, 1_000_000, seed=1).samples
print(f"sample SD / expected: {np.std(x) / p.stationary_sd:.4f}")
print(f"autocorrelation at lag tau: {autocorrelation(x, 100):.4f} (e^-1 = {math.exp(-1):.4f})")

# averaged periodogram against the Lorentzian
rows = np.stack([sample_trajectory(p, dt, 2**14, seed=1, stream_id=k + 1).samples for k in range(50)])
w, s = periodogram(rows, dt)
for target in (0.1, 1.0, 10.0):
    band = (w > 0.8 * target / p.relaxation_time) & (w < 1.25 * target / p.relaxation_time)
    print(f"w tau ~ {target:5}: periodogram / Lorentzian = {s[band].mean() / spectral_density(p, w[band]).mean():.3f}")
