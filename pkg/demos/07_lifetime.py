"""
Lifetime of the dressed state |D>
=================================

Under magnetic and microwave-amplitude noise |D> slowly mixes with |u> and
|d>.  Fitting P_D(t) = 1/3 + 2/3 exp(-t/T1) to a short horizon gives T1.
This reduced run (20 trajectories, 20 ms) takes about 10 s; the preset
d-lifetime runs 50 x 50 ms.
"""
import math

import numpy as np

from dressedion.noise import NoisePreset
from dressedion.propagate import IntegratorConfig, run_ensemble
from dressedion.single import KET_D, fit_lifetime, idle_protocol

noise = NoisePreset("lifetime", 2 * math.pi * 100, 0.1e-3, 0.01, 3.2e-3, 20)
proto = idle_protocol(2 * math.pi * 36.5e3, 20e-3)
res = run_ensemble(proto, noise, 20, 2024, IntegratorConfig(0.1 / proto.omega_max), record_every=0.5e-3,
                   ou_start="rest")
pops = np.abs(res.states @ KET_D.conj()) ** 2
fit = fit_lifetime(res.times, pops)
print(f"P_D at {res.times[-1] * 1e3:.0f} ms: {pops[-1].mean():.5f}")
print(f"T1 = {fit.t1:.2f} s (68% bootstrap interval {fit.ci_low:.2f} - {fit.ci_high:.2f} s)")
