"""Zeeman-regime bookkeeping for a 171Yb+-like hyperfine structure.

The second-order Zeeman shift makes the |0'> <-> |+-1> transitions differ
by Delta = 2 (mu_B B)^2 / A.  Whether one RF field can drive both legs
(linear regime) or each leg is addressed separately (non-linear regime)
depends on how Delta compares with the RF couplings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.constants import hbar, physical_constants

MU_B_OVER_HBAR = physical_constants["Bohr magneton"][0] / hbar
FIELD_LIMIT_T = 0.45  # upper bound on B for the linear-regime argument


@dataclass(frozen=True)
class IonSpecies:
    hyperfine_splitting: float = 2 * math.pi * 12.6e9
    bohr_response: float = MU_B_OVER_HBAR

    def __post_init__(self):
        if not (self.hyperfine_splitting > 0 and self.bohr_response > 0):
            raise ValueError("hyperfine_splitting and bohr_response must be positive")


YB171 = IonSpecies()


@dataclass(frozen=True)
class RegimeReport:
    regime: str
    rf_margin: float  # Omega_g / Delta
    sideband_margin: float  # eta Omega_g / Delta
    nonlinear_margin: float  # Delta / Omega_g
    field_margin: float  # B / 0.45 T


def zeeman_gap(species: IonSpecies, b_field: float) -> float:
    """Delta = 2 (mu_B B / hbar)^2 / A in rad/s; B in tesla."""
    if b_field < 0:
        raise ValueError("b_field must be non-negative")
    return 2 * (species.bohr_response * b_field) ** 2 / species.hyperfine_splitting


def _ratio(a, b):
    if b == 0:
        return math.inf if a > 0 else 0.0
    return a / b


def classify(omega_g: float, eta_omega_g: float, delta: float, b_field: float = 0.0,
             threshold: float = 10.0) -> RegimeReport:
    """Linear if both Omega_g and eta*Omega_g exceed Delta by ``threshold``,
    non-linear if Delta exceeds Omega_g by ``threshold``, otherwise intermediate."""
    d = abs(delta)
    rf, sb, nl = _ratio(omega_g, d), _ratio(eta_omega_g, d), _ratio(d, omega_g)
    if rf >= threshold and sb >= threshold:
        regime = "linear"
    elif nl >= threshold:
        regime = "nonlinear"
    else:
        regime = "intermediate"
    return RegimeReport(regime, rf, sb, nl, b_field / FIELD_LIMIT_T)


def dressed_delta(species: IonSpecies, b_field: float, omega_z: float, delta_z: float, omega: float,
                  min_ratio: float = 10.0) -> float:
    """Zeeman gap plus the Stark term delta_z Omega_z^2 / (Omega^2 - 2 delta_z^2) from a detuned
    |0> <-> |0'> field under dressing."""
    base = zeeman_gap(species, b_field)
    if omega_z == 0:
        return base
    ratio = min(abs(omega + math.sqrt(2) * delta_z), abs(omega - math.sqrt(2) * delta_z)) / omega_z
    if ratio < min_ratio:
        raise ValueError(f"|Omega +- sqrt2 delta_z| / Omega_z = {ratio:.3g} < {min_ratio}")
    return base + delta_z * omega_z**2 / (omega**2 - 2 * delta_z**2)
