"""Two-beam interference for a loop built on an R:T fiber coupler.

A coupler with power splitting ratio r sends fractions R = r and T = 1 - r
around the two arms; the recombined output power is

    I(dphi) = R**2 + T**2 + 2*R*T*cos(dphi)

normalized so the constructive peak (dphi = 0) is exactly 1.  The floor at
dphi = pi is (R - T)**2, which sets the best attainable extinction ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CouplingRatio:
    """Power splitting ratio of the loop coupler, r in [0.5, 1)."""

    r: float

    def __post_init__(self) -> None:
        if not 0.5 <= self.r < 1.0:
            raise ValueError(f"coupling ratio r={self.r} outside [0.5, 1)")

    @property
    def t(self) -> float:
        return 1.0 - self.r


@dataclass(frozen=True)
class ExtinctionRatio:
    """Extinction ratio in dB; db=None marks the unbounded r = 0.5 case."""

    db: float | None

    def __post_init__(self) -> None:
        if self.db is not None and not (self.db >= 0.0 and math.isfinite(self.db)):
            raise ValueError(f"extinction ratio {self.db} dB is not finite and >= 0")

    @property
    def is_unbounded(self) -> bool:
        return self.db is None


UNBOUNDED = ExtinctionRatio(None)


def interference_intensity(coupling: CouplingRatio, dphi):
    """Output power for phase difference dphi (radians, scalar or array)."""
    r, t = coupling.r, coupling.t
    return r * r + t * t + 2.0 * r * t * np.cos(dphi)


def complementary_port_intensity(coupling: CouplingRatio, dphi):
    """Power at the other coupler port; the two ports sum to 1 exactly."""
    return 1.0 - interference_intensity(coupling, dphi)


def max_extinction_ratio_db(coupling: CouplingRatio) -> ExtinctionRatio:
    """Best attainable extinction ratio, -20*log10(|2r - 1|).

    A balanced coupler (r = 0.5) nulls completely, so the ratio is
    unbounded; that case is returned as the distinguished UNBOUNDED value
    rather than a floating-point infinity.
    """
    imbalance = abs(2.0 * coupling.r - 1.0)
    if imbalance == 0.0:
        return UNBOUNDED
    return ExtinctionRatio(-20.0 * math.log10(imbalance))


def coupling_from_extinction_db(er: ExtinctionRatio) -> CouplingRatio:
    """Invert the design law, taking the r >= 0.5 branch.

    Useful for turning a measured extinction ratio into the effective
    splitting ratio of an imperfect device.
    """
    if er.is_unbounded:
        return CouplingRatio(0.5)
    return CouplingRatio((1.0 + 10.0 ** (-er.db / 20.0)) / 2.0)


def mzm_transmission(volts: float, v_dc: float, coupling: CouplingRatio, v_pi: float):
    """Mach-Zehnder transfer: dphi = pi*(v + v_dc)/v_pi applied to the coupler."""
    if v_pi <= 0.0:
        raise ValueError(f"v_pi={v_pi} must be positive")
    dphi = math.pi * (np.asarray(volts, dtype=float) + v_dc) / v_pi
    return interference_intensity(coupling, dphi)


def small_signal_sensitivity(coupling: CouplingRatio, dphi):
    """dI/d(dphi); zero at the interference extremes, maximal at quadrature."""
    return -2.0 * coupling.r * coupling.t * np.sin(dphi)
