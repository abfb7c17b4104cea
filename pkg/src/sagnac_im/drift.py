"""Slow bias drift and long-term power stability.

An unstabilized Mach-Zehnder sits at some point on its interference fringe
and wanders: the bias phase is modelled as a Wiener process starting at
quadrature, so the transmitted power drifts over the full fringe on long
timescales.  The Sagnac loop has no bias point to lose; its residual
sensitivity comes from imperfect polarization alignment, modelled as a
scalar leak fraction epsilon of Mach-Zehnder-like response mixed into an
otherwise constant output.  Both simulations share one drift path so the
comparison isolates the architecture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .interference import CouplingRatio, interference_intensity

QUADRATURE_PHASE = math.pi / 2.0


@dataclass(frozen=True)
class DriftSpec:
    """Wiener-process bias drift: increments N(0, sigma**2 * dt)."""

    sigma_rad_per_sqrt_s: float
    seed: int

    def __post_init__(self) -> None:
        if self.sigma_rad_per_sqrt_s < 0.0:
            raise ValueError(
                f"sigma_rad_per_sqrt_s={self.sigma_rad_per_sqrt_s} must be >= 0"
            )


@dataclass(frozen=True)
class PolarizationMixing:
    """Scalar leak of drift-sensitive response into the Sagnac output.

    The seed field is kept for interface stability; the current model is
    fully determined by the shared drift path and uses no extra randomness.
    """

    epsilon: float
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon={self.epsilon} must lie in [0, 1]")


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Uniformly sampled optical power record."""

    sample_period_s: float
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.sample_period_s <= 0.0:
            raise ValueError(f"sample_period_s={self.sample_period_s} must be positive")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("values must be a non-empty 1-D array")
        if not np.all(np.isfinite(values)):
            raise ValueError("values contain non-finite entries")
        object.__setattr__(self, "values", values)

    def times(self) -> np.ndarray:
        return np.arange(self.values.size) * self.sample_period_s


def _n_samples(duration_s: float, dt_s: float) -> int:
    if duration_s <= 0.0 or dt_s <= 0.0:
        raise ValueError(
            f"duration_s={duration_s} and dt_s={dt_s} must be positive"
        )
    n = int(round(duration_s / dt_s))
    return max(n, 2)

def mzm_dc_phase_path(duration_s: float, dt_s: float, spec: DriftSpec) -> np.ndarray:
    """Sampled bias-phase random walk, phi(0) at the quadrature point."""
    n = _n_samples(duration_s, dt_s)
    rng = np.random.default_rng(spec.seed)
    steps = rng.normal(0.0, spec.sigma_rad_per_sqrt_s * math.sqrt(dt_s), n - 1)
    path = np.empty(n)
    path[0] = QUADRATURE_PHASE
    np.cumsum(steps, out=path[1:])
    path[1:] += QUADRATURE_PHASE
    return path


def _normalize_to_max(values: np.ndarray, sample_period_s: float) -> PowerSeries:
    peak = float(values.max())
    if peak <= 0.0:
        raise ValueError("power series has no positive samples to normalize by")
    return PowerSeries(sample_period_s=sample_period_s, values=values / peak)


def mzm_stability_series(
    drift: DriftSpec,
    duration_s: float,
    dt_s: float,
    coupling: CouplingRatio,
    bias_phase_rad: float = QUADRATURE_PHASE,
) -> PowerSeries:
    """Transmitted power of an unstabilized MZM under bias drift.

    bias_phase_rad is the intended operating phase; the drift path
    contributes its excursion from the quadrature starting point, so
    sigma = 0 gives a constant series at interference_intensity(bias).
    The result is normalized so its maximum is exactly 1.
    """
    path = mzm_dc_phase_path(duration_s, dt_s, drift)
    phase = bias_phase_rad + (path - QUADRATURE_PHASE)
    values = interference_intensity(coupling, phase)
    return _normalize_to_max(values, dt_s)


def sagnac_stability_series(
    mixing: PolarizationMixing,
    drift: DriftSpec,
    duration_s: float,
    dt_s: float,
    coupling: CouplingRatio,
) -> PowerSeries:
    """Unmodulated Sagnac output with a polarization leak.

    The ideal loop output is constant; a fraction epsilon behaves like the
    drifting MZM instead:

        P(t) = (1 - epsilon) + epsilon * I(r, phi_drift(t))

    With epsilon = 1 and the same DriftSpec this reproduces the MZM series
    at its default quadrature bias exactly.  Normalized to max 1.
    """
    path = mzm_dc_phase_path(duration_s, dt_s, drift)
    leak = interference_intensity(coupling, path)
    values = (1.0 - mixing.epsilon) + mixing.epsilon * leak
    return _normalize_to_max(values, dt_s)


def power_meter_average(raw: PowerSeries, window_s: float = 1.0) -> PowerSeries:
    """Non-overlapping boxcar average, one output point per meter window.

    window_s is rounded to a whole number of raw samples; a trailing
    partial window is dropped.
    """
    if window_s < raw.sample_period_s:
        raise ValueError(
            f"window_s={window_s} shorter than the raw sample period "
            f"{raw.sample_period_s}"
        )
    n_win = int(round(window_s / raw.sample_period_s))
    n_out = raw.values.size // n_win
    if n_out == 0:
        raise ValueError("series shorter than one meter window")
    trimmed = raw.values[: n_out * n_win].reshape(n_out, n_win)
    return PowerSeries(
        sample_period_s=n_win * raw.sample_period_s,
        values=trimmed.mean(axis=1),
    )


def normalized_std(series: PowerSeries) -> float:
    """Standard deviation as a percentage of the mean, 100 * std / mean."""
    mean = float(series.values.mean())
    if mean == 0.0:
        raise ValueError("series mean is zero; normalized std undefined")
    return 100.0 * float(series.values.std()) / mean
