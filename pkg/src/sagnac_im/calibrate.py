"""Fitting helpers that pin the free parameters of the shipped configs.

Three quantities in the bundled experiment files are not first-principles
numbers: the AC-coupling corner that produces a stated pattern-dependent
baseline wander, the phase-drift magnitude behind the free-running
Mach-Zehnder stability figure, and the polarization leak behind the Sagnac
one.  Each is fixed by a one-dimensional bisection against a measured
statistic, and the resulting values are frozen into the JSON configs so
normal runs never re-fit anything.  scripts/calibrate.py regenerates them.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .drift import (
    DriftSpec,
    PolarizationMixing,
)
from .drive import (
    AcCouplingSpec,
    BitPattern,
    bandlimit,
    baseline,
    prbs,
)
from .interference import CouplingRatio
from .pattern import (
    DEVICE_MZM_TWO_LEVEL,
    DEVICE_SAGNAC_TWO_LEVEL,
    ExperimentConfig,
    _pattern_lead,
    driver_pulse_response,
    stability_experiment,
    synthesize_pattern_drive,
)


def conditional_baseline_delta_v(cfg: ExperimentConfig) -> float:
    """Baseline split between slots that follow an s and slots that follow a v.

    The driver's AC coupling removes the running average of the drive, so
    the voltage floor under each pulse depends on what was sent before it.
    Sampled at the (driver-delayed) slot centers and grouped by the previous
    symbol, the gap between the two group means is the wander a two-level
    receiver actually experiences, in volts.
    """
    pattern = prbs(
        order=cfg.pattern_order,
        seed=cfg.pattern_seed,
        length=cfg.pattern_length,
        clock_rate_hz=cfg.clock_rate_hz,
    )
    lead = _pattern_lead(cfg)
    raw = synthesize_pattern_drive(cfg, pattern, lead, apply_filters=False)
    if cfg.bandwidth_hz is not None:
        raw = bandlimit(raw, cfg.bandwidth_hz)
    if cfg.ac_cutoff_hz <= 0.0:
        return 0.0
    base = baseline(raw, AcCouplingSpec(cutoff_hz=cfg.ac_cutoff_hz))
    delay, _ = driver_pulse_response(cfg)
    sample_times = pattern.slot_centers(lead) + delay
    values = np.interp(sample_times, base.grid.times(), base.samples)
    prev = np.array(list(pattern.symbols[:-1]))
    after = values[1:]
    mean_after_s = float(np.mean(after[prev == "s"]))
    mean_after_v = float(np.mean(after[prev == "v"]))
    return abs(mean_after_s - mean_after_v)


def calibrate_ac_cutoff(
    cfg: ExperimentConfig,
    wander_fraction_of_v_pi: float,
    lo_hz: float = 1e7,
    hi_hz: float = 3e8,
    iterations: int = 48,
) -> float:
    """Corner frequency whose conditional baseline split equals the target.

    The split grows monotonically with the corner over the bracket (a larger
    corner means faster charge leakage between symbols), so plain bisection
    converges.  Corners much below the default lower edge do not settle
    within one pattern and the measurement picks up the turn-on transient
    instead; keep lo_hz out of that regime.  Raises if the target is outside
    what the bracket can reach.
    """
    target_v = wander_fraction_of_v_pi * cfg.geometry.v_pi

    def split(fc: float) -> float:
        return conditional_baseline_delta_v(replace(cfg, ac_cutoff_hz=fc))

    if not split(lo_hz) <= target_v <= split(hi_hz):
        raise ValueError(
            f"wander target {target_v:.4g} V not bracketed by "
            f"[{lo_hz:.3g}, {hi_hz:.3g}] Hz"
        )
    lo, hi = lo_hz, hi_hz
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if split(mid) < target_v:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def calibrate_drift_sigma(
    coupling: CouplingRatio,
    target_std_pct: float,
    duration_s: float = 3600.0,
    path_dt_s: float = 0.1,
    seed: int = 7,
    lo: float = 1e-4,
    hi: float = 1.0,
    iterations: int = 48,
) -> float:
    """Drift magnitude reproducing a measured free-running MZM power spread.

    With the seed fixed, the random-walk phase path scales linearly in
    sigma, so the normalized spread of the transmitted power rises
    monotonically from zero until the path wraps the full fringe.  The
    target must sit below that saturation plateau.
    """

    def spread(sigma: float) -> float:
        drift = DriftSpec(sigma_rad_per_sqrt_s=sigma, seed=seed)
        _, std_pct = stability_experiment(
            DEVICE_MZM_TWO_LEVEL, coupling, drift, duration_s, path_dt_s=path_dt_s
        )
        return std_pct

    if not spread(lo) <= target_std_pct <= spread(hi):
        raise ValueError(
            f"stability target {target_std_pct:.4g}% not bracketed by "
            f"sigma in [{lo:.3g}, {hi:.3g}]"
        )
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if spread(mid) < target_std_pct:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def calibrate_mixing_epsilon(
    coupling: CouplingRatio,
    drift: DriftSpec,
    target_std_pct: float,
    duration_s: float = 3600.0,
    path_dt_s: float = 0.1,
    lo: float = 0.0,
    hi: float = 0.5,
    iterations: int = 48,
) -> float:
    """Polarization leak reproducing a measured Sagnac power spread.

    The loop output is a (1 - eps) floor plus an eps-weighted drifting
    interference term, so its normalized spread grows monotonically with
    the leak and bisection applies.
    """

    def spread(eps: float) -> float:
        mixing = PolarizationMixing(epsilon=eps)
        _, std_pct = stability_experiment(
            DEVICE_SAGNAC_TWO_LEVEL,
            coupling,
            drift,
            duration_s,
            mixing=mixing,
            path_dt_s=path_dt_s,
        )
        return std_pct

    if not spread(lo) <= target_std_pct <= spread(hi):
        raise ValueError(
            f"stability target {target_std_pct:.4g}% not bracketed by "
            f"epsilon in [{lo:.3g}, {hi:.3g}]"
        )
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if spread(mid) < target_std_pct:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
