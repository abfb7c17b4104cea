"""Traveling-wave phase accumulation in the loop phase modulator.

Geometry conventions used throughout:

* The electrode is a transmission line of length L.  The electrical wave
  enters at the same crystal face as the co-propagating (parallel) light
  and travels with index n_rf; V(t) is the voltage at that input face.
* Light covers the crystal with index n_optical.  Measuring zeta as the
  distance a pulse has advanced along its own path, the voltage it sees is

      parallel:      V(t_entry + zeta*n_optical/c - zeta*n_rf/c)
      anti-parallel: V(t_entry + zeta*n_optical/c - (L - zeta)*n_rf/c)

  and the accumulated phase is (pi/v_pi) * (1/L) * integral over zeta.
* Because the retarded time is affine in zeta, the integral equals the mean
  of V over a time window.  The quadrature nodes are the union of a uniform
  subdivision (>= 256 steps) and every waveform sample time inside the
  window, which makes the trapezoid rule exact for the linear interpolant.

For velocity-matched co-propagation the window collapses to a point and the
phase reduces to pi * V(t_entry) / v_pi.  A counter-propagating pulse is
instead smeared over the walk-through time (n_optical + n_rf) * L / c, which
is what limits the clock rate and enables the asymmetric-placement trick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .drive import VoltageWaveform

C_VACUUM = 299_792_458.0


class Direction(Enum):
    PARALLEL = "parallel"
    ANTI_PARALLEL = "anti_parallel"


@dataclass(frozen=True)
class ModulatorGeometry:
    """Crystal length, group indices for light and RF, and half-wave voltage."""

    length_m: float
    n_optical: float
    n_rf: float
    v_pi: float

    def __post_init__(self) -> None:
        for name in ("length_m", "n_optical", "n_rf", "v_pi"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"{name}={value} must be a positive finite number")
        if self.n_optical < 1.0 or self.n_rf < 1.0:
            raise ValueError("refractive indices must be >= 1")


@dataclass(frozen=True)
class LoopPlacement:
    """Arrival-time asymmetry of the modulator within the loop.

    offset_s is the extra delay before the anti-parallel (counter-propagating)
    pulse reaches the crystal, relative to the parallel one.  Zero means the
    modulator sits exactly at the loop midpoint.
    """

    offset_s: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.offset_s):
            raise ValueError(f"offset_s={self.offset_s} must be finite")


def walk_through_s(geom: ModulatorGeometry) -> float:
    """Duration of the anti-parallel interaction window."""
    return (geom.n_optical + geom.n_rf) * geom.length_m / C_VACUUM


def interaction_window(
    geom: ModulatorGeometry, launch_time_s: float, direction: Direction
) -> tuple[float, float]:
    """Time span of the drive waveform sampled during one crystal transit."""
    if direction is Direction.PARALLEL:
        rate = (geom.n_optical - geom.n_rf) / C_VACUUM
        start = launch_time_s
    else:
        rate = (geom.n_optical + geom.n_rf) / C_VACUUM
        start = launch_time_s - geom.length_m * geom.n_rf / C_VACUUM
    end = start + rate * geom.length_m
    return (start, end) if end >= start else (end, start)


def accumulated_phase(
    drive: VoltageWaveform,
    launch_time_s: float,
    direction: Direction,
    geom: ModulatorGeometry,
    min_steps: int = 256,
) -> float:
    """Phase (radians) accumulated by one pulse crossing the crystal."""
    if min_steps < 1:
        raise ValueError(f"min_steps={min_steps} must be >= 1")
    t_lo, t_hi = interaction_window(geom, launch_time_s, direction)
    t_end = drive.grid.duration_s
    if t_lo < 0.0 or t_hi > t_end:
        raise ValueError(
            f"interaction window [{t_lo}, {t_hi}] extends past the drive "
            f"waveform [0, {t_end}]"
        )
    if t_hi == t_lo:
        return math.pi * float(drive.value_at(t_lo)) / geom.v_pi
    # work on the grid slice spanning the window instead of the whole trace;
    # a pattern run calls this once per slot and the trace can be megasamples
    dt = drive.grid.dt_s
    i0 = int(math.floor(t_lo / dt)) + 1  # first sample strictly inside
    while (i0 - 1) * dt > t_lo:
        i0 -= 1
    i1 = int(math.ceil(t_hi / dt))  # first sample at or past t_hi
    while i1 * dt < t_hi:
        i1 += 1
    j0 = max(i0 - 1, 0)
    j1 = min(i1 + 1, drive.grid.n)
    times = np.arange(j0, j1) * dt
    inner = times[(times > t_lo) & (times < t_hi)]
    nodes = np.union1d(np.linspace(t_lo, t_hi, min_steps + 1), inner)
    vals = np.interp(nodes, times, drive.samples[j0:j1])
    mean = np.trapezoid(vals, nodes) / (t_hi - t_lo)
    return math.pi * mean / geom.v_pi


def net_sagnac_phase(
    drive: VoltageWaveform,
    launch_time_s: float,
    geom: ModulatorGeometry,
    placement: LoopPlacement,
    min_steps: int = 256,
) -> float:
    """Phase difference between the two loop directions for one light pulse.

    The parallel pulse reaches the crystal at launch_time_s, the
    anti-parallel one at launch_time_s + placement.offset_s.  Any voltage
    component that is constant over both windows cancels exactly, which is
    the loop's immunity to DC and slow baseline drift.
    """
    par = accumulated_phase(drive, launch_time_s, Direction.PARALLEL, geom, min_steps)
    anti = accumulated_phase(
        drive,
        launch_time_s + placement.offset_s,
        Direction.ANTI_PARALLEL,
        geom,
        min_steps,
    )
    return par - anti


def required_offset(
    geom: ModulatorGeometry, electrical_fwhm_s: float, guard_s: float = 0.0
) -> float:
    """Smallest placement offset that keeps the anti-parallel window quiet.

    The anti-parallel window (walk-through duration), widened by one pulse
    FWHM plus the guard on each side, must clear the electrical pulse that
    is aligned with the parallel light.  Minimal offset:

        (n_optical + n_rf) * L / c / 2 + electrical_fwhm + guard
    """
    if electrical_fwhm_s <= 0.0:
        raise ValueError(f"electrical_fwhm_s={electrical_fwhm_s} must be positive")
    if guard_s < 0.0:
        raise ValueError(f"guard_s={guard_s} must be >= 0")
    return walk_through_s(geom) / 2.0 + electrical_fwhm_s + guard_s


def max_clock_rate(geom: ModulatorGeometry) -> float:
    """Highest clock rate with at most one light pulse per electrical pulse.

    Counter-propagating light entering during the walk-through time of an
    electrical pulse gets modulated by it, so slots must be spaced at least
    that far apart: f_max = c / (L * (n_optical + n_rf)).
    """
    return C_VACUUM / (geom.length_m * (geom.n_optical + geom.n_rf))


def anti_parallel_overlap_count(
    geom: ModulatorGeometry, clock_rate_hz: float, n_alignments: int = 997
) -> int:
    """Time-domain oracle for the clock-rate limit.

    Simulates one electrical pulse entering the electrode and a clocked
    train of anti-parallel light pulses entering the far face, and counts
    how many light transits meet the electrical transit inside the crystal.
    Grazing encounters exactly at a crystal face have zero interaction
    length and do not count.  The count is maximized over clock alignments.
    """
    if clock_rate_hz <= 0.0:
        raise ValueError(f"clock_rate_hz={clock_rate_hz} must be positive")
    if n_alignments < 1:
        raise ValueError(f"n_alignments={n_alignments} must be >= 1")
    period = 1.0 / clock_rate_hz
    # Electrical pulse enters z=0 at t=0.  A light pulse entering z=L at
    # t_i meets it inside the crystal iff the two transits share an instant:
    # t_i in the open interval (-L*n_optical/c, +L*n_rf/c).
    lo = -geom.length_m * geom.n_optical / C_VACUUM
    hi = geom.length_m * geom.n_rf / C_VACUUM
    best = 0
    for k in range(n_alignments):
        t0 = (k / n_alignments) * period
        i_min = math.floor((lo - t0) / period) - 1
        i_max = math.ceil((hi - t0) / period) + 1
        count = 0
        for i in range(i_min, i_max + 1):
            t_i = t0 + i * period
            if lo < t_i < hi:
                count += 1
        best = max(best, count)
    return best
