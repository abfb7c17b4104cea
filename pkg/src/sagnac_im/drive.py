"""Electrical drive synthesis: PRBS patterns, Gaussian pulses, driver filters.

The drive chain mirrors a pulse-pattern generator feeding an AC-coupled
amplifier: a maximal-length PRBS picks which clock slots carry a pulse, each
selected slot gets one Gaussian voltage pulse centered on the slot midpoint,
and the result is passed through a first-order bandwidth limit and a
first-order AC-coupling high-pass.  Both filters are realized with the
bilinear transform so the DC gain of the low-pass is exactly 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter, lfilter_zi

#: Fibonacci LFSR feedback taps giving maximal-length sequences, one standard
#: primitive polynomial per register width.  Each tuple lists the nonzero
#: exponents of x**k + x**m + ... + 1 (the width k first, the constant term
#: implied).
TAPS: dict[int, tuple[int, ...]] = {
    2: (2, 1),
    3: (3, 2),
    4: (4, 3),
    5: (5, 3),
    6: (6, 5),
    7: (7, 6),
    8: (8, 6, 5, 4),
    9: (9, 5),
    10: (10, 7),
    11: (11, 9),
    12: (12, 6, 4, 1),
    13: (13, 4, 3, 1),
    14: (14, 5, 3, 1),
    15: (15, 14),
    16: (16, 15, 13, 4),
    17: (17, 14),
    18: (18, 11),
    19: (19, 6, 2, 1),
    20: (20, 17),
    21: (21, 19),
    22: (22, 21),
    23: (23, 18),
    24: (24, 23, 22, 17),
    25: (25, 22),
    26: (26, 6, 2, 1),
    27: (27, 5, 2, 1),
    28: (28, 25),
    29: (29, 27),
    30: (30, 6, 4, 1),
    31: (31, 28),
}

SYMBOL_SIGNAL = "s"
SYMBOL_DECOY = "v"


@dataclass(frozen=True)
class SampleGrid:
    """Uniform time grid starting at t = 0 with spacing dt_s."""

    dt_s: float
    n: int

    def __post_init__(self) -> None:
        if not (self.dt_s > 0.0 and math.isfinite(self.dt_s)):
            raise ValueError(f"dt_s={self.dt_s} must be a positive finite number")
        if self.n < 2:
            raise ValueError(f"n={self.n} must be at least 2")

    @property
    def duration_s(self) -> float:
        return (self.n - 1) * self.dt_s

    def times(self) -> np.ndarray:
        return np.arange(self.n) * self.dt_s


@dataclass(frozen=True, eq=False)
class VoltageWaveform:
    """Sampled voltage trace on a SampleGrid."""

    grid: SampleGrid
    samples: np.ndarray

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        if samples.shape != (self.grid.n,):
            raise ValueError(
                f"samples shape {samples.shape} does not match grid n={self.grid.n}"
            )
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples contain non-finite values")
        object.__setattr__(self, "samples", samples)

    def value_at(self, t) -> np.ndarray:
        """Linear interpolation; t must lie inside the grid."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0.0) or np.any(t > self.grid.duration_s):
            raise ValueError("requested time outside the sampled waveform")
        return np.interp(t, self.grid.times(), self.samples)


@dataclass(frozen=True)
class BitPattern:
    """Symbol sequence over {s, v} clocked at clock_rate_hz."""

    symbols: str
    clock_rate_hz: float

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValueError("symbols must be non-empty")
        bad = set(self.symbols) - {SYMBOL_SIGNAL, SYMBOL_DECOY}
        if bad:
            raise ValueError(f"symbols contain invalid entries {sorted(bad)}")
        if self.clock_rate_hz <= 0.0:
            raise ValueError(f"clock_rate_hz={self.clock_rate_hz} must be positive")

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def duration_s(self) -> float:
        return len(self.symbols) / self.clock_rate_hz

    def slot_centers(self, t0: float = 0.0) -> np.ndarray:
        return t0 + (np.arange(len(self.symbols)) + 0.5) / self.clock_rate_hz


@dataclass(frozen=True)
class OpticalPulseTrain:
    """Clocked train of Gaussian light pulses, one per slot midpoint."""

    clock_rate_hz: float
    fwhm_s: float
    count: int

    def __post_init__(self) -> None:
        if self.clock_rate_hz <= 0.0:
            raise ValueError(f"clock_rate_hz={self.clock_rate_hz} must be positive")
        if self.count < 1:
            raise ValueError(f"count={self.count} must be at least 1")
        if not 0.0 < self.fwhm_s < 1.0 / self.clock_rate_hz:
            raise ValueError(
                f"fwhm_s={self.fwhm_s} must lie in (0, 1/clock_rate) "
                f"= (0, {1.0 / self.clock_rate_hz})"
            )

    def centers(self, t0: float = 0.0) -> np.ndarray:
        return t0 + (np.arange(self.count) + 0.5) / self.clock_rate_hz


@dataclass(frozen=True)
class AcCouplingSpec:
    """First-order AC-coupling high-pass; cutoff_hz = 0 disables the filter."""

    cutoff_hz: float

    def __post_init__(self) -> None:
        if self.cutoff_hz < 0.0:
            raise ValueError(f"cutoff_hz={self.cutoff_hz} must be >= 0")


def optical_pulse_train(clock_rate_hz: float, fwhm_s: float, count: int) -> OpticalPulseTrain:
    return OpticalPulseTrain(clock_rate_hz=clock_rate_hz, fwhm_s=fwhm_s, count=count)


def lfsr_bits(order: int, seed: int, length: int) -> np.ndarray:
    """Raw LFSR output bits (0/1) for the given register width and seed."""
    if order not in TAPS:
        raise ValueError(f"order={order} not supported; valid orders are 2..31")
    if length < 1:
        raise ValueError(f"length={length} must be at least 1")
    mask = (1 << order) - 1
    state = seed & mask
    if state == 0:
        raise ValueError("seed must be non-zero in the low `order` bits")
    taps = TAPS[order]
    out = np.empty(length, dtype=np.uint8)
    # state bit j holds output bit n + j, so the recurrence
    # y[n+k] = y[n] ^ y[n+m] ^ ... taps bit 0 for the x**k term
    for i in range(length):
        out[i] = state & 1
        fb = 0
        for t in taps:
            fb ^= (state >> (t % order)) & 1
        state = (state >> 1) | (fb << (order - 1))
    return out


def prbs(
    order: int = 10,
    seed: int | None = None,
    length: int = 1024,
    clock_rate_hz: float = 2e9,
) -> BitPattern:
    """Maximal-length PRBS mapped onto symbols: bit 1 -> s, bit 0 -> v.

    The default is a 1024-bit slice of the order-10 sequence started from
    the all-ones register.  The full period is 2**order - 1 bits and carries
    exactly 2**(order - 1) ones.
    """
    if seed is None:
        seed = (1 << order) - 1
    bits = lfsr_bits(order, seed, length)
    symbols = "".join(SYMBOL_SIGNAL if b else SYMBOL_DECOY for b in bits)
    return BitPattern(symbols=symbols, clock_rate_hz=clock_rate_hz)


def gaussian_pulse_area(amplitude_v: float, fwhm_s: float) -> float:
    """Area of one Gaussian pulse, amplitude * fwhm * sqrt(pi / (4 ln 2))."""
    return amplitude_v * fwhm_s * math.sqrt(math.pi / (4.0 * math.log(2.0)))


def add_gaussian_pulses(
    waveform: np.ndarray,
    grid: SampleGrid,
    centers_s: np.ndarray,
    amplitudes_v: np.ndarray,
    fwhm_s: float,
    truncate_fwhms: float = 5.0,
) -> None:
    """Accumulate Gaussian pulses into `waveform` in place.

    Each pulse is evaluated only within +-truncate_fwhms * fwhm of its
    center and is exactly zero beyond that, which keeps synthesis O(pulses)
    and leaves genuinely quiet gaps between well-separated pulses.
    """
    k = 4.0 * math.log(2.0) / (fwhm_s * fwhm_s)
    half = truncate_fwhms * fwhm_s
    times = grid.times()
    for c, a in zip(centers_s, amplitudes_v):
        lo = max(0, int(math.ceil((c - half) / grid.dt_s)))
        hi = min(grid.n - 1, int(math.floor((c + half) / grid.dt_s)))
        if hi < lo:
            continue
        tt = times[lo : hi + 1] - c
        waveform[lo : hi + 1] += a * np.exp(-k * tt * tt)


def synthesize_drive(
    pattern: BitPattern,
    pulse_fwhm_s: float,
    amplitude_v: float,
    grid: SampleGrid,
    t0: float = 0.0,
    truncate_fwhms: float = 5.0,
) -> VoltageWaveform:
    """One Gaussian pulse per s symbol, centered on the slot midpoint.

    v symbols contribute zero.  Slot i is centered at t0 + (i + 0.5)/clock.
    The grid must cover the full pattern (plus t0 lead-in) and resolve the
    pulse with at least 8 samples per FWHM.
    """
    if pulse_fwhm_s <= 0.0:
        raise ValueError(f"pulse_fwhm_s={pulse_fwhm_s} must be positive")
    if t0 < 0.0:
        raise ValueError(f"t0={t0} must be >= 0")
    if grid.dt_s > pulse_fwhm_s / 8.0:
        raise ValueError(
            f"grid dt_s={grid.dt_s} too coarse; need >= 8 samples per FWHM "
            f"(dt <= {pulse_fwhm_s / 8.0})"
        )
    if grid.duration_s < t0 + pattern.duration_s:
        raise ValueError(
            f"grid duration {grid.duration_s} shorter than pattern span "
            f"{t0 + pattern.duration_s}"
        )
    centers = pattern.slot_centers(t0)
    is_signal = np.array([sym == SYMBOL_SIGNAL for sym in pattern.symbols])
    samples = np.zeros(grid.n)
    add_gaussian_pulses(
        samples,
        grid,
        centers[is_signal],
        np.full(int(is_signal.sum()), float(amplitude_v)),
        pulse_fwhm_s,
        truncate_fwhms,
    )
    return VoltageWaveform(grid=grid, samples=samples)


def _bilinear_first_order(cutoff_hz: float, dt_s: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Shared prewarp for the two first-order sections; returns (b_lp, a, wd)."""
    wd = math.tan(math.pi * cutoff_hz * dt_s)
    a = np.array([1.0, (wd - 1.0) / (1.0 + wd)])
    b_lp = np.array([wd / (1.0 + wd), wd / (1.0 + wd)])
    return b_lp, a, wd


def bandlimit(waveform: VoltageWaveform, bandwidth_hz: float) -> VoltageWaveform:
    """First-order low-pass at bandwidth_hz (bilinear transform).

    The filter state is initialized as if the input had held its first
    sample forever, so a constant waveform passes through unchanged.  A
    corner at or above the Nyquist rate cannot be represented and is
    treated as transparent.
    """
    if bandwidth_hz <= 0.0:
        raise ValueError(f"bandwidth_hz={bandwidth_hz} must be positive")
    dt = waveform.grid.dt_s
    if bandwidth_hz * dt >= 0.5:
        return VoltageWaveform(grid=waveform.grid, samples=waveform.samples.copy())
    b, a, _ = _bilinear_first_order(bandwidth_hz, dt)
    zi = lfilter_zi(b, a) * waveform.samples[0]
    out, _ = lfilter(b, a, waveform.samples, zi=zi)
    return VoltageWaveform(grid=waveform.grid, samples=out)


def ac_couple(waveform: VoltageWaveform, spec: AcCouplingSpec) -> VoltageWaveform:
    """First-order AC-coupling high-pass (bilinear transform).

    The state starts from zero, modelling a coupling capacitor that is
    uncharged at the start of the record: a constant input decays as
    exp(-t * 2*pi*cutoff) while content far above the cutoff passes
    through essentially unchanged.  cutoff_hz = 0 returns a copy.
    """
    if spec.cutoff_hz == 0.0:
        return VoltageWaveform(grid=waveform.grid, samples=waveform.samples.copy())
    dt = waveform.grid.dt_s
    if spec.cutoff_hz * dt >= 0.5:
        raise ValueError(
            f"cutoff_hz={spec.cutoff_hz} at or above Nyquist for dt={dt}"
        )
    _, a, wd = _bilinear_first_order(spec.cutoff_hz, dt)
    b = np.array([1.0 / (1.0 + wd), -1.0 / (1.0 + wd)])
    out, _ = lfilter(b, a, waveform.samples, zi=np.zeros(1))
    return VoltageWaveform(grid=waveform.grid, samples=out)


def baseline(waveform: VoltageWaveform, spec: AcCouplingSpec) -> VoltageWaveform:
    """The component removed by ac_couple: input minus the coupled output."""
    coupled = ac_couple(waveform, spec)
    return VoltageWaveform(
        grid=waveform.grid, samples=waveform.samples - coupled.samples
    )
