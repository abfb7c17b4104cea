"""End-to-end pulse-pattern experiments and transition statistics.

This module ties the pieces together the way the physical transmitter is
wired: a PRBS selects which clock slots pass at full transmission ("s")
and which are driven down to the decoy level ("v"), the electrical drive
for that pattern passes
through a band limit and an AC-coupling stage, each optical pulse picks up
phase in the loop modulator, and a detector records one intensity per slot.
Conditioning each slot's intensity on the previous symbol then exposes
patterning effects, the dependence of a pulse on its predecessor.

Level convention: the loop is biased so the undriven state sits at
static_bias_rad (default pi, the attenuated/blocked state) and a pulse
driven to the half-wave voltage lands on the constructive extreme with
transmission 1.  Both operating points are interference extrema, where the
small-signal sensitivity is zero; this is what suppresses patterning in the
two-level scheme.  The quadrature-decoy MZM scheme instead parks its decoy
pulses at the point of maximum sensitivity, and the same baseline wander
shows up there at full strength.

Drive amplitudes are specified at the modulator: the synthesizer scales the
generator amplitude and shifts the sampling instant to compensate the
(deterministic) peak attenuation and delay of the driver filters, mirroring
how the electrical delay and power are tuned up in practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .drift import (
    DriftSpec,
    PolarizationMixing,
    PowerSeries,
    mzm_stability_series,
    normalized_std,
    power_meter_average,
    sagnac_stability_series,
)
from .drive import (
    SYMBOL_SIGNAL,
    SYMBOL_DECOY,
    AcCouplingSpec,
    BitPattern,
    SampleGrid,
    VoltageWaveform,
    ac_couple,
    add_gaussian_pulses,
    bandlimit,
    optical_pulse_train,
    prbs,
)
from .interference import CouplingRatio, interference_intensity
from .traveling_wave import (
    LoopPlacement,
    ModulatorGeometry,
    net_sagnac_phase,
    walk_through_s,
)

DEVICE_SAGNAC_TWO_LEVEL = "sagnac_two_level"
DEVICE_MZM_TWO_LEVEL = "mzm_two_level"
DEVICE_MZM_QUADRATURE_DECOY = "mzm_quadrature_decoy"
DEVICES = (
    DEVICE_SAGNAC_TWO_LEVEL,
    DEVICE_MZM_TWO_LEVEL,
    DEVICE_MZM_QUADRATURE_DECOY,
)

TRANSITION_ORDER = ("s->s", "v->s", "s->v", "v->v")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to run one pulse-pattern experiment."""

    device: str
    geometry: ModulatorGeometry
    placement: LoopPlacement
    coupling: CouplingRatio
    clock_rate_hz: float = 2e9
    pattern_order: int = 10
    pattern_seed: int | None = None
    pattern_length: int = 1024
    electrical_fwhm_s: float = 125e-12
    optical_fwhm_s: float = 60e-12
    drive_amplitude_v: float | None = None
    bandwidth_hz: float | None = 8e9
    ac_cutoff_hz: float = 0.0
    static_bias_rad: float = math.pi
    bias_mode: str = "auto"
    detector_noise_rel: float = 0.02
    seed: int = 0
    sample_dt_s: float = 1e-12
    envelope_integration: bool = False
    truncate_fwhms: float = 5.0

    def __post_init__(self) -> None:
        if self.device not in DEVICES:
            raise ValueError(f"device={self.device!r} not one of {DEVICES}")
        if self.bias_mode not in ("auto", "fixed"):
            raise ValueError(f"bias_mode={self.bias_mode!r} must be auto or fixed")
        if self.clock_rate_hz <= 0.0:
            raise ValueError(f"clock_rate_hz={self.clock_rate_hz} must be positive")
        if self.electrical_fwhm_s <= 0.0:
            raise ValueError(
                f"electrical_fwhm_s={self.electrical_fwhm_s} must be positive"
            )
        if self.electrical_fwhm_s >= 1.0 / self.clock_rate_hz:
            raise ValueError(
                f"electrical_fwhm_s={self.electrical_fwhm_s} must be shorter than "
                f"one clock slot {1.0 / self.clock_rate_hz}"
            )
        if self.drive_amplitude_v is not None and self.drive_amplitude_v <= 0.0:
            raise ValueError(
                f"drive_amplitude_v={self.drive_amplitude_v} must be positive"
            )
        if self.bandwidth_hz is not None and self.bandwidth_hz <= 0.0:
            raise ValueError(f"bandwidth_hz={self.bandwidth_hz} must be positive")
        if self.ac_cutoff_hz < 0.0:
            raise ValueError(f"ac_cutoff_hz={self.ac_cutoff_hz} must be >= 0")
        if self.detector_noise_rel < 0.0:
            raise ValueError(
                f"detector_noise_rel={self.detector_noise_rel} must be >= 0"
            )
        if self.sample_dt_s <= 0.0:
            raise ValueError(f"sample_dt_s={self.sample_dt_s} must be positive")
        if self.truncate_fwhms < 2.0:
            raise ValueError(
                f"truncate_fwhms={self.truncate_fwhms} must be >= 2 to keep the "
                "pulse shape intact"
            )

    @property
    def amplitude_v(self) -> float:
        """Delivered pulse peak; defaults to the half-wave voltage."""
        if self.drive_amplitude_v is None:
            return self.geometry.v_pi
        return self.drive_amplitude_v


@dataclass(frozen=True)
class IntensityRecord:
    """Detected intensity of one transmitted pulse slot."""

    index: int
    symbol: str
    intensity: float


@dataclass(frozen=True)
class TransitionStats:
    """Statistics of one (previous symbol -> current symbol) group."""

    transition: str
    mean: float
    std: float
    count: int
    deviation_pct: float


def driver_pulse_response(cfg: ExperimentConfig) -> tuple[float, float]:
    """Peak delay and peak fraction of one unit pulse through the driver chain.

    Returns (delay_s, peak_fraction): where the filtered pulse peaks relative
    to the synthesized center, and what fraction of the synthesized amplitude
    survives there.  Used to tune the sampling instant and generator level so
    the delivered peak matches the configured amplitude.
    """
    if cfg.bandwidth_hz is None and cfg.ac_cutoff_hz == 0.0:
        return 0.0, 1.0
    dt = cfg.sample_dt_s
    half = cfg.truncate_fwhms * cfg.electrical_fwhm_s
    tail = 0.0 if cfg.bandwidth_hz is None else 8.0 / (2.0 * math.pi * cfg.bandwidth_hz)
    n = int(math.ceil((2.0 * half + tail) / dt)) + 2
    grid = SampleGrid(dt_s=dt, n=n)
    samples = np.zeros(n)
    center = half
    add_gaussian_pulses(
        samples, grid, np.array([center]), np.array([1.0]),
        cfg.electrical_fwhm_s, cfg.truncate_fwhms,
    )
    wave = VoltageWaveform(grid=grid, samples=samples)
    wave = _apply_driver_filters(wave, cfg)
    i = int(np.argmax(wave.samples))
    if 0 < i < n - 1:
        y0, y1, y2 = wave.samples[i - 1 : i + 2]
        denom = y0 - 2.0 * y1 + y2
        shift = 0.0 if denom == 0.0 else 0.5 * (y0 - y2) / denom
        peak = y1 - 0.25 * (y0 - y2) * shift
    else:
        shift, peak = 0.0, float(wave.samples[i])
    delay = (i + shift) * dt - center
    if peak <= 0.0:
        raise ValueError("driver filters annihilated the pulse; check corners")
    return delay, float(peak)


def _apply_driver_filters(wave: VoltageWaveform, cfg: ExperimentConfig) -> VoltageWaveform:
    if cfg.bandwidth_hz is not None:
        wave = bandlimit(wave, cfg.bandwidth_hz)
    if cfg.ac_cutoff_hz > 0.0:
        wave = ac_couple(wave, AcCouplingSpec(cutoff_hz=cfg.ac_cutoff_hz))
    return wave


def _slot_amplitudes(cfg: ExperimentConfig, pattern: BitPattern, generator_amp: float) -> np.ndarray:
    """Generator amplitude per slot for the configured modulation scheme."""
    amps = np.zeros(len(pattern))
    is_signal = np.array([sym == SYMBOL_SIGNAL for sym in pattern.symbols])
    amps[is_signal] = generator_amp
    if cfg.device == DEVICE_MZM_QUADRATURE_DECOY:
        # Decoy slots are driven to the quadrature point, half a fringe short
        # of the signal level, instead of being left at an extremum.
        amps[~is_signal] = generator_amp / 2.0
    return amps


def synthesize_pattern_drive(
    cfg: ExperimentConfig,
    pattern: BitPattern,
    lead_s: float,
    apply_filters: bool = True,
) -> VoltageWaveform:
    """Drive waveform for a whole pattern, with lead/tail padding.

    apply_filters=False returns the generator output before the driver
    chain, which the wander calibration needs separately.
    """
    delay, peak = driver_pulse_response(cfg)
    generator_amp = cfg.amplitude_v / peak
    duration = lead_s + pattern.duration_s + lead_s
    grid = SampleGrid(dt_s=cfg.sample_dt_s, n=int(math.ceil(duration / cfg.sample_dt_s)) + 1)
    samples = np.zeros(grid.n)
    add_gaussian_pulses(
        samples,
        grid,
        pattern.slot_centers(lead_s),
        _slot_amplitudes(cfg, pattern, generator_amp),
        cfg.electrical_fwhm_s,
        cfg.truncate_fwhms,
    )
    wave = VoltageWaveform(grid=grid, samples=samples)
    if apply_filters:
        wave = _apply_driver_filters(wave, cfg)
    return wave


def _pattern_lead(cfg: ExperimentConfig) -> float:
    raw = (
        abs(cfg.placement.offset_s)
        + walk_through_s(cfg.geometry)
        + cfg.truncate_fwhms * cfg.electrical_fwhm_s
        + 4.0 * cfg.sample_dt_s
    )
    # snapped to the grid so slot centers fall on samples whenever the slot
    # period does; sampling a pulse peak then avoids interpolation bias
    return math.ceil(raw / cfg.sample_dt_s) * cfg.sample_dt_s


def _drive_phase_at(
    cfg: ExperimentConfig, drive: VoltageWaveform, launch_times: np.ndarray
) -> np.ndarray:
    if cfg.device == DEVICE_SAGNAC_TWO_LEVEL:
        return np.array(
            [
                net_sagnac_phase(drive, t, cfg.geometry, cfg.placement)
                for t in launch_times
            ]
        )
    return math.pi * drive.value_at(launch_times) / cfg.geometry.v_pi


def simulate_pattern(cfg: ExperimentConfig) -> list[IntensityRecord]:
    """Run the full pipeline and return one intensity record per slot."""
    pattern = prbs(
        cfg.pattern_order, cfg.pattern_seed, cfg.pattern_length, cfg.clock_rate_hz
    )
    optical_pulse_train(cfg.clock_rate_hz, cfg.optical_fwhm_s, len(pattern))
    lead = _pattern_lead(cfg)
    drive = synthesize_pattern_drive(cfg, pattern, lead)
    delay, _ = driver_pulse_response(cfg)
    launch = pattern.slot_centers(lead) + delay

    if cfg.envelope_integration:
        nodes, weights = np.polynomial.hermite.hermgauss(9)
        sigma_opt = cfg.optical_fwhm_s / (2.0 * math.sqrt(2.0 * math.log(2.0)))
        offsets = math.sqrt(2.0) * sigma_opt * nodes
        weights = weights / math.sqrt(math.pi)
        sub_phases = np.stack(
            [_drive_phase_at(cfg, drive, launch + off) for off in offsets]
        )
        static = _static_bias(cfg, sub_phases.mean(axis=0), pattern)
        intensity = np.tensordot(
            weights,
            interference_intensity(cfg.coupling, static - sub_phases),
            axes=(0, 0),
        )
    else:
        dphi = _drive_phase_at(cfg, drive, launch)
        static = _static_bias(cfg, dphi, pattern)
        intensity = interference_intensity(cfg.coupling, static - dphi)

    if cfg.detector_noise_rel > 0.0:
        rng = np.random.default_rng(cfg.seed)
        gain = 1.0 + rng.normal(0.0, cfg.detector_noise_rel, len(pattern))
        intensity = np.maximum(0.0, intensity * gain)

    return [
        IntensityRecord(index=i, symbol=sym, intensity=float(val))
        for i, (sym, val) in enumerate(zip(pattern.symbols, intensity))
    ]


def _static_bias(cfg: ExperimentConfig, dphi: np.ndarray, pattern: BitPattern) -> float:
    """Operating bias.  The loop bias is geometric; an MZM bias is tuned.

    For the MZM devices with bias_mode "auto" the DC bias is servoed so the
    mean driven s level sits on the constructive extremum, the same tune-up
    an operator performs against slow level shifts.
    """
    if cfg.device == DEVICE_SAGNAC_TWO_LEVEL or cfg.bias_mode == "fixed":
        return cfg.static_bias_rad
    is_signal = np.array([sym == SYMBOL_SIGNAL for sym in pattern.symbols])
    if not is_signal.any():
        return cfg.static_bias_rad
    return float(np.mean(dphi[is_signal]))


def classify_transitions(
    records: list[IntensityRecord], measurement_floor: float = 1e-3
) -> list[TransitionStats]:
    """Group pulses by (previous symbol -> current symbol).

    Intensities are rescaled so the average s pulse is exactly 1, then each
    group's deviation_pct is taken against the unconditional mean of its
    current symbol.  Groups with no members are omitted, as are the *->v
    rows when the v level sits below measurement_floor of the s level (a
    near-perfect null cannot be resolved into transitions).
    """
    if len(records) < 2:
        raise ValueError("need at least two records to form transitions")
    current = records[1:]
    s_vals = [rec.intensity for rec in current if rec.symbol == SYMBOL_SIGNAL]
    if not s_vals:
        raise ValueError("no s pulses after the first slot; cannot normalize")
    norm = float(np.mean(s_vals))
    if norm <= 0.0:
        raise ValueError("mean s intensity is not positive; cannot normalize")

    grouped: dict[str, list[float]] = {key: [] for key in TRANSITION_ORDER}
    by_symbol: dict[str, list[float]] = {SYMBOL_SIGNAL: [], SYMBOL_DECOY: []}
    for prev, cur in zip(records[:-1], records[1:]):
        value = cur.intensity / norm
        grouped[f"{prev.symbol}->{cur.symbol}"].append(value)
        by_symbol[cur.symbol].append(value)

    v_vals = by_symbol[SYMBOL_DECOY]
    v_below_floor = bool(v_vals) and float(np.mean(v_vals)) < measurement_floor

    out = []
    for key in TRANSITION_ORDER:
        values = grouped[key]
        if not values:
            continue
        if key.endswith(SYMBOL_DECOY) and v_below_floor:
            continue
        symbol_mean = float(np.mean(by_symbol[key[-1]]))
        mean = float(np.mean(values))
        out.append(
            TransitionStats(
                transition=key,
                mean=mean,
                std=float(np.std(values)),
                count=len(values),
                deviation_pct=100.0 * (mean - symbol_mean) / symbol_mean,
            )
        )
    return out


def quadrature_decoy_baseline(cfg: ExperimentConfig) -> list[TransitionStats]:
    """Patterning statistics for the quadrature-decoy MZM reference scheme."""
    if cfg.device != DEVICE_MZM_QUADRATURE_DECOY:
        raise ValueError(
            f"device={cfg.device!r}; quadrature_decoy_baseline requires "
            f"{DEVICE_MZM_QUADRATURE_DECOY!r}"
        )
    return classify_transitions(simulate_pattern(cfg))


def stability_experiment(
    device: str,
    coupling: CouplingRatio,
    drift: DriftSpec,
    duration_s: float,
    mixing: PolarizationMixing | None = None,
    path_dt_s: float = 0.1,
    meter_window_s: float = 1.0,
    mzm_bias_rad: float = math.pi / 2.0,
) -> tuple[PowerSeries, float]:
    """Unmodulated long-term power stability, as a power meter records it.

    Returns the meter-averaged series and its normalized standard deviation
    in percent.
    """
    if device == DEVICE_SAGNAC_TWO_LEVEL:
        if mixing is None:
            raise ValueError("sagnac stability needs a PolarizationMixing")
        raw = sagnac_stability_series(mixing, drift, duration_s, path_dt_s, coupling)
    elif device in (DEVICE_MZM_TWO_LEVEL, DEVICE_MZM_QUADRATURE_DECOY):
        raw = mzm_stability_series(drift, duration_s, path_dt_s, coupling, mzm_bias_rad)
    else:
        raise ValueError(f"device={device!r} not one of {DEVICES}")
    averaged = power_meter_average(raw, meter_window_s)
    return averaged, normalized_std(averaged)


def effective_half_wave_voltage(
    cfg: ExperimentConfig,
    scan_points: int = 61,
    bracket: tuple[float, float] = (0.05, 2.5),
) -> float:
    """Drive amplitude that extinguishes a single pulse through the loop.

    Scans the delivered pulse amplitude over bracket * v_pi for the minimum
    transmission of the full driver-plus-modulator pipeline.  When the
    anti-parallel window is quiet this recovers geom.v_pi; residual
    modulation of the counter-propagating pulse always pushes it higher,
    because the loop responds to the phase difference of the two passes.
    """
    if cfg.device != DEVICE_SAGNAC_TWO_LEVEL:
        raise ValueError("effective_half_wave_voltage requires the sagnac device")
    if scan_points < 5:
        raise ValueError(f"scan_points={scan_points} must be >= 5")
    lo, hi = bracket
    if not 0.0 < lo < hi:
        raise ValueError(f"bracket={bracket} must satisfy 0 < lo < hi")

    delay, peak = driver_pulse_response(cfg)
    lead = _pattern_lead(cfg)
    duration = 2.0 * lead
    grid = SampleGrid(
        dt_s=cfg.sample_dt_s, n=int(math.ceil(duration / cfg.sample_dt_s)) + 1
    )
    samples = np.zeros(grid.n)
    add_gaussian_pulses(
        samples, grid, np.array([lead]), np.array([1.0 / peak]),
        cfg.electrical_fwhm_s, cfg.truncate_fwhms,
    )
    unit = _apply_driver_filters(VoltageWaveform(grid=grid, samples=samples), cfg)
    phase_per_volt = net_sagnac_phase(unit, lead + delay, cfg.geometry, cfg.placement)

    v_pi = cfg.geometry.v_pi
    amps = np.linspace(lo * v_pi, hi * v_pi, scan_points)

    def transmission(amp: float) -> float:
        return float(interference_intensity(cfg.coupling, amp * phase_per_volt))

    values = np.array([transmission(a) for a in amps])
    i = int(np.argmin(values))
    if i == 0 or i == scan_points - 1:
        raise ValueError(
            "transmission minimum lies outside the scan bracket "
            f"[{amps[0]}, {amps[-1]}]; widen the bracket"
        )
    result = minimize_scalar(
        transmission,
        bounds=(amps[i - 1], amps[i + 1]),
        method="bounded",
        options={"xatol": 1e-9 * v_pi},
    )
    return float(result.x)


def with_seed(cfg: ExperimentConfig, seed: int) -> ExperimentConfig:
    """Copy of cfg with the detector/noise seed replaced."""
    return replace(cfg, seed=seed)
