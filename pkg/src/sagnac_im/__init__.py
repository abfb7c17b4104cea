"""Time-domain simulator for Sagnac-loop intensity modulators.

A fiber Sagnac loop with an off-center traveling-wave phase modulator acts
as an intensity modulator whose extinction ratio is set by a beamsplitter
coupling ratio rather than a bias voltage.  This package models that
device alongside a conventional Mach-Zehnder reference: drive-waveform
synthesis with realistic driver filtering, counter-propagating phase
accumulation, pattern-dependence statistics, and long-horizon drift
behavior.
"""

from .drift import (
    QUADRATURE_PHASE,
    DriftSpec,
    PolarizationMixing,
    PowerSeries,
    mzm_dc_phase_path,
    mzm_stability_series,
    normalized_std,
    power_meter_average,
    sagnac_stability_series,
)
from .drive import (
    SYMBOL_DECOY,
    SYMBOL_SIGNAL,
    AcCouplingSpec,
    BitPattern,
    OpticalPulseTrain,
    SampleGrid,
    VoltageWaveform,
    ac_couple,
    add_gaussian_pulses,
    bandlimit,
    baseline,
    gaussian_pulse_area,
    lfsr_bits,
    prbs,
    synthesize_drive,
)
from .interference import (
    UNBOUNDED,
    CouplingRatio,
    ExtinctionRatio,
    complementary_port_intensity,
    coupling_from_extinction_db,
    interference_intensity,
    max_extinction_ratio_db,
    mzm_transmission,
    small_signal_sensitivity,
)
from .pattern import (
    DEVICE_MZM_QUADRATURE_DECOY,
    DEVICE_MZM_TWO_LEVEL,
    DEVICE_SAGNAC_TWO_LEVEL,
    DEVICES,
    TRANSITION_ORDER,
    ExperimentConfig,
    IntensityRecord,
    TransitionStats,
    classify_transitions,
    driver_pulse_response,
    effective_half_wave_voltage,
    quadrature_decoy_baseline,
    simulate_pattern,
    stability_experiment,
    synthesize_pattern_drive,
    with_seed,
)
from .traveling_wave import (
    C_VACUUM,
    Direction,
    LoopPlacement,
    ModulatorGeometry,
    accumulated_phase,
    anti_parallel_overlap_count,
    interaction_window,
    max_clock_rate,
    net_sagnac_phase,
    required_offset,
    walk_through_s,
)

__version__ = "0.1.0"

__all__ = [
    "C_VACUUM",
    "DEVICES",
    "DEVICE_MZM_QUADRATURE_DECOY",
    "DEVICE_MZM_TWO_LEVEL",
    "DEVICE_SAGNAC_TWO_LEVEL",
    "QUADRATURE_PHASE",
    "SYMBOL_DECOY",
    "SYMBOL_SIGNAL",
    "TRANSITION_ORDER",
    "UNBOUNDED",
    "AcCouplingSpec",
    "BitPattern",
    "CouplingRatio",
    "Direction",
    "DriftSpec",
    "ExperimentConfig",
    "ExtinctionRatio",
    "IntensityRecord",
    "LoopPlacement",
    "ModulatorGeometry",
    "OpticalPulseTrain",
    "PolarizationMixing",
    "PowerSeries",
    "SampleGrid",
    "TransitionStats",
    "VoltageWaveform",
    "ac_couple",
    "accumulated_phase",
    "add_gaussian_pulses",
    "anti_parallel_overlap_count",
    "bandlimit",
    "baseline",
    "classify_transitions",
    "complementary_port_intensity",
    "coupling_from_extinction_db",
    "driver_pulse_response",
    "effective_half_wave_voltage",
    "gaussian_pulse_area",
    "interaction_window",
    "interference_intensity",
    "lfsr_bits",
    "max_clock_rate",
    "max_extinction_ratio_db",
    "mzm_dc_phase_path",
    "mzm_stability_series",
    "mzm_transmission",
    "net_sagnac_phase",
    "normalized_std",
    "power_meter_average",
    "prbs",
    "quadrature_decoy_baseline",
    "required_offset",
    "sagnac_stability_series",
    "simulate_pattern",
    "small_signal_sensitivity",
    "stability_experiment",
    "synthesize_drive",
    "synthesize_pattern_drive",
    "walk_through_s",
    "with_seed",
]
