"""JSON experiment configs: loading, validation, resolution, digests.

Configs are plain JSON.  Two fields accept alternative spellings that get
resolved to concrete numbers before anything runs:

* "coupling": {"r": 0.8} or {"extinction_db": 3.94}; the latter converts a
  measured extinction ratio into the effective splitting ratio.
* "placement": {"offset_s": 2e-10} or {"auto_guard_s": 2.5e-11}; the latter
  computes the minimal quiet-window offset for the configured geometry and
  pulse width.

The config digest is a SHA-256 over the canonical JSON serialization of the
fully resolved config (sorted keys, no whitespace), so identical physics
yields an identical digest regardless of input spelling.
"""

from __future__ import annotations

import hashlib
import json
import math
from importlib import resources
from pathlib import Path
from typing import Any

from .drift import DriftSpec, PolarizationMixing
from .interference import CouplingRatio, ExtinctionRatio, coupling_from_extinction_db
from .pattern import DEVICES, ExperimentConfig
from .traveling_wave import LoopPlacement, ModulatorGeometry, required_offset


class ConfigError(ValueError):
    """A config file is malformed or inconsistent; message names the field."""


_MISSING = object()


def _want(mapping: dict, key: str, kind, where: str, default=_MISSING):
    if key not in mapping:
        if default is _MISSING:
            raise ConfigError(f"config field '{where}{key}' is missing")
        return default
    value = mapping[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config field '{where}{key}' must be a number")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config field '{where}{key}' must be an integer")
        return value
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"config field '{where}{key}' must be a boolean")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"config field '{where}{key}' must be a string")
        return value
    if kind is dict:
        if not isinstance(value, dict):
            raise ConfigError(f"config field '{where}{key}' must be an object")
        return value
    raise AssertionError(kind)


def _optional_float(mapping: dict, key: str, where: str, default):
    if key in mapping and mapping[key] is None:
        return None
    return _want(mapping, key, float, where, default)


def parse_geometry(data: dict, where: str = "geometry.") -> ModulatorGeometry:
    try:
        return ModulatorGeometry(
            length_m=_want(data, "length_m", float, where),
            n_optical=_want(data, "n_optical", float, where),
            n_rf=_want(data, "n_rf", float, where),
            v_pi=_want(data, "v_pi", float, where),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"config field '{where.rstrip('.')}': {exc}") from exc


def parse_coupling(data: dict, where: str = "coupling.") -> CouplingRatio:
    if "r" in data and "extinction_db" in data:
        raise ConfigError(
            f"config field '{where.rstrip('.')}' must give either r or "
            "extinction_db, not both"
        )
    try:
        if "extinction_db" in data:
            er = _want(data, "extinction_db", float, where)
            return coupling_from_extinction_db(ExtinctionRatio(er))
        return CouplingRatio(r=_want(data, "r", float, where))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"config field '{where.rstrip('.')}': {exc}") from exc


def parse_placement(
    data: dict, geometry: ModulatorGeometry, electrical_fwhm_s: float,
    where: str = "placement.",
) -> LoopPlacement:
    if "offset_s" in data and "auto_guard_s" in data:
        raise ConfigError(
            f"config field '{where.rstrip('.')}' must give either offset_s or "
            "auto_guard_s, not both"
        )
    if "auto_guard_s" in data:
        guard = _want(data, "auto_guard_s", float, where)
        try:
            return LoopPlacement(
                offset_s=required_offset(geometry, electrical_fwhm_s, guard)
            )
        except ValueError as exc:
            raise ConfigError(f"config field '{where}auto_guard_s': {exc}") from exc
    return LoopPlacement(offset_s=_want(data, "offset_s", float, where))


def parse_experiment(data: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from a parsed JSON object."""
    device = _want(data, "device", str, "")
    if device not in DEVICES:
        raise ConfigError(
            f"config field 'device' must be one of {list(DEVICES)}, got {device!r}"
        )
    geometry = parse_geometry(_want(data, "geometry", dict, ""))
    electrical_fwhm = _want(data, "electrical_fwhm_s", float, "")
    placement = parse_placement(
        _want(data, "placement", dict, ""), geometry, electrical_fwhm
    )
    coupling = parse_coupling(_want(data, "coupling", dict, ""))
    pat = _want(data, "pattern", dict, "", default={})
    seed_field = pat.get("seed")
    if seed_field is not None and (isinstance(seed_field, bool) or not isinstance(seed_field, int)):
        raise ConfigError("config field 'pattern.seed' must be an integer or null")
    try:
        return ExperimentConfig(
            device=device,
            geometry=geometry,
            placement=placement,
            coupling=coupling,
            clock_rate_hz=_want(data, "clock_rate_hz", float, ""),
            pattern_order=_want(pat, "order", int, "pattern.", default=10),
            pattern_seed=seed_field,
            pattern_length=_want(pat, "length", int, "pattern.", default=1024),
            electrical_fwhm_s=electrical_fwhm,
            optical_fwhm_s=_want(data, "optical_fwhm_s", float, ""),
            drive_amplitude_v=_optional_float(data, "drive_amplitude_v", "", None),
            bandwidth_hz=_optional_float(data, "bandwidth_hz", "", 8e9),
            ac_cutoff_hz=_want(data, "ac_cutoff_hz", float, "", default=0.0),
            static_bias_rad=_want(data, "static_bias_rad", float, "", default=math.pi),
            bias_mode=_want(data, "bias_mode", str, "", default="auto"),
            detector_noise_rel=_want(data, "detector_noise_rel", float, "", default=0.02),
            seed=_want(data, "seed", int, "", default=0),
            sample_dt_s=_want(data, "sample_dt_s", float, "", default=1e-12),
            envelope_integration=_want(
                data, "envelope_integration", bool, "", default=False
            ),
            truncate_fwhms=_want(data, "truncate_fwhms", float, "", default=5.0),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def resolve_experiment(cfg: ExperimentConfig) -> dict[str, Any]:
    """Canonical fully-resolved form of an experiment config."""
    return {
        "device": cfg.device,
        "geometry": {
            "length_m": cfg.geometry.length_m,
            "n_optical": cfg.geometry.n_optical,
            "n_rf": cfg.geometry.n_rf,
            "v_pi": cfg.geometry.v_pi,
        },
        "placement": {"offset_s": cfg.placement.offset_s},
        "coupling": {"r": cfg.coupling.r},
        "clock_rate_hz": cfg.clock_rate_hz,
        "pattern": {
            "order": cfg.pattern_order,
            "seed": cfg.pattern_seed,
            "length": cfg.pattern_length,
        },
        "electrical_fwhm_s": cfg.electrical_fwhm_s,
        "optical_fwhm_s": cfg.optical_fwhm_s,
        "drive_amplitude_v": cfg.amplitude_v,
        "bandwidth_hz": cfg.bandwidth_hz,
        "ac_cutoff_hz": cfg.ac_cutoff_hz,
        "static_bias_rad": cfg.static_bias_rad,
        "bias_mode": cfg.bias_mode,
        "detector_noise_rel": cfg.detector_noise_rel,
        "seed": cfg.seed,
        "sample_dt_s": cfg.sample_dt_s,
        "envelope_integration": cfg.envelope_integration,
        "truncate_fwhms": cfg.truncate_fwhms,
    }


def parse_stability(data: dict) -> dict[str, Any]:
    """Stability-run config: drift plus mixing plus both couplings."""
    drift_raw = _want(data, "drift", dict, "")
    mixing_raw = _want(data, "mixing", dict, "")
    try:
        drift = DriftSpec(
            sigma_rad_per_sqrt_s=_want(
                drift_raw, "sigma_rad_per_sqrt_s", float, "drift."
            ),
            seed=_want(drift_raw, "seed", int, "drift."),
        )
        mixing = PolarizationMixing(
            epsilon=_want(mixing_raw, "epsilon", float, "mixing."),
            seed=_want(mixing_raw, "seed", int, "mixing.", default=0),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return {
        "drift": drift,
        "mixing": mixing,
        "sagnac_coupling": parse_coupling(
            _want(data, "sagnac_coupling", dict, ""), "sagnac_coupling."
        ),
        "mzm_coupling": parse_coupling(
            _want(data, "mzm_coupling", dict, ""), "mzm_coupling."
        ),
        "mzm_bias_rad": _want(data, "mzm_bias_rad", float, "", default=math.pi / 2.0),
        "duration_s": _want(data, "duration_s", float, "", default=3600.0),
        "path_dt_s": _want(data, "path_dt_s", float, "", default=0.1),
        "meter_window_s": _want(data, "meter_window_s", float, "", default=1.0),
    }


def resolve_stability(st: dict[str, Any]) -> dict[str, Any]:
    return {
        "drift": {
            "sigma_rad_per_sqrt_s": st["drift"].sigma_rad_per_sqrt_s,
            "seed": st["drift"].seed,
        },
        "mixing": {"epsilon": st["mixing"].epsilon, "seed": st["mixing"].seed},
        "sagnac_coupling": {"r": st["sagnac_coupling"].r},
        "mzm_coupling": {"r": st["mzm_coupling"].r},
        "mzm_bias_rad": st["mzm_bias_rad"],
        "duration_s": st["duration_s"],
        "path_dt_s": st["path_dt_s"],
        "meter_window_s": st["meter_window_s"],
    }


def parse_transfer(data: dict) -> dict[str, Any]:
    """Transfer-curve sweep config: coupling, half-wave voltage, sweep range."""
    coupling = parse_coupling(_want(data, "coupling", dict, ""))
    v_pi = _want(data, "v_pi", float, "")
    if v_pi <= 0.0:
        raise ConfigError("config field 'v_pi' must be positive")
    v_min = _want(data, "v_min", float, "", default=0.0)
    v_max = _want(data, "v_max", float, "", default=2.0 * v_pi)
    if not v_max > v_min:
        raise ConfigError("config field 'v_max' must exceed v_min")
    steps = _want(data, "steps", int, "", default=201)
    if steps < 2:
        raise ConfigError("config field 'steps' must be at least 2")
    return {
        "coupling": coupling,
        "v_pi": v_pi,
        "v_dc": _want(data, "v_dc", float, "", default=0.0),
        "v_min": v_min,
        "v_max": v_max,
        "steps": steps,
    }


def resolve_transfer(tr: dict[str, Any]) -> dict[str, Any]:
    return {
        "coupling": {"r": tr["coupling"].r},
        "v_pi": tr["v_pi"],
        "v_dc": tr["v_dc"],
        "v_min": tr["v_min"],
        "v_max": tr["v_max"],
        "steps": tr["steps"],
    }


def parse_maxclock(data: dict) -> dict[str, Any]:
    """Clock-limit config: geometry plus the overlap-scan controls."""
    n_alignments = _want(data, "n_alignments", int, "", default=997)
    if n_alignments < 1:
        raise ConfigError("config field 'n_alignments' must be positive")
    return {
        "geometry": parse_geometry(_want(data, "geometry", dict, "")),
        "reference_clock_hz": _optional_float(data, "reference_clock_hz", "", None),
        "n_alignments": n_alignments,
    }


def resolve_maxclock(mc: dict[str, Any]) -> dict[str, Any]:
    geom = mc["geometry"]
    return {
        "geometry": {
            "length_m": geom.length_m,
            "n_optical": geom.n_optical,
            "n_rf": geom.n_rf,
            "v_pi": geom.v_pi,
        },
        "reference_clock_hz": mc["reference_clock_hz"],
        "n_alignments": mc["n_alignments"],
    }


def digest(resolved: dict[str, Any]) -> str:
    """SHA-256 hex digest of the canonical JSON form."""
    canonical = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def load_config_data(spec: str) -> dict:
    """Load JSON config from a path, or by shipped-config name."""
    path = Path(spec)
    if not path.exists():
        candidate = resources.files("sagnac_im").joinpath(
            "configs", spec if spec.endswith(".json") else f"{spec}.json"
        )
        if candidate.is_file():
            path = Path(str(candidate))
        else:
            raise ConfigError(f"config '{spec}' is neither a file nor a shipped config")
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config '{spec}' is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config '{spec}' must contain a JSON object")
    return data


def shipped_config_names() -> list[str]:
    root = resources.files("sagnac_im").joinpath("configs")
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))
