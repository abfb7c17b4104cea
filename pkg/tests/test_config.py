"""Config parsing, canonical resolution, digests, and shipped files."""

import json
import math

import pytest

from sagnac_im.config import (
    ConfigError,
    digest,
    load_config_data,
    parse_experiment,
    parse_maxclock,
    parse_stability,
    parse_transfer,
    resolve_experiment,
    resolve_maxclock,
    resolve_stability,
    resolve_transfer,
    shipped_config_names,
)
from sagnac_im.traveling_wave import required_offset


def experiment_data(**overrides):
    data = {
        "device": "sagnac_two_level",
        "geometry": {"length_m": 0.005, "n_optical": 2.2, "n_rf": 2.2, "v_pi": 5.0},
        "placement": {"offset_s": 2e-10},
        "coupling": {"r": 0.8},
        "clock_rate_hz": 2e9,
        "electrical_fwhm_s": 125e-12,
        "optical_fwhm_s": 60e-12,
    }
    data.update(overrides)
    return data


def test_parse_experiment_defaults():
    cfg = parse_experiment(experiment_data())
    assert cfg.pattern_order == 10
    assert cfg.pattern_length == 1024
    assert cfg.pattern_seed is None
    assert cfg.bandwidth_hz == 8e9
    assert cfg.ac_cutoff_hz == 0.0
    assert cfg.static_bias_rad == math.pi
    assert cfg.bias_mode == "auto"
    assert cfg.detector_noise_rel == 0.02
    assert cfg.seed == 0
    assert cfg.sample_dt_s == 1e-12
    assert cfg.envelope_integration is False
    assert cfg.amplitude_v == 5.0


def test_coupling_spellings_are_equivalent():
    by_r = parse_experiment(
        experiment_data(coupling={"r": 0.8176654659258719})
    )
    by_er = parse_experiment(experiment_data(coupling={"extinction_db": 3.94}))
    assert by_er.coupling.r == pytest.approx(by_r.coupling.r, abs=1e-15)


def test_coupling_rejects_both_and_neither():
    with pytest.raises(ConfigError, match="either"):
        parse_experiment(
            experiment_data(coupling={"r": 0.8, "extinction_db": 3.94})
        )
    with pytest.raises(ConfigError, match="coupling.r"):
        parse_experiment(experiment_data(coupling={}))


def test_placement_auto_guard_resolves_to_required_offset():
    cfg = parse_experiment(
        experiment_data(placement={"auto_guard_s": 2.5e-11})
    )
    expect = required_offset(cfg.geometry, 125e-12, 2.5e-11)
    assert cfg.placement.offset_s == pytest.approx(expect, rel=1e-15)
    with pytest.raises(ConfigError, match="either"):
        parse_experiment(
            experiment_data(
                placement={"offset_s": 1e-10, "auto_guard_s": 1e-11}
            )
        )
    with pytest.raises(ConfigError, match="placement.offset_s"):
        parse_experiment(experiment_data(placement={}))


def test_missing_field_is_named():
    data = experiment_data()
    del data["optical_fwhm_s"]
    with pytest.raises(ConfigError, match="optical_fwhm_s"):
        parse_experiment(data)


def test_wrong_types_are_named():
    with pytest.raises(ConfigError, match="clock_rate_hz.*number"):
        parse_experiment(experiment_data(clock_rate_hz="fast"))
    with pytest.raises(ConfigError, match="pattern.order.*integer"):
        parse_experiment(experiment_data(pattern={"order": 10.5}))
    with pytest.raises(ConfigError, match="envelope_integration.*boolean"):
        parse_experiment(experiment_data(envelope_integration="yes"))
    with pytest.raises(ConfigError, match="pattern.seed"):
        parse_experiment(experiment_data(pattern={"seed": True}))
    with pytest.raises(ConfigError, match="device"):
        parse_experiment(experiment_data(device="bogus"))


def test_physics_validation_becomes_config_error():
    with pytest.raises(ConfigError, match="shorter"):
        parse_experiment(experiment_data(electrical_fwhm_s=1e-9))
    with pytest.raises(ConfigError, match="geometry"):
        parse_experiment(
            experiment_data(
                geometry={"length_m": -1.0, "n_optical": 2.2, "n_rf": 2.2, "v_pi": 5.0}
            )
        )
    with pytest.raises(ConfigError, match="coupling"):
        parse_experiment(experiment_data(coupling={"r": 0.2}))


def test_nullable_fields():
    cfg = parse_experiment(
        experiment_data(bandwidth_hz=None, drive_amplitude_v=None)
    )
    assert cfg.bandwidth_hz is None
    assert cfg.drive_amplitude_v is None
    assert resolve_experiment(cfg)["drive_amplitude_v"] == 5.0


def test_digest_ignores_spelling_and_key_order():
    a = parse_experiment(experiment_data())
    scrambled = dict(reversed(list(experiment_data().items())))
    b = parse_experiment(scrambled)
    assert digest(resolve_experiment(a)) == digest(resolve_experiment(b))

    explicit = parse_experiment(
        experiment_data(
            placement={"offset_s": required_offset(a.geometry, 125e-12, 2.5e-11)}
        )
    )
    auto = parse_experiment(experiment_data(placement={"auto_guard_s": 2.5e-11}))
    assert digest(resolve_experiment(auto)) == digest(resolve_experiment(explicit))


def test_digest_tracks_content_changes():
    base = digest(resolve_experiment(parse_experiment(experiment_data())))
    changed = digest(
        resolve_experiment(parse_experiment(experiment_data(seed=1)))
    )
    assert base != changed
    assert len(base) == 64
    assert set(base) <= set("0123456789abcdef")


def test_parse_stability_defaults_and_errors():
    data = {
        "drift": {"sigma_rad_per_sqrt_s": 0.25, "seed": 7},
        "mixing": {"epsilon": 0.07},
        "sagnac_coupling": {"extinction_db": 3.94},
        "mzm_coupling": {"extinction_db": 30.48},
    }
    st = parse_stability(data)
    assert st["duration_s"] == 3600.0
    assert st["path_dt_s"] == 0.1
    assert st["meter_window_s"] == 1.0
    assert st["mzm_bias_rad"] == pytest.approx(math.pi / 2.0)
    resolved = resolve_stability(st)
    assert resolved["drift"]["seed"] == 7
    assert len(digest(resolved)) == 64

    with pytest.raises(ConfigError, match="drift.seed"):
        parse_stability({**data, "drift": {"sigma_rad_per_sqrt_s": 0.25}})
    with pytest.raises(ConfigError, match="epsilon"):
        parse_stability({**data, "mixing": {"epsilon": 1.5}})


def test_parse_transfer_defaults_and_errors():
    tr = parse_transfer({"coupling": {"r": 0.8}, "v_pi": 5.0})
    assert tr["v_min"] == 0.0
    assert tr["v_max"] == 10.0
    assert tr["steps"] == 201
    assert tr["v_dc"] == 0.0
    assert resolve_transfer(tr)["coupling"]["r"] == 0.8

    with pytest.raises(ConfigError, match="v_pi"):
        parse_transfer({"coupling": {"r": 0.8}, "v_pi": 0.0})
    with pytest.raises(ConfigError, match="v_max"):
        parse_transfer({"coupling": {"r": 0.8}, "v_pi": 5.0, "v_max": -1.0})
    with pytest.raises(ConfigError, match="steps"):
        parse_transfer({"coupling": {"r": 0.8}, "v_pi": 5.0, "steps": 1})


def test_parse_maxclock_defaults_and_errors():
    data = {
        "geometry": {"length_m": 0.05, "n_optical": 2.2, "n_rf": 2.2, "v_pi": 5.0}
    }
    mc = parse_maxclock(data)
    assert mc["n_alignments"] == 997
    assert mc["reference_clock_hz"] is None
    assert resolve_maxclock(mc)["geometry"]["length_m"] == 0.05

    with pytest.raises(ConfigError, match="n_alignments"):
        parse_maxclock({**data, "n_alignments": 0})


def test_shipped_configs_all_parse():
    names = shipped_config_names()
    assert {
        "table1_8020",
        "table1_7525",
        "table1_5050",
        "quadrature_mzm",
        "fig1d",
        "fig1b",
        "maxclock",
    } <= set(names)
    for name in names:
        data = load_config_data(name)
        if name.startswith("table1") or name == "quadrature_mzm":
            parse_experiment(data)
        elif name == "fig1d":
            parse_stability(data)
        elif name == "fig1b":
            parse_transfer(data)
        elif name == "maxclock":
            parse_maxclock(data)


def test_load_config_by_path_and_failure_modes(tmp_path):
    good = tmp_path / "exp.json"
    good.write_text(json.dumps(experiment_data()))
    assert parse_experiment(load_config_data(str(good))).coupling.r == 0.8

    with pytest.raises(ConfigError, match="neither"):
        load_config_data("no_such_config")

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="valid JSON"):
        load_config_data(str(bad))

    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2]")
    with pytest.raises(ConfigError, match="object"):
        load_config_data(str(arr))
