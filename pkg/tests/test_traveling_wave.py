"""Traveling-wave phase accumulation and the loop clock-rate limit."""

import math

import numpy as np
import pytest

from sagnac_im.drive import SampleGrid, VoltageWaveform, add_gaussian_pulses
from sagnac_im.traveling_wave import (
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

GEOM_5CM = ModulatorGeometry(length_m=0.05, n_optical=2.2, n_rf=2.2, v_pi=5.0)
GEOM_5MM = ModulatorGeometry(length_m=0.005, n_optical=2.2, n_rf=2.2, v_pi=5.0)


def noisy_wave(rng, dt, n):
    return VoltageWaveform(
        grid=SampleGrid(dt_s=dt, n=n), samples=rng.normal(size=n)
    )


def test_walk_through_values():
    # (n_o + n_rf) * L / c for the two crystal lengths used throughout
    assert walk_through_s(GEOM_5CM) == pytest.approx(733.84e-12, rel=1e-4)
    assert walk_through_s(GEOM_5MM) == pytest.approx(73.384e-12, rel=1e-4)


def test_interaction_windows_by_hand():
    geom = ModulatorGeometry(length_m=0.03, n_optical=2.5, n_rf=1.9, v_pi=5.0)
    t = 2e-9
    lo, hi = interaction_window(geom, t, Direction.PARALLEL)
    assert lo == pytest.approx(t, abs=1e-18)
    assert hi - lo == pytest.approx(0.03 * (2.5 - 1.9) / C_VACUUM, rel=1e-12)
    lo, hi = interaction_window(geom, t, Direction.ANTI_PARALLEL)
    assert lo == pytest.approx(t - 0.03 * 1.9 / C_VACUUM, rel=1e-12)
    assert hi - lo == pytest.approx(walk_through_s(geom), rel=1e-12)


def test_parallel_window_orientation_flips_with_index_mismatch():
    fast_rf = ModulatorGeometry(length_m=0.03, n_optical=1.9, n_rf=2.5, v_pi=5.0)
    lo, hi = interaction_window(fast_rf, 1e-9, Direction.PARALLEL)
    assert lo < hi
    assert hi == pytest.approx(1e-9, abs=1e-18)


def test_velocity_matched_phase_is_pointwise():
    # with n_optical == n_rf the pulse rides one voltage value the whole way
    rng = np.random.default_rng(17)
    for _ in range(100):
        wave = noisy_wave(rng, 1e-12, 512)
        t = float(rng.uniform(0.1e-9, 0.4e-9))
        phase = accumulated_phase(wave, t, Direction.PARALLEL, GEOM_5CM)
        expect = math.pi * float(wave.value_at(t)) / GEOM_5CM.v_pi
        assert phase == pytest.approx(expect, abs=1e-9)


def test_net_phase_cancels_added_dc():
    rng = np.random.default_rng(23)
    placement = LoopPlacement(offset_s=1.2e-9)
    grid = SampleGrid(dt_s=1e-12, n=4096)
    for _ in range(20):
        samples = rng.normal(size=grid.n)
        const = float(rng.uniform(-40.0, 40.0))
        a = VoltageWaveform(grid=grid, samples=samples)
        b = VoltageWaveform(grid=grid, samples=samples + const)
        t = float(rng.uniform(0.5e-9, 1.5e-9))
        pa = net_sagnac_phase(a, t, GEOM_5CM, placement)
        pb = net_sagnac_phase(b, t, GEOM_5CM, placement)
        assert pb == pytest.approx(pa, abs=1e-9)


def test_constant_drive_gives_zero_net_phase():
    grid = SampleGrid(dt_s=1e-12, n=4096)
    wave = VoltageWaveform(grid=grid, samples=np.full(grid.n, 3.7))
    phase = net_sagnac_phase(wave, 1e-9, GEOM_5CM, LoopPlacement(offset_s=1e-9))
    assert phase == pytest.approx(0.0, abs=1e-12)


def test_accumulated_phase_matches_fine_transit_oracle():
    # independent oracle: march the pulse along the crystal on a fine spatial
    # grid and average the retarded electrode voltage it actually sees,
    # V(z, t) = V_drive(t - z * n_rf / c) with the drive referenced at z = 0
    geom = ModulatorGeometry(length_m=0.02, n_optical=2.6, n_rf=1.8, v_pi=4.0)
    grid = SampleGrid(dt_s=1e-12, n=2048)
    samples = np.zeros(grid.n)
    add_gaussian_pulses(samples, grid, np.array([0.9e-9]), np.array([3.0]), 120e-12)
    wave = VoltageWaveform(grid=grid, samples=samples)
    launch = 0.9e-9
    s = np.linspace(0.0, geom.length_m, 20001)

    # parallel: enters z = 0, position s at t = launch + s n_o / c
    t_par = launch + s * (geom.n_optical - geom.n_rf) / C_VACUUM
    oracle = math.pi * float(np.mean(wave.value_at(t_par))) / geom.v_pi
    phase = accumulated_phase(wave, launch, Direction.PARALLEL, geom)
    assert phase == pytest.approx(oracle, rel=1e-4, abs=1e-9)

    # anti-parallel: enters z = L, so z = L - s after traveling s
    t_anti = (
        launch
        + s * geom.n_optical / C_VACUUM
        - (geom.length_m - s) * geom.n_rf / C_VACUUM
    )
    oracle = math.pi * float(np.mean(wave.value_at(t_anti))) / geom.v_pi
    phase = accumulated_phase(wave, launch, Direction.ANTI_PARALLEL, geom)
    assert phase == pytest.approx(oracle, rel=1e-4, abs=1e-9)


def test_phase_converges_as_min_steps_doubles():
    rng = np.random.default_rng(31)
    wave = noisy_wave(rng, 4e-12, 1024)
    smooth = VoltageWaveform(
        grid=wave.grid,
        samples=np.convolve(wave.samples, np.ones(32) / 32.0, mode="same"),
    )
    t = 1.5e-9
    geom = ModulatorGeometry(length_m=0.05, n_optical=2.4, n_rf=1.9, v_pi=5.0)
    coarse = accumulated_phase(smooth, t, Direction.ANTI_PARALLEL, geom, min_steps=256)
    fine = accumulated_phase(smooth, t, Direction.ANTI_PARALLEL, geom, min_steps=512)
    finest = accumulated_phase(smooth, t, Direction.ANTI_PARALLEL, geom, min_steps=4096)
    assert abs(fine - coarse) < 1e-8
    assert abs(finest - fine) < 1e-8


def test_integrator_exact_for_sampled_linear_ramp():
    # trapezoid over the union of grid nodes is exact for piecewise-linear input
    grid = SampleGrid(dt_s=1e-12, n=4096)
    times = grid.times()
    wave = VoltageWaveform(grid=grid, samples=2.5e9 * times)
    geom = ModulatorGeometry(length_m=0.05, n_optical=2.4, n_rf=1.9, v_pi=5.0)
    t = 2e-9
    lo, hi = interaction_window(geom, t, Direction.ANTI_PARALLEL)
    expect = math.pi * 2.5e9 * 0.5 * (lo + hi) / geom.v_pi
    phase = accumulated_phase(wave, t, Direction.ANTI_PARALLEL, geom)
    assert phase == pytest.approx(expect, rel=1e-12)


def test_required_offset_quiets_anti_parallel_window():
    fwhm = 125e-12
    offset = required_offset(GEOM_5CM, fwhm, guard_s=100e-12)
    assert offset == pytest.approx(
        walk_through_s(GEOM_5CM) / 2.0 + fwhm + 100e-12, rel=1e-12
    )
    grid = SampleGrid(dt_s=1e-12, n=6001)
    samples = np.zeros(grid.n)
    launch = 2e-9
    add_gaussian_pulses(samples, grid, np.array([launch]), np.array([5.0]), fwhm)
    wave = VoltageWaveform(grid=grid, samples=samples)
    anti = accumulated_phase(
        wave, launch + offset, Direction.ANTI_PARALLEL, GEOM_5CM
    )
    assert abs(anti) < 1e-4
    par = accumulated_phase(wave, launch, Direction.PARALLEL, GEOM_5CM)
    net = net_sagnac_phase(wave, launch, GEOM_5CM, LoopPlacement(offset_s=offset))
    assert net == pytest.approx(par - anti, abs=1e-15)


def test_max_clock_rate_values():
    assert max_clock_rate(GEOM_5CM) == pytest.approx(1.3626929909090908e9, rel=1e-12)
    assert max_clock_rate(GEOM_5MM) == pytest.approx(13.626929909090909e9, rel=1e-12)


@pytest.mark.parametrize("geom", [GEOM_5CM, GEOM_5MM])
def test_overlap_count_at_and_above_limit(geom):
    f_max = max_clock_rate(geom)
    assert anti_parallel_overlap_count(geom, f_max) == 1
    assert anti_parallel_overlap_count(geom, 0.5 * f_max) == 1
    assert anti_parallel_overlap_count(geom, 1.5 * f_max) >= 2
    assert anti_parallel_overlap_count(geom, 3.0 * f_max) >= 3


def test_overlap_oracle_agrees_with_formula_on_random_geometries():
    rng = np.random.default_rng(41)
    for _ in range(20):
        geom = ModulatorGeometry(
            length_m=float(rng.uniform(0.004, 0.08)),
            n_optical=float(rng.uniform(1.5, 4.5)),
            n_rf=float(rng.uniform(1.5, 4.5)),
            v_pi=5.0,
        )
        f_max = max_clock_rate(geom)
        assert anti_parallel_overlap_count(geom, 0.99 * f_max) == 1
        assert anti_parallel_overlap_count(geom, 1.26 * f_max) >= 2


def test_window_outside_waveform_is_rejected():
    grid = SampleGrid(dt_s=1e-12, n=256)
    wave = VoltageWaveform(grid=grid, samples=np.zeros(grid.n))
    with pytest.raises(ValueError, match="window"):
        accumulated_phase(wave, 1e-14, Direction.ANTI_PARALLEL, GEOM_5CM)
    mismatched = ModulatorGeometry(length_m=0.05, n_optical=2.4, n_rf=1.9, v_pi=5.0)
    with pytest.raises(ValueError, match="window"):
        accumulated_phase(wave, grid.duration_s, Direction.PARALLEL, mismatched)


def test_geometry_validation():
    with pytest.raises(ValueError):
        ModulatorGeometry(length_m=0.0, n_optical=2.2, n_rf=2.2, v_pi=5.0)
    with pytest.raises(ValueError, match="indices"):
        ModulatorGeometry(length_m=0.05, n_optical=0.5, n_rf=2.2, v_pi=5.0)
    with pytest.raises(ValueError):
        required_offset(GEOM_5CM, 0.0)
    with pytest.raises(ValueError):
        anti_parallel_overlap_count(GEOM_5CM, -1.0)
