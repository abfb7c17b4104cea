#!/usr/bin/env python3
"""Regenerate the calibrated constants baked into the shipped configs.

Three numbers in src/sagnac_im/configs/ come from fits, not first
principles:

* ac_cutoff_hz in table1_8020 / table1_7525 / quadrature_mzm: the
  AC-coupling corner whose previous-symbol baseline split equals 2% of
  the half-wave voltage at the pulse sampling instant.
* drift.sigma_rad_per_sqrt_s in fig1d: chosen from a coarse grid as the
  smallest value whose fixed-seed realization keeps the Sagnac spread
  within 1.5x across 100 s / 1000 s / 10000 s runs while the MZM spread
  still rises strictly and the 3600 s MZM value stays in the 40..80%
  window around the reference 61.2%.
* mixing.epsilon in fig1d: fitted so the Sagnac 3600 s spread is 1.4%.

Run with no arguments; prints the constants and the verification
statistics.  Copy the values into the configs by hand if they change.
"""

import argparse

from sagnac_im.calibrate import calibrate_ac_cutoff, calibrate_mixing_epsilon
from sagnac_im.config import load_config_data, parse_experiment
from sagnac_im.drift import DriftSpec, PolarizationMixing
from sagnac_im.interference import ExtinctionRatio, coupling_from_extinction_db
from sagnac_im.pattern import (
    DEVICE_MZM_TWO_LEVEL,
    DEVICE_SAGNAC_TWO_LEVEL,
    stability_experiment,
)

WANDER_FRACTION = 0.02
MZM_STD_REF_PCT = 61.2
SAGNAC_STD_TARGET_PCT = 1.4
DRIFT_SEED = 7
SIGMA_GRID = [round(0.05 * k, 2) for k in range(1, 11)]


def pick_sigma(mzm_coupling, sagnac_coupling) -> float:
    for sigma in SIGMA_GRID:
        drift = DriftSpec(sigma_rad_per_sqrt_s=sigma, seed=DRIFT_SEED)
        eps = calibrate_mixing_epsilon(sagnac_coupling, drift, SAGNAC_STD_TARGET_PCT)
        mix = PolarizationMixing(epsilon=eps)
        mzm, sag = [], []
        for dur in (100.0, 1000.0, 3600.0, 10000.0):
            _, m = stability_experiment(DEVICE_MZM_TWO_LEVEL, mzm_coupling, drift, dur)
            _, s = stability_experiment(
                DEVICE_SAGNAC_TWO_LEVEL, sagnac_coupling, drift, dur, mixing=mix
            )
            mzm.append(m)
            sag.append(s)
        ratio = max(sag[0], sag[1], sag[3]) / min(sag[0], sag[1], sag[3])
        strict = mzm[0] < mzm[1] < mzm[3]
        if ratio <= 1.5 and strict and 40.0 <= mzm[2] <= 80.0:
            return sigma
    raise RuntimeError("no sigma on the grid satisfies the selection rules")


def main() -> int:
    argparse.ArgumentParser(description=__doc__).parse_args()

    quad = parse_experiment(load_config_data("quadrature_mzm"))
    fc = calibrate_ac_cutoff(quad, WANDER_FRACTION)
    print(f"ac_cutoff_hz = {fc!r}")

    mzm_c = coupling_from_extinction_db(ExtinctionRatio(30.48))
    sag_c = coupling_from_extinction_db(ExtinctionRatio(3.94))
    sigma = pick_sigma(mzm_c, sag_c)
    print(f"drift sigma_rad_per_sqrt_s = {sigma!r}  (seed {DRIFT_SEED})")

    drift = DriftSpec(sigma_rad_per_sqrt_s=sigma, seed=DRIFT_SEED)
    eps = calibrate_mixing_epsilon(sag_c, drift, SAGNAC_STD_TARGET_PCT)
    print(f"mixing epsilon = {eps!r}")

    mix = PolarizationMixing(epsilon=eps)
    _, m = stability_experiment(DEVICE_MZM_TWO_LEVEL, mzm_c, drift, 3600.0)
    _, s = stability_experiment(
        DEVICE_SAGNAC_TWO_LEVEL, sag_c, drift, 3600.0, mixing=mix
    )
    print(f"verify: mzm@3600s = {m:.3f}%   sagnac@3600s = {s:.4f}%")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
