"""Figure rendering for the CLI reports.

Everything goes through the Agg backend straight to files; nothing here
opens a window.  Renders are deterministic so report reruns byte-match.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .pattern import TransitionStats

_DPI = 144


def save_er_curve(rs: np.ndarray, er_db: Sequence[float | None], path: Path) -> None:
    """Extinction ratio against coupling ratio; unbounded points leave a gap."""
    finite = np.array([np.nan if v is None else v for v in er_db], dtype=float)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(rs, finite, color="tab:blue")
    ax.set_xlabel("coupling ratio r")
    ax.set_ylabel("max extinction ratio (dB)")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_transfer_curve(
    volts: np.ndarray,
    configured: np.ndarray,
    balanced: np.ndarray,
    r: float,
    path: Path,
) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(volts, configured, color="tab:blue", label=f"r = {r:.4f}")
    ax.plot(volts, balanced, color="tab:gray", linestyle="--", label="r = 0.5")
    ax.set_xlabel("drive voltage (V)")
    ax.set_ylabel("transmission")
    ax.set_ylim(-0.05, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower left")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_patterning(stats: Sequence[TransitionStats], path: Path) -> None:
    """Mean level and percent deviation for each transition class."""
    labels = [s.transition for s in stats]
    means = [s.mean for s in stats]
    stds = [s.std for s in stats]
    devs = [s.deviation_pct for s in stats]
    x = np.arange(len(labels))
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(8.6, 4.0))
    ax0.bar(x, means, yerr=stds, color="tab:blue", capsize=3)
    ax0.set_xticks(x)
    ax0.set_xticklabels(labels)
    ax0.set_ylabel("normalized intensity")
    ax0.grid(True, axis="y", alpha=0.3)
    ax1.bar(x, devs, color="tab:orange")
    ax1.axhline(0.0, color="black", linewidth=0.8)
    ax1.set_xticks(x)
    ax1.set_xticklabels(labels)
    ax1.set_ylabel("deviation from class mean (%)")
    ax1.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_stability(
    times_s: np.ndarray,
    sagnac: np.ndarray,
    mzm: np.ndarray,
    path: Path,
) -> None:
    hours = times_s / 3600.0
    fig, ax = plt.subplots(figsize=(6.8, 4.2))
    ax.plot(hours, mzm, color="tab:red", linewidth=0.7, label="Mach-Zehnder")
    ax.plot(hours, sagnac, color="tab:blue", linewidth=0.7, label="Sagnac")
    ax.set_xlabel("time (h)")
    ax.set_ylabel("normalized power")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower left")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_overlap_scan(
    clocks_hz: np.ndarray,
    counts: np.ndarray,
    f_max_hz: float,
    path: Path,
) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.step(clocks_hz / 1e9, counts, where="post", color="tab:blue")
    ax.axvline(f_max_hz / 1e9, color="tab:red", linestyle="--", label="single-pulse limit")
    ax.set_xlabel("clock rate (GHz)")
    ax.set_ylabel("counter-propagating pulses in transit")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
