"""Command-line front end.

Five subcommands cover the canonical experiments: the extinction-ratio
design curve, the static transfer curve, pattern-dependence analysis of a
PRBS run, long-horizon power stability, and the counter-propagating clock
limit.  Each writes delimited plot data plus a JSON summary carrying the
resolved config, its digest, and the toolkit version, and renders a PNG
next to the data unless --no-plot is given.  Identical config and seed
produce byte-identical files, so reports can be diffed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .config import (
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
from .drift import DriftSpec, PolarizationMixing
from .interference import (
    CouplingRatio,
    max_extinction_ratio_db,
    mzm_transmission,
)
from .pattern import (
    DEVICE_MZM_TWO_LEVEL,
    DEVICE_SAGNAC_TWO_LEVEL,
    classify_transitions,
    simulate_pattern,
    stability_experiment,
    with_seed,
)
from .traveling_wave import anti_parallel_overlap_count, max_clock_rate, walk_through_s

_SEED_MAX = 2**64


@dataclass(frozen=True)
class RunManifest:
    """Provenance block embedded in every JSON summary."""

    command: str
    config_digest: str
    seed: int | None
    outputs: tuple[str, ...]
    version: str

    def as_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "config_digest": self.config_digest,
            "seed": self.seed,
            "outputs": list(self.outputs),
            "version": self.version,
        }


def _fmt(value: float) -> str:
    # repr of a float is the shortest string that round-trips the bits
    return repr(float(value))


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_json(path: Path, payload: dict[str, Any]) -> None:
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _summary(
    command: str,
    config_digest: str,
    seed: int | None,
    outputs: Sequence[Path],
    config: dict[str, Any],
    results: dict[str, Any],
) -> dict[str, Any]:
    manifest = RunManifest(
        command=command,
        config_digest=config_digest,
        seed=seed,
        outputs=tuple(p.name for p in outputs),
        version=__version__,
    )
    return {"manifest": manifest.as_dict(), "config": config, "results": results}


def _announce(paths: Sequence[Path]) -> None:
    for p in paths:
        print(f"wrote {p}")


def _check_seed(seed: int | None) -> int | None:
    if seed is not None and not 0 <= seed < _SEED_MAX:
        raise ConfigError("--seed must fit in an unsigned 64-bit integer")
    return seed


def cmd_er_curve(args: argparse.Namespace) -> int:
    if not 0.0 < args.r_min < args.r_max < 1.0:
        raise ConfigError("need 0 < --r-min < --r-max < 1")
    if args.steps < 2:
        raise ConfigError("--steps must be at least 2")
    rs = np.linspace(args.r_min, args.r_max, args.steps)
    er_db: list[float | None] = []
    for r in rs:
        # the curve is symmetric about r = 0.5, so fold the lower branch over
        er = max_extinction_ratio_db(CouplingRatio(max(r, 1.0 - r)))
        er_db.append(er.db)
    config = {
        "command": "er-curve",
        "r_min": float(args.r_min),
        "r_max": float(args.r_max),
        "steps": int(args.steps),
    }
    dg = digest(config)
    out: Path = args.out
    rows = [
        (_fmt(r), "inf" if v is None else _fmt(v)) for r, v in zip(rs, er_db)
    ]
    _write_csv(out, ("r", "er_db"), rows)
    outputs = [out, out.with_suffix(".json")]
    if not args.no_plot:
        from .figures import save_er_curve

        png = out.with_suffix(".png")
        save_er_curve(rs, er_db, png)
        outputs.append(png)
    _write_json(
        out.with_suffix(".json"),
        _summary("er-curve", dg, None, outputs, config, {"rows": len(rows)}),
    )
    _announce(outputs)
    return 0


def cmd_transfer_curve(args: argparse.Namespace) -> int:
    tr = parse_transfer(load_config_data(args.config))
    if args.steps is not None:
        if args.steps < 2:
            raise ConfigError("--steps must be at least 2")
        tr["steps"] = args.steps
    resolved = resolve_transfer(tr)
    dg = digest(resolved)
    volts = np.linspace(tr["v_min"], tr["v_max"], tr["steps"])
    configured = mzm_transmission(volts, tr["v_dc"], tr["coupling"], tr["v_pi"])
    balanced = mzm_transmission(volts, tr["v_dc"], CouplingRatio(0.5), tr["v_pi"])
    out: Path = args.out
    _write_csv(
        out,
        ("volts", "transmission", "balanced_transmission"),
        (
            (_fmt(v), _fmt(c), _fmt(b))
            for v, c, b in zip(volts, configured, balanced)
        ),
    )
    results = {
        "min_transmission": float(np.min(configured)),
        "max_transmission": float(np.max(configured)),
        "volts_at_min": float(volts[int(np.argmin(configured))]),
    }
    outputs = [out, out.with_suffix(".json")]
    if not args.no_plot:
        from .figures import save_transfer_curve

        png = out.with_suffix(".png")
        save_transfer_curve(volts, configured, balanced, tr["coupling"].r, png)
        outputs.append(png)
    _write_json(
        out.with_suffix(".json"),
        _summary("transfer-curve", dg, None, outputs, resolved, results),
    )
    _announce(outputs)
    return 0


def cmd_patterning(args: argparse.Namespace) -> int:
    cfg = parse_experiment(load_config_data(args.config))
    if args.seed is not None:
        cfg = with_seed(cfg, _check_seed(args.seed))
    resolved = resolve_experiment(cfg)
    dg = digest(resolved)
    records = simulate_pattern(cfg)
    stats = classify_transitions(records)
    out: Path = args.out
    _write_csv(
        out,
        ("transition", "mean", "std", "deviation_pct"),
        (
            (s.transition, _fmt(s.mean), _fmt(s.std), _fmt(s.deviation_pct))
            for s in stats
        ),
    )
    results = {
        "max_abs_deviation_pct": max(abs(s.deviation_pct) for s in stats),
        "rows": [
            {
                "transition": s.transition,
                "mean": s.mean,
                "std": s.std,
                "count": s.count,
                "deviation_pct": s.deviation_pct,
            }
            for s in stats
        ],
    }
    outputs = [out, out.with_suffix(".json")]
    if not args.no_plot:
        from .figures import save_patterning

        png = out.with_suffix(".png")
        save_patterning(stats, png)
        outputs.append(png)
    _write_json(
        out.with_suffix(".json"),
        _summary("patterning", dg, cfg.seed, outputs, resolved, results),
    )
    _announce(outputs)
    return 0


def cmd_stability(args: argparse.Namespace) -> int:
    st = parse_stability(load_config_data(args.config))
    if args.duration is not None:
        st["duration_s"] = float(args.duration)
    if args.seed is not None:
        st["drift"] = DriftSpec(
            sigma_rad_per_sqrt_s=st["drift"].sigma_rad_per_sqrt_s,
            seed=_check_seed(args.seed),
        )
    if st["duration_s"] < st["meter_window_s"]:
        raise ConfigError("duration_s must cover at least one meter window")
    resolved = resolve_stability(st)
    dg = digest(resolved)
    sagnac_series, sagnac_std = stability_experiment(
        DEVICE_SAGNAC_TWO_LEVEL,
        st["sagnac_coupling"],
        st["drift"],
        st["duration_s"],
        mixing=st["mixing"],
        path_dt_s=st["path_dt_s"],
        meter_window_s=st["meter_window_s"],
    )
    mzm_series, mzm_std = stability_experiment(
        DEVICE_MZM_TWO_LEVEL,
        st["mzm_coupling"],
        st["drift"],
        st["duration_s"],
        path_dt_s=st["path_dt_s"],
        meter_window_s=st["meter_window_s"],
        mzm_bias_rad=st["mzm_bias_rad"],
    )
    out: Path = args.out
    sagnac_csv = out.parent / f"{out.stem}_sagnac.csv"
    mzm_csv = out.parent / f"{out.stem}_mzm.csv"
    for path, series in ((sagnac_csv, sagnac_series), (mzm_csv, mzm_series)):
        times = (np.arange(len(series.values)) + 0.5) * series.sample_period_s
        _write_csv(
            path,
            ("time_s", "normalized_power"),
            ((_fmt(t), _fmt(p)) for t, p in zip(times, series.values)),
        )
    results = {
        "sagnac_normalized_std_pct": sagnac_std,
        "mzm_normalized_std_pct": mzm_std,
    }
    outputs = [sagnac_csv, mzm_csv, out.with_suffix(".json")]
    if not args.no_plot:
        from .figures import save_stability

        png = out.with_suffix(".png")
        times = (
            np.arange(len(sagnac_series.values)) + 0.5
        ) * sagnac_series.sample_period_s
        save_stability(times, sagnac_series.values, mzm_series.values, png)
        outputs.append(png)
    _write_json(
        out.with_suffix(".json"),
        _summary(
            "stability", dg, st["drift"].seed, outputs, resolved, results
        ),
    )
    _announce(outputs)
    return 0


def cmd_max_clock(args: argparse.Namespace) -> int:
    mc = parse_maxclock(load_config_data(args.config))
    geom = mc["geometry"]
    resolved = resolve_maxclock(mc)
    dg = digest(resolved)
    f_max = max_clock_rate(geom)
    n_align = mc["n_alignments"]
    results = {
        "f_max_hz": f_max,
        "walk_through_s": walk_through_s(geom),
        "overlap_count_at_f_max": anti_parallel_overlap_count(
            geom, f_max, n_alignments=n_align
        ),
        "overlap_count_at_1p5_f_max": anti_parallel_overlap_count(
            geom, 1.5 * f_max, n_alignments=n_align
        ),
    }
    if mc["reference_clock_hz"] is not None:
        results["reference_clock_hz"] = mc["reference_clock_hz"]
    outputs: list[Path] = []
    if args.out is not None:
        out: Path = args.out
        scan_csv = out.parent / f"{out.stem}_scan.csv"
        clocks = np.linspace(0.25 * f_max, 2.0 * f_max, 64)
        counts = np.array(
            [
                anti_parallel_overlap_count(geom, c, n_alignments=n_align)
                for c in clocks
            ]
        )
        _write_csv(
            scan_csv,
            ("clock_hz", "overlap_count"),
            ((_fmt(c), str(int(k))) for c, k in zip(clocks, counts)),
        )
        outputs = [scan_csv, out]
        if not args.no_plot:
            from .figures import save_overlap_scan

            png = out.with_suffix(".png")
            save_overlap_scan(clocks, counts, f_max, png)
            outputs.append(png)
        _write_json(
            out, _summary("max-clock", dg, None, outputs, resolved, results)
        )
    print(
        json.dumps(
            _summary("max-clock", dg, None, outputs, resolved, results),
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def cmd_configs(args: argparse.Namespace) -> int:
    for name in shipped_config_names():
        print(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sagnac-im",
        description="Time-domain simulator for Sagnac-loop intensity modulators.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    er = sub.add_parser(
        "er-curve", help="extinction ratio achievable per coupling ratio"
    )
    er.add_argument("--r-min", type=float, default=0.5)
    er.add_argument("--r-max", type=float, default=0.995)
    er.add_argument("--steps", type=int, default=100)
    er.add_argument("--out", type=Path, required=True, help="CSV output path")
    er.add_argument("--no-plot", action="store_true")
    er.set_defaults(func=cmd_er_curve)

    tc = sub.add_parser("transfer-curve", help="static transmission sweep")
    tc.add_argument("--config", required=True, help="config path or shipped name")
    tc.add_argument("--steps", type=int, default=None, help="override sweep points")
    tc.add_argument("--out", type=Path, required=True, help="CSV output path")
    tc.add_argument("--no-plot", action="store_true")
    tc.set_defaults(func=cmd_transfer_curve)

    pt = sub.add_parser(
        "patterning", help="transition statistics for a PRBS-driven run"
    )
    pt.add_argument("--config", required=True, help="config path or shipped name")
    pt.add_argument("--seed", type=int, default=None, help="override detector seed")
    pt.add_argument("--out", type=Path, required=True, help="CSV output path")
    pt.add_argument("--no-plot", action="store_true")
    pt.set_defaults(func=cmd_patterning)

    stb = sub.add_parser("stability", help="long-horizon power stability")
    stb.add_argument("--config", required=True, help="config path or shipped name")
    stb.add_argument(
        "--duration", type=float, default=None, help="override run length, seconds"
    )
    stb.add_argument("--seed", type=int, default=None, help="override drift seed")
    stb.add_argument("--out", type=Path, required=True, help="output base path")
    stb.add_argument("--no-plot", action="store_true")
    stb.set_defaults(func=cmd_stability)

    mx = sub.add_parser(
        "max-clock", help="counter-propagating pulse clock-rate limit"
    )
    mx.add_argument("--config", required=True, help="config path or shipped name")
    mx.add_argument(
        "--out", type=Path, default=None, help="optional JSON output path"
    )
    mx.add_argument("--no-plot", action="store_true")
    mx.set_defaults(func=cmd_max_clock)

    ls = sub.add_parser("configs", help="list shipped config names")
    ls.set_defaults(func=cmd_configs)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001  CLI surface, no tracebacks on bad input
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
