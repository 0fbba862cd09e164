"""Command-line entry points: `run`, `validate`, and `sweep`.

`run` executes one scenario and writes per-cycle aggregates (cycles.csv),
an optional per-agent trace (agents.csv), and a run summary (summary.json).
`validate` scores a run's series against an observed series file.
`sweep` executes a one-at-a-time sensitivity axis and writes sweep.csv.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 metric
undefined. All numeric CSV output carries exactly six decimals so repeated
runs are byte-comparable.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, replace
from typing import Optional, Sequence

from . import __version__
from .climate import ClimateRegime, load_wgc_sequence
from .config import (
    PRESET_NAMES,
    ScenarioConfig,
    parse_climate_spec,
    parse_config,
    preset,
    resolve_tables,
)
from .engine import RunResult, run_simulation
from .errors import ConfigurationError, MetricUndefinedError
from .landscape import CycleRecord
from .metrics import distribution_summary, fit_report
from .sweep import SweepAxis, SweepParameter, run_sweep, write_sweep_csv
from .tables import LandUse, TechLevel, Wgc

__all__ = ["main", "entry", "write_cycles_csv", "write_agents_csv", "read_series_csv"]

SERIES_NAMES = ("cover_m", "cover_s", "cover_ws", "mean_p", "mean_rl")

# Accepted spellings for observed-series columns.
_COLUMN_ALIASES = {
    "cover_maize": "cover_m",
    "cover_soy": "cover_s",
    "cover_soybean": "cover_s",
    "cover_wheatsoy": "cover_ws",
}


def write_cycles_csv(records: Sequence[CycleRecord], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            [
                "cycle",
                "wgc",
                "cover_m",
                "cover_s",
                "cover_ws",
                "mean_p",
                "mean_rl",
                "pct_econ_ok",
                "pct_env_ok",
                "tl_l",
                "tl_a",
                "tl_h",
            ]
        )
        for r in records:
            writer.writerow(
                [
                    r.cycle,
                    r.wgc.code,
                    f"{r.cover_pct[LandUse.MAIZE]:.6f}",
                    f"{r.cover_pct[LandUse.SOYBEAN]:.6f}",
                    f"{r.cover_pct[LandUse.WHEAT_SOY]:.6f}",
                    f"{r.mean_profit_usd_per_ha:.6f}",
                    f"{r.mean_rl_pct:.6f}",
                    f"{r.pct_econ_ok:.6f}",
                    f"{r.pct_env_ok:.6f}",
                    r.tl_counts[TechLevel.LOW],
                    r.tl_counts[TechLevel.AVERAGE],
                    r.tl_counts[TechLevel.HIGH],
                ]
            )


def write_agents_csv(agent_rows: Sequence[tuple], path: str) -> None:
    """Per-agent trace; booleans are written as 0/1."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            [
                "cycle",
                "row",
                "col",
                "tenure",
                "alloc_m",
                "alloc_s",
                "alloc_ws",
                "tl",
                "al",
                "cal",
                "profit",
                "rl",
                "econ_ok",
                "env_ok",
            ]
        )
        for (
            cycle,
            row,
            col,
            tenure,
            alloc,
            tl,
            al,
            cal,
            profit,
            rl,
            econ_ok,
            env_ok,
        ) in agent_rows:
            writer.writerow(
                [
                    cycle,
                    row,
                    col,
                    tenure.code,
                    f"{alloc[0]:.6f}",
                    f"{alloc[1]:.6f}",
                    f"{alloc[2]:.6f}",
                    tl.code,
                    f"{al:.6f}",
                    f"{cal:.6f}",
                    f"{profit:.6f}",
                    f"{rl:.6f}",
                    int(econ_ok),
                    int(env_ok),
                ]
            )


def _summary_dict(result: RunResult) -> dict:
    def dist(values):
        try:
            return asdict(distribution_summary(values))
        except MetricUndefinedError:
            # cv is undefined at zero mean; quartiles are shift-equivariant,
            # so recover them from a shifted copy and null out cv.
            shift = 1.0 - sum(values) / len(values)
            shifted = asdict(distribution_summary([v + shift for v in values]))
            return {
                k: (None if k == "cv" else v - shift) for k, v in shifted.items()
            }

    records = result.records
    final = records[-1]
    return {
        "agents": result.landscape.n_agents,
        "cycles": len(records),
        "seed": result.config.seed,
        "climate": result.config.climate.describe(),
        "mean_profit_usd_per_ha": sum(r.mean_profit_usd_per_ha for r in records)
        / len(records),
        "mean_rl_pct": sum(r.mean_rl_pct for r in records) / len(records),
        "per_agent_mean_profit": dist(result.mean_profit_per_agent),
        "per_agent_mean_rl": dist(result.mean_rl_per_agent),
        "econ_goal_agreement_pct": dist(result.econ_agreement_pct),
        "env_goal_agreement_pct": dist(result.env_agreement_pct),
        "final_cover_pct": {
            lu.code: final.cover_pct[lu] for lu in LandUse
        },
        "final_tl_counts": {
            tl.code: final.tl_counts[tl] for tl in TechLevel
        },
    }


def read_series_csv(path: str) -> dict[str, list[str]]:
    """Read a CSV into columns keyed by normalized header names."""
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from exc
    with handle:
        reader = csv.DictReader(handle)
        if not reader.fieldnames:
            raise ConfigurationError(f"{path}: empty file")
        columns: dict[str, list[str]] = {}
        names = [
            _COLUMN_ALIASES.get(h.strip().lower(), h.strip().lower())
            for h in reader.fieldnames
        ]
        for name in names:
            columns[name] = []
        for row in reader:
            for raw_name, name in zip(reader.fieldnames, names):
                columns[name].append(row[raw_name])
    return columns


def _numeric_series(columns: dict, name: str, path: str) -> list[float]:
    if name not in columns:
        raise ConfigurationError(
            f"{path}: no column {name!r} (have {', '.join(sorted(columns))})"
        )
    try:
        return [float(v) for v in columns[name]]
    except (TypeError, ValueError):
        raise ConfigurationError(f"{path}: column {name!r} is not numeric") from None


def _build_config(args: argparse.Namespace) -> ScenarioConfig:
    if args.config and args.preset:
        raise ConfigurationError("give either --config or --preset, not both")
    if args.config:
        config = parse_config(args.config)
    elif args.preset:
        config = preset(args.preset)
    else:
        raise ConfigurationError("one of --config or --preset is required")

    updates: dict = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.cycles is not None:
        updates["cycles"] = args.cycles
    if getattr(args, "owner_share", None) is not None:
        updates["owner_share_pct"] = args.owner_share
    if getattr(args, "climate", None):
        updates["climate"] = parse_climate_spec(args.climate)
    if getattr(args, "wgc_file", None):
        updates["climate"] = ClimateRegime.explicit(
            load_wgc_sequence(args.wgc_file)
        )
    if updates:
        config = replace(config, **updates)
    return config


def _cmd_run(args: argparse.Namespace) -> int:
    config = _build_config(args)
    config.validate()
    tables = resolve_tables(config)
    result = run_simulation(
        config, tables, workers=args.workers, collect_agents=args.emit_agents
    )
    out = args.out_dir.rstrip("/")
    write_cycles_csv(result.records, f"{out}/cycles.csv")
    print(f"wrote {out}/cycles.csv ({len(result.records)} cycles)")
    if args.emit_agents:
        write_agents_csv(result.agent_rows, f"{out}/agents.csv")
        print(f"wrote {out}/agents.csv ({len(result.agent_rows)} rows)")
    with open(f"{out}/summary.json", "w", encoding="utf-8") as handle:
        json.dump(_summary_dict(result), handle, indent=2, sort_keys=True)
        handle.write("\n")
    print(f"wrote {out}/summary.json")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    simulated = read_series_csv(args.run_csv)
    observed = read_series_csv(args.observed_csv)
    series = [s.strip() for s in args.series.split(",") if s.strip()]
    if not series:
        raise ConfigurationError("--series must name at least one series")
    for name in series:
        if name not in SERIES_NAMES:
            raise ConfigurationError(
                f"unknown series {name!r} (expected one of {', '.join(SERIES_NAMES)})"
            )
    reports = {}
    for name in series:
        sim = _numeric_series(simulated, name, args.run_csv)
        obs = _numeric_series(observed, name, args.observed_csv)
        if len(sim) != len(obs):
            raise ConfigurationError(
                f"series {name!r}: {len(obs)} observed vs {len(sim)} simulated rows"
            )
        report = fit_report(obs, sim)
        reports[name] = asdict(report)
        print(
            f"{name}: rmse={report.rmse:.6f} v={report.v:.6f} "
            f"pm={report.pm:.6f} iof={report.iof:.6f}"
        )
    out = args.out_dir.rstrip("/")
    with open(f"{out}/fit.json", "w", encoding="utf-8") as handle:
        json.dump(reports, handle, indent=2, sort_keys=True)
        handle.write("\n")
    print(f"wrote {out}/fit.json")
    return 0


_AXES = {p.value: p for p in SweepParameter}


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _build_config(args)
    if config.climate is None:
        # No historical series available: fall back for the sweep base.
        config = replace(config, climate=ClimateRegime.constant_average())
        print("note: no weather sequence given; sweep base uses constant-average")
    config.validate()
    tables = resolve_tables(config)
    if args.axis not in _AXES:
        raise ConfigurationError(
            f"unknown axis {args.axis!r} (expected one of {', '.join(_AXES)})"
        )
    parameter = _AXES[args.axis]
    raw_values = [v.strip() for v in args.values.split(",") if v.strip()]
    if not raw_values:
        raise ConfigurationError("--values must list at least one value")
    if parameter is SweepParameter.WGC_MIX_LEVEL:
        values: tuple = tuple(Wgc.from_code(v) for v in raw_values)
    else:
        try:
            values = tuple(float(v) for v in raw_values)
        except ValueError:
            raise ConfigurationError(
                f"--values for {args.axis} must be numeric"
            ) from None
    axis = SweepAxis(
        parameter, values, allow_outside_range=args.allow_outside_range
    )
    result = run_sweep(config, axis, tables, workers=args.workers)
    print(result.climate_note)
    out = args.out_dir.rstrip("/")
    write_sweep_csv(result, f"{out}/sweep.csv")
    print(f"wrote {out}/sweep.csv ({len(result.rows)} rows)")
    return 0


def _add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="scenario JSON file")
    parser.add_argument(
        "--preset", choices=PRESET_NAMES, help="named scenario preset"
    )
    parser.add_argument("--seed", type=int, help="override the scenario seed")
    parser.add_argument("--cycles", type=int, help="override the cycle count")
    parser.add_argument(
        "--owner-share", type=float, dest="owner_share",
        help="override the owner share (percent)",
    )
    parser.add_argument(
        "--climate",
        help="override the weather regime (constant-unfavorable, "
        "constant-average, constant-favorable, seesaw, random)",
    )
    parser.add_argument(
        "--wgc-file",
        dest="wgc_file",
        help="explicit weather sequence file (one VU/U/A/F/VF code per line)",
    )
    parser.add_argument(
        "--workers", type=int, default=1,
        help="intra-stage parallelism width (output is identical at any width)",
    )
    parser.add_argument("--out-dir", default=".", help="output directory")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="luccsim",
        description="Agent-based land-use change simulator",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario")
    _add_scenario_arguments(p_run)
    p_run.add_argument(
        "--emit-agents",
        action="store_true",
        help="also write the per-agent trace (agents.csv)",
    )
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser(
        "validate", help="score simulated series against observations"
    )
    p_val.add_argument("run_csv", help="cycles.csv from a run")
    p_val.add_argument(
        "observed_csv", help="observed series (year,cover_m,cover_s,cover_ws)"
    )
    p_val.add_argument(
        "--series",
        required=True,
        help=f"comma list from: {', '.join(SERIES_NAMES)}",
    )
    p_val.add_argument("--out-dir", default=".", help="output directory")
    p_val.set_defaults(func=_cmd_validate)

    p_sweep = sub.add_parser("sweep", help="one-at-a-time sensitivity axis")
    _add_scenario_arguments(p_sweep)
    p_sweep.add_argument(
        "--axis", required=True, help=f"one of: {', '.join(_AXES)}"
    )
    p_sweep.add_argument(
        "--values", required=True, help="comma list of axis values"
    )
    p_sweep.add_argument(
        "--allow-outside-range",
        action="store_true",
        help="permit values outside the default sensitivity ranges",
    )
    p_sweep.set_defaults(func=_cmd_sweep)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except MetricUndefinedError as exc:
        print(f"metric undefined: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
