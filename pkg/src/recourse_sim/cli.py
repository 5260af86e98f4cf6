"""Command-line front end: run one simulation, sweep the behavior grid,
or validate a config file.

Exit codes: 0 on success, 1 when a config value (from the file or a flag
override) is rejected, 2 on runtime failure such as an unreadable config,
an unwritable output directory, or sweep runs that crash. Usage errors
(unknown flags, missing subcommand) exit 2 via argparse.
"""

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from .domain import (
    ADAPTATION_MODES,
    EFFORT_MODES,
    ConfigError,
    SimulationConfig,
    load_config,
    validate_config,
)
from .engine import format_trace, run
from .harness import (
    BEHAVIOR_REGIMES,
    G_GRID_DEFAULT,
    N_NEW_GRID_DEFAULT,
    SweepPlan,
    run_sweep,
    write_outputs,
)
from .metrics import group_outcome_rates, score_distribution_snapshot

# maps each override flag to the config field it replaces
_OVERRIDES = (
    ("seed", "master_seed"),
    ("g", "g"),
    ("n_new", "n_new"),
    ("adaptation", "adaptation_mode"),
    ("effort", "effort_mode"),
    ("steps", "steps"),
)


def _read_config(path: Optional[str]) -> SimulationConfig:
    return load_config(path) if path else SimulationConfig()


def _apply_overrides(config: SimulationConfig, args) -> SimulationConfig:
    changes = {
        field: getattr(args, flag)
        for flag, field in _OVERRIDES
        if getattr(args, flag, None) is not None
    }
    if changes:
        config = dataclasses.replace(config, **changes)
    return validate_config(config)


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _snapshot_steps(steps: int) -> List[int]:
    return sorted({0, steps // 4, steps // 2, (3 * steps) // 4, steps - 1})


def cmd_run(args) -> int:
    config = _apply_overrides(_read_config(args.config), args)
    result = run(config, collect_scores=True)

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc

    _write_text(out / "trace.csv", format_trace(result.records))
    _write_text(
        out / "manifest.json",
        json.dumps(result.manifest, indent=2, sort_keys=True) + "\n",
    )

    lines = ["t,agent_id,score"]
    for t, pairs in enumerate(result.agent_scores):
        for agent_id, score in pairs:
            lines.append(f"{t},{agent_id},{score:.9g}")
    _write_text(out / "agents.csv", "\n".join(lines) + "\n")

    try:
        series = group_outcome_rates(list(result.agents.values()), config.steps)
    except ValueError as exc:
        print(f"skipping groups.csv: {exc}", file=sys.stderr)
    else:
        glines = ["group,t,rate"]
        for gi, label in enumerate(series.labels):
            for ti, t in enumerate(series.steps):
                glines.append(f"{label},{t},{series.rates[gi, ti]:.9g}")
        _write_text(out / "groups.csv", "\n".join(glines) + "\n")

    for t in _snapshot_steps(config.steps):
        hist = score_distribution_snapshot(
            [score for _, score in result.agent_scores[t]], t
        )
        hlines = ["bin_lo,bin_hi,count"]
        for i, count in enumerate(hist.counts):
            hlines.append(
                f"{hist.edges[i]:.9g},{hist.edges[i + 1]:.9g},{int(count)}"
            )
        _write_text(out / f"hist_t{t}.csv", "\n".join(hlines) + "\n")

    print(f"wrote {out / 'trace.csv'} ({len(result.records)} steps)")
    return 0


def cmd_sweep(args) -> int:
    config = _read_config(args.config)
    if args.steps is not None:
        config = validate_config(dataclasses.replace(config, steps=args.steps))
    behaviors = tuple(
        pair
        for pair in BEHAVIOR_REGIMES
        if (args.adaptation is None or pair[0] == args.adaptation)
        and (args.effort is None or pair[1] == args.effort)
    )
    if not behaviors:
        raise ConfigError(
            ["no sweep behavior matches the requested adaptation/effort filter"]
        )
    plan = SweepPlan(
        base_config=config,
        behaviors=behaviors,
        g_grid=(args.g,) if args.g is not None else G_GRID_DEFAULT,
        n_new_grid=(args.n_new,) if args.n_new is not None else N_NEW_GRID_DEFAULT,
        base_seed=args.seed if args.seed is not None else 0,
    )
    workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
    result = run_sweep(plan, workers=workers)
    write_outputs(result, args.out)
    print(
        f"wrote {len(result.specs)} runs, {len(result.aggregate.rows)} "
        f"aggregate rows to {args.out}"
    )
    failed = sorted(
        rid for rid, status in result.statuses.items() if status != "ok"
    )
    if failed:
        print(f"{len(failed)} run(s) failed:", file=sys.stderr)
        for rid in failed:
            print(f"  {rid}: {result.statuses[rid]}", file=sys.stderr)
        return 2
    return 0


def cmd_validate(args) -> int:
    validate_config(load_config(args.config))
    print("ok")
    return 0


def _config_reference() -> str:
    lines = ["config fields (JSON object keys) and their defaults:"]
    for field in dataclasses.fields(SimulationConfig):
        lines.append(f"  {field.name} (default {field.default!r})")
    return "\n".join(lines)


def _add_override_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="override master_seed")
    parser.add_argument("--g", type=float, help="override g (ease of acting)")
    parser.add_argument(
        "--n-new", dest="n_new", type=int, help="override n_new (entrants per step)"
    )
    parser.add_argument(
        "--adaptation",
        help=f"override adaptation_mode, one of {'/'.join(ADAPTATION_MODES)}",
    )
    parser.add_argument(
        "--effort",
        help=f"override effort_mode, one of {'/'.join(EFFORT_MODES)}",
    )
    parser.add_argument("--steps", type=int, help="override the step count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recourse-sim",
        description="Simulate recourse-following agents competing for a "
        "fixed number of favorable outcomes per step.",
        epilog=_config_reference(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser(
        "run",
        help="run one simulation and write trace/metric CSVs",
        epilog=_config_reference(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_run.add_argument("--config", help="JSON config file (defaults fill missing keys)")
    p_run.add_argument("--out", required=True, help="output directory")
    _add_override_flags(p_run)
    p_run.set_defaults(handler=cmd_run)

    p_sweep = sub.add_parser(
        "sweep",
        help="run the behavior/g/n_new grid over 20 seeds and aggregate",
        epilog=_config_reference(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_sweep.add_argument(
        "--config", help="JSON base config; the grid overrides g and n_new"
    )
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument(
        "--workers", type=int, help="worker processes (default: CPU count)"
    )
    p_sweep.add_argument("--seed", type=int, help="base seed for run-seed derivation")
    p_sweep.add_argument("--g", type=float, help="restrict the g grid to one value")
    p_sweep.add_argument(
        "--n-new", dest="n_new", type=int, help="restrict the n_new grid to one value"
    )
    p_sweep.add_argument(
        "--adaptation", help="keep only behaviors with this adaptation mode"
    )
    p_sweep.add_argument("--effort", help="keep only behaviors with this effort mode")
    p_sweep.add_argument("--steps", type=int, help="override the step count")
    p_sweep.set_defaults(handler=cmd_sweep)

    p_validate = sub.add_parser(
        "validate",
        help="check a config file and list every violation",
        epilog=_config_reference(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_validate.add_argument("--config", required=True, help="JSON config file")
    p_validate.set_defaults(handler=cmd_validate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        for violation in exc.violations:
            print(violation, file=sys.stderr)
        return 1
    except OSError as exc:
        print(exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
