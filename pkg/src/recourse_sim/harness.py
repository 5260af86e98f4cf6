"""Experimental grid execution: planning, seeding, aggregation, persistence.

A sweep is the cross product behaviors x g x n_new x seeds. Every run gets
a master seed derived by hashing its grid indices, so adding or reordering
cells never shifts another cell's draws, and any single run can be
reproduced from the manifest alone.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .domain import SimulationConfig, config_to_dict, validate_config
from .engine import format_trace, run

# the three reported regimes; binary adaptation with flexible effort is
# supported by the behavior module but not swept
BEHAVIOR_REGIMES = (
    ("binary", "constant"),
    ("continuous", "constant"),
    ("continuous", "flexible"),
)
G_GRID_DEFAULT = (0.1, 0.3, 0.5, 0.7, 0.9)
N_NEW_GRID_DEFAULT = (8, 9, 10, 11, 12)

AGGREGATE_HEADER = (
    "behavior,g,n_new,t,threshold_mean,threshold_std,rr_mean,rr_std,"
    "rr_null_count,stationarity_mean"
)


def behavior_name(adaptation_mode: str, effort_mode: str) -> str:
    return f"{adaptation_mode}_{effort_mode}"


def derive_run_seed(
    base_seed: int, behavior_idx: int, g_idx: int, n_idx: int, seed_idx: int
) -> int:
    """Stable 64-bit master seed for one cell: the first 8 bytes of a
    SHA-256 over the grid indices, big-endian."""
    key = f"{base_seed}:{behavior_idx}:{g_idx}:{n_idx}:{seed_idx}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


@dataclass(frozen=True)
class SweepPlan:
    base_config: SimulationConfig = SimulationConfig()
    behaviors: tuple = BEHAVIOR_REGIMES
    g_grid: tuple = G_GRID_DEFAULT
    n_new_grid: tuple = N_NEW_GRID_DEFAULT
    base_seed: int = 0
    n_seeds: int = 20


@dataclass(frozen=True)
class RunSpec:
    run_id: str
    behavior: str
    g: float
    n_new: int
    seed_index: int
    master_seed: int
    config: SimulationConfig


@dataclass(frozen=True)
class AggregateRow:
    behavior: str
    g: float
    n_new: int
    t: int
    threshold_mean: Optional[float]
    threshold_std: Optional[float]
    rr_mean: Optional[float]
    rr_std: Optional[float]
    rr_null_count: int
    stationarity_mean: Optional[float]


@dataclass(frozen=True)
class AggregateSeries:
    rows: tuple  # AggregateRow, sorted by (behavior, g, n_new, t)


@dataclass
class SweepResult:
    plan: SweepPlan
    specs: List[RunSpec]
    statuses: Dict[str, str]  # run_id -> "ok" | "failed: <reason>"
    traces: Dict[str, str]  # run_id -> trace CSV, successful runs only
    aggregate: AggregateSeries

    @property
    def failed(self) -> List[str]:
        return [rid for rid, status in self.statuses.items() if status != "ok"]


def validate_plan(plan: SweepPlan) -> SweepPlan:
    if not plan.behaviors:
        raise ValueError("sweep plan has no behaviors")
    if not plan.g_grid:
        raise ValueError("sweep plan has an empty g grid")
    if not plan.n_new_grid:
        raise ValueError("sweep plan has an empty n_new grid")
    if plan.n_seeds < 1:
        raise ValueError("sweep plan needs at least one seed")
    return plan


def expand_plan(plan: SweepPlan) -> List[RunSpec]:
    """Enumerate every run, behaviors outermost and seeds innermost, with
    each cell's config validated up front."""
    validate_plan(plan)
    specs: List[RunSpec] = []
    for bi, (adaptation, effort) in enumerate(plan.behaviors):
        name = behavior_name(adaptation, effort)
        for gi, g in enumerate(plan.g_grid):
            for ni, n_new in enumerate(plan.n_new_grid):
                for si in range(plan.n_seeds):
                    master = derive_run_seed(plan.base_seed, bi, gi, ni, si)
                    config = validate_config(
                        replace(
                            plan.base_config,
                            adaptation_mode=adaptation,
                            effort_mode=effort,
                            g=g,
                            n_new=n_new,
                            master_seed=master,
                        )
                    )
                    specs.append(
                        RunSpec(
                            run_id=f"{name}_g{g:g}_n{n_new}_s{si:02d}",
                            behavior=name,
                            g=g,
                            n_new=n_new,
                            seed_index=si,
                            master_seed=master,
                            config=config,
                        )
                    )
    return specs


def _execute_spec(spec: RunSpec) -> tuple:
    """Run one cell; return its trace and per-step series, or the failure."""
    try:
        result = run(spec.config)
        return (
            spec.run_id,
            "ok",
            format_trace(result.records),
            [r.threshold for r in result.records],
            [r.rr for r in result.records],
            [r.stationarity_ratio for r in result.records],
        )
    except Exception as exc:
        return (spec.run_id, f"failed: {exc}", None, None, None, None)


def cell_stats(values) -> Tuple[Optional[float], Optional[float]]:
    """Mean and population std over the non-null entries; (None, None) when
    everything is null."""
    kept = [v for v in values if v is not None]
    if not kept:
        return None, None
    arr = np.array(kept, dtype=float)
    return float(arr.mean()), float(arr.std())


def _aggregate(specs: List[RunSpec], outcomes: Dict[str, tuple]) -> AggregateSeries:
    cells: Dict[Tuple[str, float, int], List[tuple]] = {}
    for spec in specs:
        _, status, _, thresholds, rrs, ratios = outcomes[spec.run_id]
        if status != "ok":
            continue
        key = (spec.behavior, spec.g, spec.n_new)
        cells.setdefault(key, []).append((thresholds, rrs, ratios))
    rows: List[AggregateRow] = []
    for (behavior, g, n_new), series in sorted(cells.items()):
        for t in range(len(series[0][0])):
            thr_mean, thr_std = cell_stats([s[0][t] for s in series])
            rr_mean, rr_std = cell_stats([s[1][t] for s in series])
            ratio_mean, _ = cell_stats([s[2][t] for s in series])
            rows.append(
                AggregateRow(
                    behavior=behavior,
                    g=g,
                    n_new=n_new,
                    t=t,
                    threshold_mean=thr_mean,
                    threshold_std=thr_std,
                    rr_mean=rr_mean,
                    rr_std=rr_std,
                    rr_null_count=sum(1 for s in series if s[1][t] is None),
                    stationarity_mean=ratio_mean,
                )
            )
    return AggregateSeries(rows=tuple(rows))


def run_sweep(plan: SweepPlan, workers: int = 1) -> SweepResult:
    """Execute every cell of the plan. Results are gathered in plan order,
    so any worker count yields identical aggregates and traces."""
    specs = expand_plan(plan)
    if workers > 1:
        chunk = max(1, len(specs) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_execute_spec, specs, chunksize=chunk))
    else:
        raw = [_execute_spec(spec) for spec in specs]
    outcomes = {item[0]: item for item in raw}
    statuses = {spec.run_id: outcomes[spec.run_id][1] for spec in specs}
    traces = {
        spec.run_id: outcomes[spec.run_id][2]
        for spec in specs
        if outcomes[spec.run_id][1] == "ok"
    }
    return SweepResult(
        plan=plan,
        specs=specs,
        statuses=statuses,
        traces=traces,
        aggregate=_aggregate(specs, outcomes),
    )


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return f"{float(value):.9g}"


def format_aggregate(series: AggregateSeries) -> str:
    lines = [AGGREGATE_HEADER]
    for r in series.rows:
        lines.append(
            ",".join(
                [
                    r.behavior,
                    _fmt(r.g),
                    str(r.n_new),
                    str(r.t),
                    _fmt(r.threshold_mean),
                    _fmt(r.threshold_std),
                    _fmt(r.rr_mean),
                    _fmt(r.rr_std),
                    str(r.rr_null_count),
                    _fmt(r.stationarity_mean),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _write_text(path: Path, text: str, written: List[Path]) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    written.append(path)


def write_outputs(result: SweepResult, out_dir) -> List[Path]:
    """Write aggregate.csv, runs/<run_id>.csv for each successful run, and
    manifest.json (plan, derived seeds, per-run status) under out_dir."""
    out = Path(out_dir)
    runs_dir = out / "runs"
    try:
        runs_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {runs_dir}: {exc}") from exc
    written: List[Path] = []
    _write_text(out / "aggregate.csv", format_aggregate(result.aggregate), written)
    for spec in result.specs:
        trace = result.traces.get(spec.run_id)
        if trace is not None:
            _write_text(runs_dir / f"{spec.run_id}.csv", trace, written)
    manifest = {
        "plan": {
            "base_config": config_to_dict(result.plan.base_config),
            "behaviors": [list(pair) for pair in result.plan.behaviors],
            "g_grid": list(result.plan.g_grid),
            "n_new_grid": list(result.plan.n_new_grid),
            "base_seed": result.plan.base_seed,
            "n_seeds": result.plan.n_seeds,
        },
        "runs": [
            {
                "run_id": spec.run_id,
                "behavior": spec.behavior,
                "g": spec.g,
                "n_new": spec.n_new,
                "seed_index": spec.seed_index,
                "master_seed": spec.master_seed,
                "status": result.statuses[spec.run_id],
            }
            for spec in result.specs
        ],
    }
    _write_text(
        out / "manifest.json",
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
        written,
    )
    return written
