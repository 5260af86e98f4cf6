"""Sweep planning, seed derivation, aggregation, and output layout."""

import json
from pathlib import Path

import numpy as np
import pytest

from recourse_sim.domain import SimulationConfig
from recourse_sim.harness import (
    BEHAVIOR_REGIMES,
    AggregateSeries,
    SweepPlan,
    behavior_name,
    cell_stats,
    derive_run_seed,
    expand_plan,
    format_aggregate,
    run_sweep,
    write_outputs,
)

SMALL_CONFIG = SimulationConfig(p=30, k=5, n_new=5, steps=8)


def _small_plan(**kwargs):
    defaults = dict(
        base_config=SMALL_CONFIG,
        behaviors=(("binary", "constant"), ("continuous", "constant")),
        g_grid=(0.3, 0.7),
        n_new_grid=(5,),
        base_seed=11,
        n_seeds=3,
    )
    defaults.update(kwargs)
    return SweepPlan(**defaults)


class TestSeedDerivation:
    def test_frozen_values(self):
        assert derive_run_seed(0, 0, 0, 0, 0) == 15524268451679213868
        assert derive_run_seed(0, 1, 2, 3, 4) == 17458330211674709435
        assert derive_run_seed(7, 2, 4, 4, 19) == 13865059139361530308

    def test_uint64_range_and_uniqueness(self):
        seeds = {
            derive_run_seed(0, b, g, n, s)
            for b in range(3)
            for g in range(5)
            for n in range(5)
            for s in range(20)
        }
        assert len(seeds) == 1500
        assert all(0 <= v < 2**64 for v in seeds)

    def test_base_seed_changes_everything(self):
        a = derive_run_seed(0, 1, 1, 1, 1)
        b = derive_run_seed(1, 1, 1, 1, 1)
        assert a != b


class TestPlanExpansion:
    def test_default_plan_covers_full_grid(self):
        specs = expand_plan(SweepPlan())
        assert len(specs) == 3 * 5 * 5 * 20
        assert len({s.run_id for s in specs}) == len(specs)
        assert all(s.config.steps == 50 and s.config.p == 100 for s in specs)
        names = {s.behavior for s in specs}
        assert names == {"binary_constant", "continuous_constant", "continuous_flexible"}

    def test_spec_seeds_match_derivation(self):
        plan = _small_plan()
        specs = expand_plan(plan)
        assert specs[0].master_seed == derive_run_seed(11, 0, 0, 0, 0)
        # behaviors outermost, seeds innermost
        per_behavior = len(plan.g_grid) * len(plan.n_new_grid) * plan.n_seeds
        assert specs[per_behavior].behavior == "continuous_constant"
        assert specs[per_behavior].master_seed == derive_run_seed(11, 1, 0, 0, 0)

    def test_cell_settings_applied(self):
        for spec in expand_plan(_small_plan()):
            adaptation, effort = spec.behavior.split("_")
            assert spec.config.adaptation_mode == adaptation
            assert spec.config.effort_mode == effort
            assert spec.config.g == spec.g
            assert spec.config.n_new == spec.n_new
            assert spec.config.master_seed == spec.master_seed

    @pytest.mark.parametrize(
        "kwargs",
        [dict(g_grid=()), dict(n_new_grid=()), dict(behaviors=()), dict(n_seeds=0)],
    )
    def test_empty_plan_rejected(self, kwargs):
        with pytest.raises(ValueError):
            expand_plan(_small_plan(**kwargs))


class TestAggregation:
    def test_two_seed_arithmetic(self):
        mean, std = cell_stats([0.4, 0.6])
        assert abs(mean - 0.5) < 1e-15
        assert abs(std - 0.1) < 1e-15  # population std

    def test_nulls_are_excluded(self):
        mean, std = cell_stats([None, 0.4, 0.6, None])
        assert abs(mean - 0.5) < 1e-15
        assert cell_stats([None, None]) == (None, None)

    def test_sweep_aggregate_shape_and_bounds(self):
        result = run_sweep(_small_plan())
        rows = result.aggregate.rows
        assert len(rows) == 2 * 2 * 1 * SMALL_CONFIG.steps
        keys = [(r.behavior, r.g, r.n_new, r.t) for r in rows]
        assert keys == sorted(keys)
        for r in rows:
            assert r.threshold_std is None or r.threshold_std >= 0.0
            if r.rr_mean is not None:
                assert 0.0 <= r.rr_mean <= 1.0
            assert 0 <= r.rr_null_count <= 3
        # t=0 has no previous bar anywhere, so rr is null for every seed
        t0 = [r for r in rows if r.t == 0]
        assert all(r.rr_mean is None and r.rr_null_count == 3 for r in t0)

    def test_failed_runs_recorded_and_excluded(self):
        # p=3 makes single-class training labels likely; seed index 2 under
        # base_seed 7 hits one deterministically
        plan = SweepPlan(
            base_config=SimulationConfig(p=3, k=1, n_new=1, steps=3),
            behaviors=(("binary", "constant"),),
            g_grid=(0.5,),
            n_new_grid=(1,),
            base_seed=7,
            n_seeds=8,
        )
        result = run_sweep(plan)
        failed = result.failed
        assert "binary_constant_g0.5_n1_s02" in failed
        assert all(result.statuses[rid].startswith("failed: ") for rid in failed)
        assert len(result.traces) == 8 - len(failed)
        # excluded runs leave the aggregate's null accounting intact
        for row in result.aggregate.rows:
            assert row.rr_null_count <= 8 - len(failed)


class TestOutputs:
    def test_file_layout_and_rerun_identity(self, tmp_path):
        plan = _small_plan()
        result = run_sweep(plan)
        out_a = tmp_path / "a"
        write_outputs(result, out_a)
        assert (out_a / "aggregate.csv").exists()
        assert (out_a / "manifest.json").exists()
        traces = sorted((out_a / "runs").glob("*.csv"))
        assert len(traces) == len(result.specs)

        manifest = json.loads((out_a / "manifest.json").read_text())
        assert manifest["plan"]["base_seed"] == 11
        assert len(manifest["runs"]) == len(result.specs)
        assert all(entry["status"] == "ok" for entry in manifest["runs"])
        assert manifest["runs"][0]["master_seed"] == derive_run_seed(11, 0, 0, 0, 0)

        out_b = tmp_path / "b"
        write_outputs(run_sweep(plan), out_b)
        assert (out_a / "aggregate.csv").read_bytes() == (out_b / "aggregate.csv").read_bytes()
        assert (out_a / "manifest.json").read_bytes() == (out_b / "manifest.json").read_bytes()

    def test_parallelism_invariance(self, tmp_path):
        plan = _small_plan(n_seeds=2)
        serial = run_sweep(plan, workers=1)
        parallel = run_sweep(plan, workers=2)
        assert format_aggregate(serial.aggregate) == format_aggregate(parallel.aggregate)
        assert serial.traces == parallel.traces
        assert serial.statuses == parallel.statuses

    def test_reaggregation_from_persisted_traces(self, tmp_path):
        plan = _small_plan()
        result = run_sweep(plan)
        write_outputs(result, tmp_path)

        def parse(text):
            rows = text.strip().split("\n")[1:]
            out = []
            for line in rows:
                parts = line.split(",")
                out.append(
                    (
                        None if parts[1] == "" else float(parts[1]),  # threshold
                        None if parts[3] == "" else float(parts[3]),  # rr
                        None if parts[9] == "" else float(parts[9]),  # stationarity
                    )
                )
            return out

        recomputed = {}
        for spec in result.specs:
            series = parse((tmp_path / "runs" / f"{spec.run_id}.csv").read_text())
            key = (spec.behavior, spec.g, spec.n_new)
            recomputed.setdefault(key, []).append(series)

        for row in result.aggregate.rows:
            series = recomputed[(row.behavior, row.g, row.n_new)]
            rr_vals = [s[row.t][1] for s in series]
            mean, std = cell_stats(rr_vals)
            if row.rr_mean is None:
                assert mean is None
            else:
                assert abs(mean - row.rr_mean) < 1e-8
                assert abs(std - row.rr_std) < 1e-8
            assert sum(1 for v in rr_vals if v is None) == row.rr_null_count

    def test_format_aggregate_layout(self):
        result = run_sweep(_small_plan(n_seeds=2))
        text = format_aggregate(result.aggregate)
        lines = text.strip().split("\n")
        assert lines[0] == (
            "behavior,g,n_new,t,threshold_mean,threshold_std,rr_mean,rr_std,"
            "rr_null_count,stationarity_mean"
        )
        assert len(lines) == 1 + len(result.aggregate.rows)
        first = lines[1].split(",")
        assert first[0] == "binary_constant" and first[1] == "0.3"
