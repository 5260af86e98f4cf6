"""Deterministic multi-agent simulator of recourse under a moving threshold.

A fixed number of favorable outcomes per step creates competition: the bar
for winning is the lowest winning score, agents receive minimal-cost
recommendations targeting that bar, and whether following the advice still
pays off next step is the reliability question this package measures.
"""

from recourse_sim.behavior import (
    BehaviorOutcome,
    action_probability,
    adapt,
    willingness_at_entry,
)
from recourse_sim.domain import (
    PACKAGE_VERSION,
    Agent,
    ConfigError,
    SimulationConfig,
    StepRecord,
    config_from_dict,
    config_to_dict,
    load_config,
    validate_config,
)
from recourse_sim.engine import (
    RunResult,
    SimulationState,
    format_trace,
    init_population,
    rank_and_select,
    run,
    step,
    substream,
)
from recourse_sim.harness import (
    AggregateRow,
    AggregateSeries,
    SweepPlan,
    SweepResult,
    derive_run_seed,
    expand_plan,
    format_aggregate,
    run_sweep,
    write_outputs,
)
from recourse_sim.metrics import (
    GroupRateSeries,
    Histogram,
    group_outcome_rates,
    recourse_reliability,
    score_distribution_snapshot,
    stationarity_ratio,
)
from recourse_sim.recourse import Recommendation, counterfactual
from recourse_sim.scorer import LinearScorer, logit, score, sigmoid, train

__version__ = PACKAGE_VERSION
