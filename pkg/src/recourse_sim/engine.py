"""Simulation loop: population lifecycle, selection, recourse, adaptation.

Each step runs in a fixed phase order: admit entrants, score, select the
top k and set the bar, evaluate last step's actors against the old bar,
issue fresh recommendations to the losers, and let them respond. Every
random draw comes from a substream keyed by (master_seed, purpose, t,
agent_id), so results never depend on iteration order or worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit

from .behavior import action_probability, adapt, willingness_at_entry
from .domain import (
    PACKAGE_VERSION,
    Agent,
    SimulationConfig,
    StepRecord,
    config_to_dict,
    validate_config,
)
from .metrics import recourse_reliability, stationarity_ratio
from .recourse import counterfactual
from .scorer import LinearScorer, score, train

# substream purposes
STREAM_TRAINING = 0
STREAM_CREATION = 1
STREAM_BEHAVIOR = 2

# agents this close below a bar still count as meeting it (matches
# recourse.TARGET_TOL, where the zero-cost rule uses the same margin)
CANDIDATE_TOL = 1e-9

TRACE_HEADER = (
    "t,threshold,prev_threshold,rr,pop_size,n_winners,n_acted,"
    "n_candidates,n_new,stationarity_ratio,mean_score"
)

# entrant features hook: (t, count, prev_threshold) -> (count, d) array
EntrantSampler = Callable[[int, int, Optional[float]], np.ndarray]


def substream(
    master_seed: int, purpose: int, t: int, agent_id: int
) -> np.random.Generator:
    """Independent generator for one agent's draws in one step."""
    return np.random.default_rng((master_seed, purpose, t, agent_id))


def _mint(
    master_seed: int,
    t: int,
    agent_id: int,
    feature_mean: float,
    feature_sd: float,
    d: int,
    adaptation_mode: str,
    effort_mode: str,
    g: float,
    features: Optional[np.ndarray] = None,
) -> Agent:
    rng = substream(master_seed, STREAM_CREATION, t, agent_id)
    if features is None:
        features = rng.normal(feature_mean, feature_sd, d)
    else:
        features = np.array(features, dtype=float, copy=True)
    level = willingness_at_entry(adaptation_mode, effort_mode, g, rng)
    return Agent(id=agent_id, features=features, willingness=level, entered_at=t)


def init_population(
    p: int,
    feature_mean: float,
    feature_sd: float,
    d: int,
    master_seed: int,
    *,
    adaptation_mode: str = "binary",
    effort_mode: str = "constant",
    g: float = 0.5,
    features: Optional[np.ndarray] = None,
) -> List[Agent]:
    """Mint the t=0 population with ids 0..p-1.

    Each agent draws from its own creation substream, so agent i's
    features and willingness are the same regardless of p. The features
    argument is a test hook that bypasses the Gaussian draw.
    """
    return [
        _mint(
            master_seed, 0, i, feature_mean, feature_sd, d,
            adaptation_mode, effort_mode, g,
            features=None if features is None else features[i],
        )
        for i in range(p)
    ]


def rank_and_select(scores: Dict[int, float], k: int) -> Tuple[List[int], float]:
    """Pick the top-min(k, n) scorers, ties to lower ids; return them with
    the selection bar (the lowest winning score)."""
    if not scores:
        raise ValueError("empty population")
    ids = sorted(scores)
    vals = np.array([scores[i] for i in ids], dtype=float)
    order = np.argsort(-vals, kind="mergesort")  # stable: ties keep id order
    take = min(k, len(ids))
    winners = [ids[int(j)] for j in order[:take]]
    return winners, float(vals[int(order[take - 1])])


@dataclass
class SimulationState:
    """Mutable world for one run; confined to a single worker."""

    t: int
    active_agents: List[Agent]
    threshold_history: List[Optional[float]]
    scorer: LinearScorer
    records: List[StepRecord]
    master_seed: int
    next_id: int
    all_agents: Dict[int, Agent]
    pending_acted: int = 0  # feature changes made in the previous step's phase 7
    entrant_sampler: Optional[EntrantSampler] = None
    agent_scores: Optional[List[List[Tuple[int, float]]]] = None


@dataclass
class RunResult:
    records: List[StepRecord]
    agents: Dict[int, Agent]
    scorer: LinearScorer
    manifest: dict
    agent_scores: Optional[List[List[Tuple[int, float]]]] = None


def step(state: SimulationState, config: SimulationConfig) -> StepRecord:
    """Advance one step and append its record. See the module docstring
    for the phase order."""
    t = state.t
    survivors = state.active_agents
    s_prev = state.threshold_history[-1] if state.threshold_history else None

    # (1) admit the new cohort and merge
    entrants: List[Agent] = []
    if t > 0 and config.n_new > 0:
        injected = None
        if state.entrant_sampler is not None:
            injected = np.asarray(
                state.entrant_sampler(t, config.n_new, s_prev), dtype=float
            )
        for j in range(config.n_new):
            agent = _mint(
                config.master_seed, t, state.next_id,
                config.feature_mean, config.feature_sd, config.feature_dim,
                config.adaptation_mode, config.effort_mode, config.g,
                features=None if injected is None else injected[j],
            )
            state.next_id += 1
            entrants.append(agent)
            state.all_agents[agent.id] = agent
    population = survivors + entrants  # ids ascend by construction

    # (2) score everyone, freezing first-seen scores. The dot products run
    # per agent (a whole-matrix product rounds differently on some rows);
    # only the link function is vectorized, which is bit-stable.
    if population:
        z = np.array(
            [
                float(state.scorer.weights @ a.features) + state.scorer.bias
                for a in population
            ]
        )
        batch = expit(z)
        score_of = {a.id: float(batch[i]) for i, a in enumerate(population)}
        for a in population:
            if a.initial_score is None:
                a.initial_score = score_of[a.id]
    else:
        score_of = {}
    if state.agent_scores is not None:
        state.agent_scores.append([(a.id, score_of[a.id]) for a in population])

    # (3) + (4) select winners and set the bar
    if population:
        winner_ids, threshold = rank_and_select(score_of, config.k)
        winner_set = set(winner_ids)
        for a in population:
            if a.id in winner_set:
                a.exited_at = t
    else:
        winner_ids, threshold, winner_set = [], None, set()
    state.threshold_history.append(threshold)

    # (5) last step's actors judged against the old bar
    candidate_ids: List[int] = []
    if s_prev is not None:
        candidate_ids = [
            a.id
            for a in survivors
            if a.acted_last_step and score_of[a.id] >= s_prev - CANDIDATE_TOL
        ]
    rr = recourse_reliability(candidate_ids, winner_ids)
    ratio = None
    if s_prev is not None:
        ratio = stationarity_ratio(score_of.values(), s_prev, config.k)

    # (6) + (7) losers receive fresh recommendations and respond
    acted_count = 0
    if threshold is not None:
        score_fn = lambda x: score(state.scorer, x)
        for a in population:
            if a.id in winner_set:
                continue
            rec = counterfactual(
                state.scorer, a.features, threshold, agent_id=a.id, issued_at=t
            )
            rng = substream(config.master_seed, STREAM_BEHAVIOR, t, a.id)
            if config.effort_mode == "flexible":
                a.willingness = action_probability(
                    "flexible", a.willingness, config.lambda_flex,
                    threshold, score_of[a.id],
                )
            p_act = action_probability(
                config.effort_mode, a.willingness, config.lambda_flex,
                threshold, score_of[a.id],
            )
            acts = bool(rng.uniform() < p_act)
            outcome = adapt(
                config.adaptation_mode, a.features, rec.target_features,
                config.g, config.sigma_gamma, acts, rng, score_fn=score_fn,
            )
            if outcome.acted and not np.array_equal(outcome.new_features, a.features):
                acted_count += 1
            a.features = outcome.new_features
            a.acted_last_step = outcome.acted
    state.active_agents = [a for a in population if a.exited_at is None]

    record = StepRecord(
        t=t,
        threshold=threshold,
        prev_threshold=s_prev,
        winner_ids=tuple(winner_ids),
        candidate_ids=tuple(candidate_ids),
        rr=rr,
        pop_size=len(population),
        n_acted=state.pending_acted,
        n_new=len(entrants),
        stationarity_ratio=ratio,
        mean_score=float(np.mean(list(score_of.values()))) if score_of else None,
    )
    state.pending_acted = acted_count
    state.records.append(record)
    state.t += 1
    return record


def run(
    config: SimulationConfig,
    *,
    scorer: Optional[LinearScorer] = None,
    initial_features: Optional[np.ndarray] = None,
    entrant_sampler: Optional[EntrantSampler] = None,
    collect_scores: bool = False,
) -> RunResult:
    """Train a scorer on the initial population, then advance steps 0..T-1.

    The keyword hooks replace the trained scorer, the Gaussian initial
    features, or the entrant feature draws; they exist for constructed
    scenarios and leave the phase logic untouched.
    """
    config = validate_config(config)
    if initial_features is not None:
        initial_features = np.asarray(initial_features, dtype=float)
        expected = (config.p, config.feature_dim)
        if initial_features.shape != expected:
            raise ValueError(
                f"initial_features must have shape {expected}, "
                f"got {initial_features.shape}"
            )
    agents = init_population(
        config.p, config.feature_mean, config.feature_sd, config.feature_dim,
        config.master_seed,
        adaptation_mode=config.adaptation_mode, effort_mode=config.effort_mode,
        g=config.g, features=initial_features,
    )
    if scorer is None:
        rng = substream(config.master_seed, STREAM_TRAINING, 0, 0)
        labels = rng.binomial(1, config.label_prob, size=config.p)
        feats = np.stack([a.features for a in agents])
        scorer = train(feats, labels, rng, label_prob=config.label_prob)
    state = SimulationState(
        t=0,
        active_agents=list(agents),
        threshold_history=[],
        scorer=scorer,
        records=[],
        master_seed=config.master_seed,
        next_id=config.p,
        all_agents={a.id: a for a in agents},
        entrant_sampler=entrant_sampler,
        agent_scores=[] if collect_scores else None,
    )
    for _ in range(config.steps):
        step(state, config)
    manifest = {
        "config": config_to_dict(config),
        "scorer": {
            "weights": [float(w) for w in scorer.weights],
            "bias": float(scorer.bias),
        },
        "master_seed": config.master_seed,
        "version": PACKAGE_VERSION,
    }
    return RunResult(
        records=state.records,
        agents=state.all_agents,
        scorer=scorer,
        manifest=manifest,
        agent_scores=state.agent_scores,
    )


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return f"{float(value):.9g}"


def format_trace(records: List[StepRecord]) -> str:
    """Render records as the per-run trace CSV (nulls as empty fields,
    floats at 9 significant digits)."""
    lines = [TRACE_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    str(r.t),
                    _fmt(r.threshold),
                    _fmt(r.prev_threshold),
                    _fmt(r.rr),
                    str(r.pop_size),
                    str(len(r.winner_ids)),
                    str(r.n_acted),
                    str(len(r.candidate_ids)),
                    str(r.n_new),
                    _fmt(r.stationarity_ratio),
                    _fmt(r.mean_score),
                ]
            )
        )
    return "\n".join(lines) + "\n"
