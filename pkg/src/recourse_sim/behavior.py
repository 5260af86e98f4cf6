"""Agent action model: how willing agents are to act and how they move.

Two independent axes make up the grid. Adaptation says where an acting
agent lands (exactly on the recommendation, or a random fraction of the
way along it). Effort says how the acting probability is set (a constant
per-agent level, or a function of how far the agent sits from the
threshold).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

MAX_GAMMA_DRAWS = 100


@dataclass(frozen=True)
class BehaviorOutcome:
    """Result of one agent's move, including the realized score change."""

    new_features: np.ndarray
    acted: bool
    gamma: Optional[float]  # step fraction; None outside continuous acting
    delta_score: float


def willingness_at_entry(
    adaptation_mode: str, effort_mode: str, g: float, rng: np.random.Generator
) -> float:
    """Sample the willingness level an agent carries for its lifetime.

    Flexible effort ignores the stored level (it is recomputed from the
    score gap every step), so it gets a placeholder of 1. Constant effort
    draws a uniform level for continuous adapters; binary adapters store
    g itself and realize a fresh Bernoulli(g) decision each step.
    """
    if effort_mode == "flexible":
        return 1.0
    if adaptation_mode == "continuous":
        return float(rng.uniform())
    return float(g)


def action_probability(
    effort_mode: str, l: float, lambda_flex: float, threshold: float, current_score: float
) -> float:
    """Probability that an agent acts on its recommendation this step."""
    if effort_mode == "constant":
        return float(l)
    gap = threshold - current_score
    if gap <= lambda_flex:  # includes agents at or above the threshold
        return 1.0
    return float(lambda_flex / gap)


def adapt(
    adaptation_mode: str,
    x: np.ndarray,
    target: np.ndarray,
    g: float,
    sigma_gamma: float,
    acted: bool,
    rng: np.random.Generator,
    *,
    score_fn: Callable[[np.ndarray], float],
) -> BehaviorOutcome:
    """Apply one agent's move toward the recommended features.

    Binary adapters land on the target exactly. Continuous adapters step
    a fraction gamma ~ Normal(g, sigma_gamma) of the way, redrawn while
    negative (up to MAX_GAMMA_DRAWS, then pinned to 0 so the move is a
    no-op). Non-actors are returned untouched.
    """
    if not acted:
        return BehaviorOutcome(x, False, None, 0.0)
    if adaptation_mode == "binary":
        new = np.array(target, dtype=float, copy=True)
        return BehaviorOutcome(new, True, None, score_fn(new) - score_fn(x))
    if adaptation_mode != "continuous":
        raise ValueError(f"unknown adaptation mode: {adaptation_mode!r}")
    gamma = 0.0
    for _ in range(MAX_GAMMA_DRAWS):
        draw = float(rng.normal(g, sigma_gamma))
        if draw >= 0.0:
            gamma = draw
            break
    new = x + gamma * (target - x)
    return BehaviorOutcome(new, True, gamma, score_fn(new) - score_fn(x))
