"""Minimal-L2 counterfactual generation for a linear scorer.

For a linear model the cheapest move to a target score lies along the
weight vector, so the recommendation is a one-line projection rather
than a search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scorer import LinearScorer, logit, score

# Inputs within this margin of the target count as already meeting it;
# the engine uses the same tolerance for candidate membership.
TARGET_TOL = 1e-9


@dataclass(frozen=True)
class Recommendation:
    """A minimal-cost feature change lifting an agent to the target score."""

    agent_id: int
    target_features: np.ndarray
    target_score: float
    cost: float
    issued_at: int


def counterfactual(
    scorer: LinearScorer,
    x: np.ndarray,
    s: float,
    agent_id: int = -1,
    issued_at: int = -1,
) -> Recommendation:
    """Return the minimum-L2 move from x to score s.

    The optimum is x' = x + ((logit(s) - (w.x + b)) / ||w||^2) * w.
    Inputs already at or above s are returned unchanged at zero cost.
    """
    if not 0.0 < s < 1.0:
        raise ValueError(f"target score must lie in (0, 1), got {s}")
    w = np.asarray(scorer.weights, dtype=float)
    norm_sq = float(w @ w)
    if norm_sq == 0.0:
        raise ValueError("scorer weights are all zero")
    x = np.asarray(x, dtype=float)
    if score(scorer, x) >= s - TARGET_TOL:
        return Recommendation(agent_id, x.copy(), s, 0.0, issued_at)
    gap = logit(s) - (float(w @ x) + scorer.bias)
    target = x + (gap / norm_sq) * w
    return Recommendation(
        agent_id, target, s, float(np.linalg.norm(target - x)), issued_at
    )
