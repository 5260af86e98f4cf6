"""Reliability, stationarity, and population-level outcome summaries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .domain import Agent

QUARTILE_LABELS = ("Lowest", "Lower middle", "Upper middle", "Highest")


@dataclass(frozen=True)
class GroupRateSeries:
    """Cumulative positive-outcome fraction per initial-score bin per step."""

    labels: tuple
    group_sizes: tuple
    steps: tuple
    rates: np.ndarray  # shape (n_groups, n_steps)


@dataclass(frozen=True)
class Histogram:
    """Fixed-width score histogram over [0, 1] at one step."""

    t: int
    edges: np.ndarray  # n_bins + 1 edges
    counts: np.ndarray


def recourse_reliability(candidates, winners) -> Optional[float]:
    """Fraction of threshold-reaching actors that actually won; None if none."""
    cand = set(candidates)
    if not cand:
        return None
    return len(cand & set(winners)) / len(cand)


def stationarity_ratio(scores: Iterable[float], s_prev: float, k: int) -> float:
    """Count of scores strictly above the previous threshold, per slot."""
    return sum(1 for s in scores if s > s_prev) / k


def group_labels(n_groups: int) -> tuple:
    if n_groups == 4:
        return QUARTILE_LABELS
    if n_groups == 1:
        return ("All",)
    middle = tuple(f"Bin {i}" for i in range(2, n_groups))
    return ("Lowest",) + middle + ("Highest",)


def group_outcome_rates(
    agents: Sequence[Agent], n_steps: int, n_groups: int = 4
) -> GroupRateSeries:
    """Bin agents into equal-count quantiles of initial score and track the
    cumulative fraction of each bin that has exited with a favorable outcome.
    """
    if n_groups < 1:
        raise ValueError("n_groups must be >= 1")
    if len(agents) < n_groups:
        raise ValueError(
            f"need at least {n_groups} agents to form {n_groups} groups, "
            f"got {len(agents)}"
        )
    missing = [a.id for a in agents if a.initial_score is None]
    if missing:
        raise ValueError(f"agents never scored: {missing[:5]}")
    ordered = sorted(agents, key=lambda a: (a.initial_score, a.id))
    bins = np.array_split(np.arange(len(ordered)), n_groups)
    steps = tuple(range(n_steps))
    rates = np.zeros((n_groups, n_steps))
    for gi, idx in enumerate(bins):
        exits = np.sort(
            [ordered[i].exited_at for i in idx if ordered[i].exited_at is not None]
        )
        for t in steps:
            rates[gi, t] = np.searchsorted(exits, t, side="right") / len(idx)
    return GroupRateSeries(
        labels=group_labels(n_groups),
        group_sizes=tuple(len(idx) for idx in bins),
        steps=steps,
        rates=rates,
    )


def score_distribution_snapshot(
    scores: Iterable[float], t: int, n_bins: int = 20
) -> Histogram:
    """Histogram the population scores into n_bins fixed-width bins on [0, 1].

    An empty population yields the all-zero histogram, so the conservation
    property (counts sum to population size) holds there too.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    values = np.asarray(list(scores), dtype=float)
    counts, edges = np.histogram(values, bins=n_bins, range=(0.0, 1.0))
    return Histogram(t=t, edges=edges, counts=counts)
