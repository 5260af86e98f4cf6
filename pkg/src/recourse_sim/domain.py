"""Core data types, configuration schema, and validation.

Everything downstream (scorer, engine, harness, CLI) shares these types.
A config is an ordinary frozen dataclass; the JSON form on disk is a single
flat object whose keys are exactly the field names below.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

ADAPTATION_MODES = ("binary", "continuous")
EFFORT_MODES = ("constant", "flexible")

PACKAGE_VERSION = "0.1.0"

MAX_SEED = 2**64  # master_seed must fit in 64 bits


class ConfigError(ValueError):
    """Raised by validate_config; carries every violation, not just the first."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass
class Agent:
    """One simulated individual.

    features is a length-d float vector. willingness is the acting
    parameter l in [0,1] (its meaning depends on the effort mode).
    initial_score is frozen at the agent's first scoring; exited_at is the
    step at which the agent won a favorable outcome, or None while active.
    """

    id: int
    features: np.ndarray
    willingness: float
    entered_at: int
    initial_score: Optional[float] = None
    exited_at: Optional[int] = None
    acted_last_step: bool = False

    @property
    def is_active(self) -> bool:
        return self.exited_at is None

    @property
    def status(self) -> str:
        return "active" if self.exited_at is None else f"exited({self.exited_at})"


@dataclass(frozen=True)
class SimulationConfig:
    """All simulation parameters with their defaults.

    p: initial population size.
    k: favorable outcomes granted per step.
    n_new: agents entering at each step after the first.
    steps: number of time steps to simulate.
    g: global ease of acting on recourse, in [0,1].
    adaptation_mode: "binary" (exact moves) or "continuous" (stochastic
        step fraction along the recommendation).
    effort_mode: "constant" (fixed willingness) or "flexible"
        (gap-dependent acting probability).
    sigma_gamma: spread of the continuous adaptation step fraction.
    lambda_flex: scale of the flexible-effort acting probability.
    feature_dim / feature_mean / feature_sd: entry feature distribution.
    label_prob: Bernoulli parameter for the scorer's training labels.
    master_seed: 64-bit seed from which all randomness derives.
    """

    p: int = 100
    k: int = 10
    n_new: int = 10
    steps: int = 50
    g: float = 0.5
    adaptation_mode: str = "binary"
    effort_mode: str = "constant"
    sigma_gamma: float = 0.25
    lambda_flex: float = 0.1
    feature_dim: int = 2
    feature_mean: float = 0.5
    feature_sd: float = 1.0 / 3.0
    label_prob: float = 0.5
    master_seed: int = 0


@dataclass(frozen=True)
class StepRecord:
    """Everything recorded about one time step.

    threshold is the minimum winner score s_t (None when nobody could win).
    prev_threshold is s_{t-1} (None at t=0 or after an empty step).
    rr is None exactly when candidate_ids is empty. n_acted counts agents
    whose features actually changed in the preceding inter-step phase.
    """

    t: int
    threshold: Optional[float]
    prev_threshold: Optional[float]
    winner_ids: tuple[int, ...]
    candidate_ids: tuple[int, ...]
    rr: Optional[float]
    pop_size: int
    n_acted: int
    n_new: int
    stationarity_ratio: Optional[float]
    mean_score: Optional[float]


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def config_violations(config: SimulationConfig) -> list[str]:
    """Collect every invariant violation; empty list means valid."""
    v: list[str] = []
    if not _is_int(config.k) or config.k < 1:
        v.append("k must be >= 1")
    if not _is_int(config.p) or config.p < 1:
        v.append("p must be >= 1")
    elif _is_int(config.k) and config.k >= 1 and config.p < config.k:
        v.append("p must be >= k")
    if not _is_int(config.n_new) or config.n_new < 0:
        v.append("n_new must be >= 0")
    if not _is_int(config.steps) or config.steps < 1:
        v.append("steps must be >= 1")
    if not (0.0 <= config.g <= 1.0):
        v.append("g must lie in [0,1]")
    if config.adaptation_mode not in ADAPTATION_MODES:
        v.append(f"adaptation_mode must be one of {ADAPTATION_MODES}")
    if config.effort_mode not in EFFORT_MODES:
        v.append(f"effort_mode must be one of {EFFORT_MODES}")
    if config.sigma_gamma < 0:
        v.append("sigma_gamma must be >= 0")
    if not (config.lambda_flex > 0):
        v.append("lambda_flex must be > 0")
    if not _is_int(config.feature_dim) or config.feature_dim < 1:
        v.append("feature_dim must be >= 1")
    if not (config.feature_sd > 0):
        v.append("feature_sd must be > 0")
    if not (0.0 < config.label_prob < 1.0):
        v.append("label_prob must lie in (0,1) exclusive")
    if not _is_int(config.master_seed) or not (0 <= config.master_seed < MAX_SEED):
        v.append("master_seed must be an integer in [0, 2^64)")
    return v


def validate_config(config: SimulationConfig) -> SimulationConfig:
    """Return the config unchanged if valid, else raise ConfigError
    listing every violated invariant."""
    violations = config_violations(config)
    if violations:
        raise ConfigError(violations)
    return config


# ── Config serialization ─────────────────────────────────────────────────────

_FIELD_NAMES = tuple(f.name for f in dataclasses.fields(SimulationConfig))


def config_to_dict(config: SimulationConfig) -> dict:
    return dataclasses.asdict(config)


def config_from_dict(data: dict) -> SimulationConfig:
    """Build a config from a flat dict; unknown keys are an error,
    missing keys take their defaults."""
    if not isinstance(data, dict):
        raise ConfigError(["config document must be a flat JSON object"])
    unknown = sorted(set(data) - set(_FIELD_NAMES))
    if unknown:
        raise ConfigError([f"unknown config key: {k}" for k in unknown])
    cleaned = {}
    for name, value in data.items():
        # JSON has no int/float distinction for whole numbers; keep ints
        # for integer fields and coerce whole floats (5.0 -> 5).
        if name in ("p", "k", "n_new", "steps", "feature_dim", "master_seed"):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError([f"{name} must be a number"])
            if isinstance(value, float):
                if not value.is_integer():
                    raise ConfigError([f"{name} must be an integer"])
                value = int(value)
        cleaned[name] = value
    return SimulationConfig(**cleaned)


def load_config(path: str) -> SimulationConfig:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError([f"config is not valid JSON: {e}"]) from e
    return config_from_dict(data)


def save_config(config: SimulationConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(config_to_dict(config), f, indent=2, sort_keys=True)
        f.write("\n")
