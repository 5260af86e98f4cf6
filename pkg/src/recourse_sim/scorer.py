"""Linear probabilistic scorer: training, evaluation, and the inverse link.

The scorer is a plain logistic model fit once by full-batch gradient
descent and then frozen; all later dynamics come from the moving threshold,
never from refitting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit
from scipy.special import logit as _logit

LEARNING_RATE = 0.1
MAX_ITERATIONS = 5000
GRAD_TOL = 1e-8          # infinity norm over the combined (w, b) gradient
MIN_WEIGHT_NORM = 1e-6   # below this the recourse direction is undefined
MAX_FIT_ATTEMPTS = 10


@dataclass(frozen=True)
class LinearScorer:
    """Frozen logistic model: score(x) = sigmoid(weights . x + bias)."""

    weights: np.ndarray
    bias: float


def sigmoid(z: float) -> float:
    return float(expit(z))


def logit(s: float) -> float:
    """Inverse link ln(s / (1-s)); rejects inputs outside (0, 1)."""
    if not (0.0 < s < 1.0):
        raise ValueError(f"logit domain is (0,1) exclusive, got {s}")
    return float(_logit(s))


def score(scorer: LinearScorer, x: np.ndarray) -> float:
    """Score one feature vector; strictly increasing in weights . x + bias."""
    return float(expit(float(scorer.weights @ x) + scorer.bias))


def _fit(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Full-batch gradient descent on the logistic loss, zero init."""
    n = len(y)
    w = np.zeros(X.shape[1])
    b = 0.0
    for _ in range(MAX_ITERATIONS):
        p = expit(X @ w + b)
        err = p - y
        grad_w = X.T @ err / n
        grad_b = float(err.mean())
        if max(float(np.abs(grad_w).max()), abs(grad_b)) < GRAD_TOL:
            break
        w = w - LEARNING_RATE * grad_w
        b = b - LEARNING_RATE * grad_b
    return w, b


def train(
    features: np.ndarray,
    labels: np.ndarray,
    rng: np.random.Generator,
    label_prob: float = 0.5,
) -> LinearScorer:
    """Fit the logistic scorer.

    The given labels must contain both classes. If a fit lands on a
    near-zero weight vector, the labels are resampled from
    Bernoulli(label_prob) and the fit retried, up to MAX_FIT_ATTEMPTS
    total; resampled labels that miss a class count as failed attempts.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=float)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("features must be a 2-D array aligned with labels")
    if len(y) < 2:
        raise ValueError("training needs at least 2 samples")
    if not np.all((y == 0.0) | (y == 1.0)):
        raise ValueError("labels must be 0 or 1")
    if y.min() == y.max():
        raise ValueError("labels must contain both classes")

    for _ in range(MAX_FIT_ATTEMPTS):
        if y.min() != y.max():
            w, b = _fit(X, y)
            if float(np.linalg.norm(w)) >= MIN_WEIGHT_NORM:
                return LinearScorer(weights=w, bias=b)
        y = rng.binomial(1, label_prob, size=len(y)).astype(float)
    raise ValueError(
        f"no non-degenerate fit in {MAX_FIT_ATTEMPTS} attempts "
        "(weights kept collapsing or labels kept missing a class)"
    )
