"""Scorer tests.

The fit oracle below is independent of the trained optimizer: it minimizes
the logistic loss by brute force over a fine (w1, b) grid on a dataset whose
second feature is constant, so the trained scorer can be checked against an
exhaustive search rather than against itself.
"""

from __future__ import annotations

import numpy as np
import pytest

from recourse_sim.scorer import LinearScorer, logit, score, sigmoid, train

# Two oracle datasets, both with x2 held constant so the problem is
# effectively two-parameter (w1, b).
#
# SEP: labels equal to [x1 > 0.5], linearly separable, so the likelihood
# has no interior optimum (loss keeps falling as w1 grows); here the
# brute-force fit can only be compared on direction and score ordering.
# MIX: labels alternate, giving a finite interior optimum where the
# gradient fit and the exhaustive grid fit must coincide quantitatively.
SEP_X = np.array([[0.2, 0.5], [0.4, 0.5], [0.6, 0.5], [0.8, 0.5]])
SEP_Y = np.array([0.0, 0.0, 1.0, 1.0])
MIX_X = np.array([[0.2, 0.5], [0.4, 0.5], [0.6, 0.5], [0.8, 0.5]])
MIX_Y = np.array([0.0, 1.0, 0.0, 1.0])


def _nll(X: np.ndarray, y: np.ndarray, w1: float, b: float) -> float:
    z = X[:, 0] * w1 + b
    # log(1 + e^z) - y*z, computed stably
    return float(np.sum(np.logaddexp(0.0, z) - y * z))


def _grid_fit(X: np.ndarray, y: np.ndarray, lo: float, hi: float, n: int) -> tuple[float, float, float]:
    """Brute-force logistic fit over an (n x n) grid of (w1, b)."""
    w_grid = np.linspace(lo, hi, n)
    b_grid = np.linspace(lo, hi, n)
    best = (np.inf, 0.0, 0.0)
    for w1 in w_grid:
        zz = (X[:, 0] * w1)[:, None] + b_grid[None, :]
        nll = np.sum(np.logaddexp(0.0, zz) - y[:, None] * zz, axis=0)
        j = int(np.argmin(nll))
        if nll[j] < best[0]:
            best = (float(nll[j]), float(w1), float(b_grid[j]))
    return best


class TestTrainOracle:
    def test_ordering_matches_x1(self):
        rng = np.random.default_rng(7)
        scorer = train(SEP_X, SEP_Y, rng)
        scores = [score(scorer, x) for x in SEP_X]
        assert scores == sorted(scores)
        assert scores[1] < scores[2]

    def test_separable_direction_matches_grid(self):
        rng = np.random.default_rng(7)
        scorer = train(SEP_X, SEP_Y, rng)
        _, gw, _ = _grid_fit(SEP_X, SEP_Y, -30.0, 30.0, 301)
        assert gw > 0 and scorer.weights[0] > 0

    def test_interior_optimum_matches_grid(self):
        rng = np.random.default_rng(7)
        scorer = train(MIX_X, MIX_Y, rng)
        # coarse pass to locate the basin, fine pass to resolve it
        _, gw, gb = _grid_fit(MIX_X, MIX_Y, -10.0, 10.0, 401)
        fine = 0.5
        w_grid = np.linspace(gw - fine, gw + fine, 201)
        b_grid = np.linspace(gb - fine, gb + fine, 201)
        best = (np.inf, 0.0, 0.0)
        for w1 in w_grid:
            zz = (MIX_X[:, 0] * w1)[:, None] + b_grid[None, :]
            nll = np.sum(np.logaddexp(0.0, zz) - MIX_Y[:, None] * zz, axis=0)
            j = int(np.argmin(nll))
            if nll[j] < best[0]:
                best = (float(nll[j]), float(w1), float(b_grid[j]))
        grid_nll, gw, gb = best
        # x2 is constant 0.5, so w2 and the bias are one shared intercept:
        # compare the grid's b against 0.5*w2 + b.
        b_eff = 0.5 * float(scorer.weights[1]) + float(scorer.bias)
        trained_nll = _nll(MIX_X, MIX_Y, float(scorer.weights[0]), b_eff)
        # the trainer stops after a fixed iteration budget, so it sits a
        # little uphill of the exact optimum; 1e-3 in loss and 0.15 in the
        # parameters still rules out any wrong-loss or wrong-sign fit.
        assert trained_nll <= grid_nll + 1e-3
        assert abs(float(scorer.weights[0]) - gw) < 0.15
        assert abs(b_eff - gb) < 0.15

    def test_train_is_deterministic(self):
        a = train(SEP_X, SEP_Y, np.random.default_rng(3))
        b = train(SEP_X, SEP_Y, np.random.default_rng(3))
        assert np.array_equal(a.weights, b.weights) and a.bias == b.bias


class TestTrainErrors:
    def test_all_labels_identical_is_an_error(self):
        y = np.ones(4)
        with pytest.raises(ValueError):
            train(SEP_X, y, np.random.default_rng(0))

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            train(SEP_X[:1], SEP_Y[:1], np.random.default_rng(0))

    def test_trained_weights_never_degenerate(self):
        rng = np.random.default_rng(11)
        for seed in range(5):
            r = np.random.default_rng(seed)
            X = r.normal(0.5, 1 / 3, size=(60, 2))
            y = r.integers(0, 2, size=60).astype(float)
            if y.min() == y.max():
                continue
            scorer = train(X, y, r)
            assert float(np.linalg.norm(scorer.weights)) >= 1e-6


class TestScore:
    def test_zero_weights_give_half(self):
        s = LinearScorer(weights=np.zeros(2), bias=0.0)
        assert score(s, np.array([3.0, -2.0])) == 0.5

    def test_logit_zero_point(self):
        s = LinearScorer(weights=np.array([1.0, 1.0]), bias=-1.0)
        assert score(s, np.array([0.5, 0.5])) == 0.5

    def test_sigmoid_of_one(self):
        s = LinearScorer(weights=np.array([1.0, 0.0]), bias=0.0)
        assert score(s, np.array([1.0, 0.0])) == pytest.approx(0.7310585786300049, abs=1e-12)

    def test_monotone_in_linear_term(self):
        rng = np.random.default_rng(5)
        s = LinearScorer(weights=rng.normal(size=2), bias=float(rng.normal()))
        xs = rng.normal(size=(50, 2))
        z = xs @ s.weights + s.bias
        order = np.argsort(z)
        vals = np.array([score(s, x) for x in xs])
        assert np.all(np.diff(vals[order]) >= 0)


class TestLogit:
    def test_half_maps_to_zero(self):
        assert logit(0.5) == 0.0

    def test_inverse_of_sigmoid_one(self):
        assert logit(0.7310585786300049) == pytest.approx(1.0, abs=1e-5)

    def test_domain_boundaries_rejected(self):
        for bad in (0.0, 1.0, -0.2, 1.7):
            with pytest.raises(ValueError):
                logit(bad)

    def test_round_trip_identity(self):
        # Near s=1 the spacing of float64 limits how much of z survives the
        # trip (adjacent floats around sigmoid(30) are ~1e-3 apart in logit
        # space), so the tight bound applies where floats can support it and
        # the representational bound ulp(s)/(s(1-s)) applies everywhere.
        zs = np.linspace(-30.0, 30.0, 301)
        for z in zs:
            s = sigmoid(float(z))
            err = abs(logit(s) - float(z))
            if z <= 9.0:
                assert err < 1e-12
            assert err <= 2.0 * np.spacing(s) / (s * (1.0 - s)) + 1e-12
