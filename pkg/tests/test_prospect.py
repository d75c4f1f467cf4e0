"""Prelec probability weighting and its inverse."""

import math

import numpy as np
import pytest

from hetnetsim import DecisionModel, weight, weight_inverse
from hetnetsim.prospect import FIXED_POINT

ALPHAS = [round(0.1 * k, 1) for k in range(1, 10)]


def bisect_weight_inverse(q: float, alpha: float) -> float:
    """Independent inverse: bisection on the forward map."""
    lo, hi = 1e-15, 1.0 - 1e-15
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.exp(-((-math.log(mid)) ** alpha)) < q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestWeight:
    def test_fixed_point_every_alpha(self):
        for alpha in ALPHAS:
            model = DecisionModel.pt(alpha)
            assert abs(weight(FIXED_POINT, model) - FIXED_POINT) <= 1e-12

    def test_eut_identity(self):
        model = DecisionModel.eut()
        for p in (0.0, 0.123, FIXED_POINT, 0.9, 1.0):
            assert weight(p, model) == p

    def test_endpoints(self):
        model = DecisionModel.pt(0.7)
        assert weight(0.0, model) == 0.0
        assert weight(1.0, model) == 1.0

    def test_known_value(self):
        # 0.704721598... checked against a 60-digit Decimal evaluation
        assert weight(0.8, DecisionModel.pt(0.7)) == pytest.approx(0.7047216, abs=1e-6)

    def test_overweights_small_probabilities(self):
        model = DecisionModel.pt(0.7)
        for p in np.linspace(1e-6, FIXED_POINT * (1 - 1e-9), 1000):
            assert weight(float(p), model) > p

    def test_underweights_large_probabilities(self):
        for alpha in ALPHAS:
            model = DecisionModel.pt(alpha)
            for p in np.linspace(FIXED_POINT * (1 + 1e-9), 1.0 - 1e-9, 200):
                assert weight(float(p), model) < p

    def test_strictly_increasing(self):
        model = DecisionModel.pt(0.4)
        grid = np.linspace(1e-6, 1.0 - 1e-6, 2000)
        vals = [weight(float(p), model) for p in grid]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_s_shape_second_differences(self):
        # concave below the fixed point, convex above it
        model = DecisionModel.pt(0.7)
        lo = np.linspace(0.01, FIXED_POINT - 0.01, 400)
        hi = np.linspace(FIXED_POINT + 0.01, 0.99, 400)
        for grid, sign in ((lo, -1.0), (hi, 1.0)):
            vals = np.array([weight(float(p), model) for p in grid])
            second = np.diff(vals, 2)
            assert np.all(sign * second > 0)

    def test_domain_enforced(self):
        model = DecisionModel.pt(0.7)
        with pytest.raises(ValueError):
            weight(-0.01, model)
        with pytest.raises(ValueError):
            weight(1.01, model)


class TestWeightInverse:
    def test_eut_identity(self):
        assert weight_inverse(0.42, DecisionModel.eut()) == 0.42

    def test_fixed_point(self):
        for alpha in ALPHAS:
            model = DecisionModel.pt(alpha)
            assert abs(weight_inverse(FIXED_POINT, model) - FIXED_POINT) <= 1e-12

    def test_known_value_against_bisection(self):
        got = weight_inverse(0.8, DecisionModel.pt(0.7))
        assert got == pytest.approx(0.8892, abs=1e-3)
        assert got == pytest.approx(bisect_weight_inverse(0.8, 0.7), abs=1e-9)

    def test_round_trip_identity(self):
        # Target probabilities are taken as images w(p) over a full grid.
        # For small alpha the curve is so steep near 1 that adjacent
        # doubles map 1e-6 apart; between those images no double can
        # invert to 1e-12, so the image grid is the strongest float
        # statement of the identity, and it covers all of (0, 1).
        for alpha in ALPHAS:
            model = DecisionModel.pt(alpha)
            for p in np.linspace(0.001, 0.999, 500):
                q = weight(float(p), model)
                assert abs(weight_inverse(q, model) - p) <= 1e-12
                assert abs(weight(weight_inverse(q, model), model) - q) <= 1e-12

    def test_extreme_tail_underflows_to_zero(self):
        model = DecisionModel.pt(0.1)
        assert weight_inverse(1e-3, model) == 0.0
        assert weight(0.0, model) == 0.0

    def test_endpoints(self):
        model = DecisionModel.pt(0.5)
        assert weight_inverse(0.0, model) == 0.0
        assert weight_inverse(1.0, model) == 1.0

    def test_domain_enforced(self):
        model = DecisionModel.pt(0.5)
        with pytest.raises(ValueError):
            weight_inverse(-0.5, model)


class TestDecisionModel:
    def test_alpha_bounds(self):
        with pytest.raises(ValueError):
            DecisionModel.pt(0.0)
        with pytest.raises(ValueError):
            DecisionModel.pt(1.0)

    def test_kind_enforced(self):
        with pytest.raises(ValueError):
            DecisionModel(kind="other")

    def test_flags(self):
        assert DecisionModel.pt(0.7).is_pt
        assert not DecisionModel.eut().is_pt
