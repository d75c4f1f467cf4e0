"""The user's best response, checked against an independent enumerator."""

import math

import numpy as np
import pytest

from hetnetsim import (
    NO_BID,
    Bid,
    DecisionModel,
    NoBid,
    UserProfile,
    best_response,
    feasible_set,
    perceived_guarantee,
    select_wifi_sp,
)
from hetnetsim.follower import FLOOR_REL_TOL
from hetnetsim.prospect import FIXED_POINT


def oracle_best_response(bid_c, bid_w, user, alpha=None):
    """Exhaustive four-strategy enumerator, coded from scratch.

    alpha None means objective perception; otherwise the Prelec exponent.
    Mirrors the documented relative floor slack of 1e-9 and the tie order
    (fewer acceptances first, then the WiFi-only branch).
    """

    def w(p):
        if alpha is None or p in (0.0, 1.0):
            return p
        return math.exp(-((-math.log(p)) ** alpha))

    def offer(bid):
        return (bid.rate, bid.price, w(bid.guarantee)) if isinstance(bid, Bid) else None

    oc, ow = offer(bid_c), offer(bid_w)
    best, best_u = (0, 0), 0.0
    for p_c, p_w in ((0, 1), (1, 0), (1, 1)):
        if p_c and oc is None:
            continue
        if p_w and ow is None:
            continue
        rate = (oc[0] * oc[2] if p_c else 0.0) + (ow[0] * ow[2] if p_w else 0.0)
        paid = (oc[1] if p_c else 0.0) + (ow[1] if p_w else 0.0)
        if rate < user.b_min * (1.0 - 1e-9):
            continue
        benefit = user.delta * rate ** (1.0 / user.theta) if rate > 0 else 0.0
        if benefit < paid:
            continue
        if benefit - paid > best_u:
            best, best_u = (p_c, p_w), benefit - paid
    return best, best_u


def random_instance(rng):
    user = UserProfile(
        delta=float(rng.uniform(0.2, 20.0)),
        theta=float(rng.uniform(1.1, 5.0)),
        b_min=float(rng.uniform(0.1, 8.0)),
    )

    def draw_bid():
        if rng.random() < 0.2:
            return NoBid("draw")
        return Bid(
            rate=float(rng.uniform(0.1, 20.0)),
            price=float(rng.uniform(0.0, 30.0)),
            bandwidth=float(rng.uniform(0.0, 10.0)),
            guarantee=float(rng.uniform(0.0, 1.0)),
        )

    return draw_bid(), draw_bid(), user


def marginal_bid(rate: float, b_min: float, price: float) -> Bid:
    # rate * guarantee == b_min by construction, the floor case
    return Bid(rate=rate, price=price, bandwidth=1.0, guarantee=b_min / rate)


class TestPerceivedGuarantee:
    def test_silent_slot_is_zero(self):
        assert perceived_guarantee(NO_BID, DecisionModel.pt(0.7)) == 0.0

    def test_weighting_applied(self):
        bid = Bid(rate=2.0, price=1.0, bandwidth=1.0, guarantee=0.8)
        assert perceived_guarantee(bid, DecisionModel.eut()) == 0.8
        assert perceived_guarantee(bid, DecisionModel.pt(0.7)) == pytest.approx(
            0.7047216, abs=1e-6
        )


class TestFeasibleSet:
    def test_both_silent(self):
        user = UserProfile(delta=1.0, theta=2.0, b_min=1.0)
        assert feasible_set(NO_BID, NO_BID, user, DecisionModel.eut()) == {(0, 0)}

    def test_floor_bids_under_objective_perception(self):
        # floor-tight offers keep every strategy rate-feasible; the price
        # condition then decides membership
        user = UserProfile(delta=5.0, theta=2.0, b_min=2.0)
        bid = marginal_bid(4.0, user.b_min, price=0.5)
        fs = feasible_set(bid, bid, user, DecisionModel.eut())
        assert fs == {(0, 0), (0, 1), (1, 0), (1, 1)}

    def test_pt_floor_bids_above_fixed_point_drop_singles(self):
        user = UserProfile(delta=50.0, theta=2.0, b_min=2.0)
        bid = marginal_bid(3.0, user.b_min, price=0.1)  # guarantee 2/3 > 1/e
        assert bid.guarantee > FIXED_POINT
        fs = feasible_set(bid, bid, user, DecisionModel.pt(0.7))
        assert (0, 1) not in fs
        assert (1, 0) not in fs
        assert fs <= {(0, 0), (1, 1)}

    def test_floor_tolerance_keeps_one_ulp_short_products(self):
        user = UserProfile(delta=50.0, theta=2.0, b_min=2.0)
        shy = Bid(rate=4.0, price=0.1, bandwidth=1.0, guarantee=0.5 * (1.0 - 1e-10))
        short = Bid(rate=4.0, price=0.1, bandwidth=1.0, guarantee=0.5 * (1.0 - 1e-6))
        assert (0, 1) in feasible_set(NO_BID, shy, user, DecisionModel.eut())
        assert (0, 1) not in feasible_set(NO_BID, short, user, DecisionModel.eut())

    def test_benefit_must_cover_price(self):
        user = UserProfile(delta=1.0, theta=2.0, b_min=1.0)
        dear = Bid(rate=4.0, price=100.0, bandwidth=1.0, guarantee=0.9)
        assert feasible_set(NO_BID, dear, user, DecisionModel.eut()) == {(0, 0)}


class TestBestResponse:
    def test_both_silent(self):
        user = UserProfile(delta=1.0, theta=2.0, b_min=1.0)
        assert best_response(NO_BID, NO_BID, user, DecisionModel.eut()) == ((0, 0), 0.0)

    def test_symmetric_floor_bids_multihome_when_gap_covers_price(self):
        user = UserProfile(delta=10.0, theta=2.0, b_min=2.0)
        gap = user.delta * (2.0**0.5 - 1.0) * user.b_min**0.5
        bid = marginal_bid(5.0, user.b_min, price=gap * 0.9)
        strategy, _ = best_response(bid, bid, user, DecisionModel.eut())
        assert strategy == (1, 1)

    def test_pt_floor_bids_collapse_single_strategies(self):
        user = UserProfile(delta=50.0, theta=2.0, b_min=2.0)
        bid = marginal_bid(3.0, user.b_min, price=0.1)
        strategy, _ = best_response(bid, bid, user, DecisionModel.pt(0.7))
        assert strategy in ((0, 0), (1, 1))

    def test_tie_prefers_fewer_acceptances(self):
        # a free second acceptance adds benefit, so build an exact-utility tie:
        # one real offer against an empty slot leaves only (0,1) vs (0,0);
        # at utility exactly zero the outside option wins
        user = UserProfile(delta=1.0, theta=2.0, b_min=0.5)
        zero = Bid(rate=2.0, price=1.0, bandwidth=1.0, guarantee=0.5)
        strategy, u = best_response(NO_BID, zero, user, DecisionModel.eut())
        assert strategy == (0, 0)
        assert u == 0.0

    def test_utility_never_negative(self):
        rng = np.random.default_rng(23)
        for _ in range(500):
            bid_c, bid_w, user = random_instance(rng)
            _, u = best_response(bid_c, bid_w, user, DecisionModel.eut())
            assert u >= 0.0

    def test_price_drop_never_flips_acceptance_away(self):
        rng = np.random.default_rng(29)
        model = DecisionModel.eut()
        checked = 0
        for _ in range(800):
            bid_c, bid_w, user = random_instance(rng)
            (p_c, p_w), _ = best_response(bid_c, bid_w, user, model)
            if p_w and isinstance(bid_w, Bid) and bid_w.price > 0:
                cheaper = Bid(
                    rate=bid_w.rate,
                    price=bid_w.price * float(rng.uniform(0.1, 0.9)),
                    bandwidth=bid_w.bandwidth,
                    guarantee=bid_w.guarantee,
                )
                (_, p_w2), _ = best_response(bid_c, cheaper, user, model)
                assert p_w2 == 1
                checked += 1
        assert checked > 50

    def test_oracle_agreement_spot(self):
        rng = np.random.default_rng(31)
        for model, alpha in ((DecisionModel.eut(), None), (DecisionModel.pt(0.7), 0.7)):
            for _ in range(2000):
                bid_c, bid_w, user = random_instance(rng)
                got = best_response(bid_c, bid_w, user, model)
                want = oracle_best_response(bid_c, bid_w, user, alpha)
                assert got[0] == want[0]
                assert got[1] == pytest.approx(want[1], rel=1e-9, abs=1e-12)


class TestSelectWifiSp:
    def test_empty_or_silent(self):
        user = UserProfile(delta=1.0, theta=2.0, b_min=1.0)
        model = DecisionModel.eut()
        assert select_wifi_sp([], user, model) is None
        assert select_wifi_sp([(1, NO_BID), (2, NoBid("x"))], user, model) is None

    def test_identical_offers_tie_to_lowest_id(self):
        user = UserProfile(delta=1.0, theta=2.0, b_min=1.0)
        bid = Bid(rate=2.0, price=0.1, bandwidth=1.0, guarantee=0.5)
        assert select_wifi_sp([(4, bid), (2, bid)], user, DecisionModel.eut()) == 2

    def test_higher_single_acceptance_utility_wins(self):
        user = UserProfile(delta=3.0, theta=2.0, b_min=1.0)
        good = Bid(rate=4.0, price=0.2, bandwidth=1.0, guarantee=0.9)
        meh = Bid(rate=4.0, price=1.5, bandwidth=1.0, guarantee=0.6)
        assert select_wifi_sp([(1, meh), (2, good)], user, DecisionModel.eut()) == 2

    def test_perception_changes_ranking(self):
        # a shallow-guarantee offer gains under weighting, a deep one loses
        user = UserProfile(delta=3.0, theta=2.0, b_min=1.0)
        deep = Bid(rate=3.0, price=1.0, bandwidth=1.0, guarantee=0.85)
        shallow = Bid(rate=12.0, price=1.0, bandwidth=1.0, guarantee=0.2)
        offers = [(1, deep), (2, shallow)]
        assert select_wifi_sp(offers, user, DecisionModel.eut()) == 1
        assert select_wifi_sp(offers, user, DecisionModel.pt(0.3)) == 2


def test_floor_tolerance_constant_is_tight():
    # the slack exists for one-ulp rounding, not material shortfalls
    assert FLOOR_REL_TOL <= 1e-8
