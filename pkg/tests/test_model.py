import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectraux.model import (BaseStation, BidVector, Scenario, ShapeError, ValuationVector,
                             check_bid_profile, operator_bid_sum, operator_true_sum, settle)


def test_bid_sum_full_vector():
    assert operator_bid_sum(BidVector(0, (10, 8, 7)), {0, 1, 2}) == 25
    assert operator_bid_sum(BidVector(0, (10, 8, 7))) == 25


def test_bid_sum_empty_and_residual():
    assert operator_bid_sum(BidVector(1, (9, 8, 5)), set()) == 0
    assert operator_bid_sum(BidVector(1, (9, 8, 5)), {2}) == 5


def test_true_sum():
    v = ValuationVector(1, (9, 8, 5))
    assert operator_true_sum(v) == 22
    assert operator_true_sum(ValuationVector(0, (0, 0))) == 0
    assert operator_true_sum(v, {2}) == 5


@given(st.lists(st.integers(0, 1000), min_size=1, max_size=8), st.data())
def test_bid_sum_monotone_in_active(bids, data):
    n = len(bids)
    small = data.draw(st.sets(st.integers(0, n - 1)))
    big = small | data.draw(st.sets(st.integers(0, n - 1)))
    vec = BidVector(0, bids)
    assert operator_bid_sum(vec, big) >= operator_bid_sum(vec, small)


@pytest.mark.parametrize("bad", [(-1,), (1.5,), ("3",)])
def test_bid_vector_rejects_bad_entries(bad):
    with pytest.raises((ValueError, TypeError)):
        BidVector(0, bad)


def test_check_bid_profile_shapes():
    check_bid_profile([BidVector(0, (1, 2)), BidVector(1, (3,))], [2, 1])
    with pytest.raises(ShapeError):
        check_bid_profile([BidVector(0, (1,)), BidVector(1, (3,))], [2, 1])
    with pytest.raises(ShapeError):
        check_bid_profile([BidVector(0, (1, 2))], [2, 1])
    with pytest.raises(ShapeError):
        check_bid_profile([BidVector(1, (3,)), BidVector(0, (1, 2))], [2, 1])


def test_scenario_validation():
    st_ = (BaseStation(0, 0, 1.0, 1.0), BaseStation(1, 0, 2.0, 2.0))
    truths = (ValuationVector(0, (1,)), ValuationVector(1, (2,)))
    sc = Scenario((1, 1), st_, truths, 10.0, 5.0)
    assert sc.n_stations == 2 and sc.n_operators == 2
    with pytest.raises(ValueError):
        Scenario((1, 1), st_[::-1], truths, 10.0, 5.0)
    with pytest.raises(ValueError):
        Scenario((1, 1), (st_[0], BaseStation(1, 0, 9.0, 2.0)), truths, 10.0, 5.0)
    with pytest.raises(ShapeError):
        Scenario((1, 1), st_, truths[:1], 10.0, 5.0)
    with pytest.raises(ValueError):
        Scenario((), (), (), 1.0, 1.0)


def test_from_points_orders_by_owner():
    sc = Scenario.from_points([(0, 0, 0), (1, 0, 100), (0, 0, 300)], [(1, 2), (3,)], 150, 1000)
    assert [(s.owner, s.local_index, s.y) for s in sc.stations] == [(0, 0, 0.0), (0, 1, 300.0), (1, 0, 100.0)]


def test_settle_partial_allocation():
    truths = [ValuationVector(0, (10, 8, 7)), ValuationVector(1, (9, 8, 5)), ValuationVector(2, (10, 8, 3))]
    assert settle([(1, 1, 1), (0, 0, 1), (0, 0, 0)], [18, 3, 0], truths) == (7, 2, 0)
