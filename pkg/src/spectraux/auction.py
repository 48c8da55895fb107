"""Greedy strategy-proof spectrum auction with critical-operator pricing.

Each round the operator with the largest sum of bids over its still-eligible
stations wins those stations. It pays the largest bid sum that any single
other operator has on eligible stations conflicting with the winner. The
winner's stations and their conflicting neighbours then leave the residual
graph, and the loop repeats until no station is eligible.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from . import kernels
from .graph import ConflictGraph, ResidualView, neighborhood_of_operator
from .model import (AuctionResult, BidVector, OperatorId, RoundRecord, ShapeError,
                    ValuationVector, check_bid_profile, settle)


def critical_operator(view: ResidualView, bids: Sequence[BidVector],
                      i: OperatorId) -> tuple[Optional[OperatorId], int]:
    """Return ``(C(i), price)`` for operator ``i`` on the residual graph.

    Ties go to the lowest operator id; ``(None, 0)`` when nothing conflicts.
    """
    base = view.base
    per_operator: dict[int, int] = {}
    for u in neighborhood_of_operator(view, i):
        k = int(base.owners[u])
        lo, _ = base.operator_ranges[k]
        per_operator[k] = per_operator.get(k, 0) + bids[k].bids[u - lo]
    if not per_operator:
        return None, 0
    best = min(per_operator, key=lambda k: (-per_operator[k], k))
    return best, per_operator[best]


def _station_counts(graph: ConflictGraph) -> list[int]:
    return [hi - lo for lo, hi in graph.operator_ranges]


def flatten_bids(graph: ConflictGraph, bids: Sequence[BidVector]) -> np.ndarray:
    bids = check_bid_profile(bids, _station_counts(graph))
    flat = [b for vec in bids for b in vec.bids]
    return np.array(flat, dtype=np.int64) if flat else np.zeros(0, dtype=np.int64)


def run_auction(graph: ConflictGraph, bids: Sequence[BidVector], backend=None) -> AuctionResult:
    """Run the greedy auction; utilities are left unset (see :func:`settle_utilities`)."""
    flat = flatten_bids(graph, bids)
    raw = kernels.greedy_rounds(graph.owners, graph.indptr, graph.indices, flat,
                                graph.n_operators, backend=backend)
    ranges = graph.operator_ranges
    allocation = [[0] * (hi - lo) for lo, hi in ranges]
    payments = [0] * graph.n_operators
    rounds = []
    for r, (winner, score, critical, price, stations) in enumerate(raw):
        lo = ranges[winner][0]
        for s in stations:
            allocation[winner][s - lo] = 1
        payments[winner] = price
        rounds.append(RoundRecord(r, winner, score, tuple(stations),
                                  None if critical < 0 else critical, price))
    return AuctionResult(tuple(map(tuple, allocation)), tuple(payments), tuple(rounds))


def settle_utilities(result: AuctionResult, truths: Sequence[ValuationVector]) -> AuctionResult:
    """Fill in utilities: true value of the stations won minus the payment."""
    if len(truths) != len(result.allocation):
        raise ShapeError(f"expected {len(result.allocation)} valuation vectors, got {len(truths)}")
    utilities = settle(result.allocation, result.payments, truths)
    return AuctionResult(result.allocation, result.payments, result.rounds, utilities)
