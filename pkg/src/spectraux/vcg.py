"""Exact VCG baseline: maximum-weight independent set plus Clarke-pivot payments.

Winner determination is exponential in the number of stations, so every
entry point refuses instances above ``cap`` stations instead of hanging.
"""
from __future__ import annotations

from typing import Sequence

from . import kernels
from .auction import flatten_bids
from .graph import ConflictGraph
from .model import BidVector, VcgResult

DEFAULT_CAP = 25
EXHAUSTIVE_LIMIT = 20


class InstanceTooLarge(ValueError):
    def __init__(self, m: int, cap: int):
        super().__init__(f"{m} stations exceeds the exact-solver cap of {cap}")
        self.m = m
        self.cap = cap


def _ids(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _check_cap(graph: ConflictGraph, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if graph.n_stations > cap:
        raise InstanceTooLarge(graph.n_stations, cap)


def mwis_search(graph: ConflictGraph, weights: Sequence[int], exclude: Sequence[int] = (),
                cap: int | None = None, backend=None) -> tuple[tuple[int, ...], int, int]:
    """Branch-and-bound MWIS over the stations not in ``exclude``.

    Returns ``(station_ids, weight, nodes_explored)``.
    """
    _check_cap(graph, cap)
    m = graph.n_stations
    if len(weights) != m:
        raise ValueError(f"expected {m} weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    alive = (1 << m) - 1
    for s in exclude:
        alive &= ~(1 << s)
    mask, weight, nodes = kernels.mwis(graph.adjacency_masks(), [int(w) for w in weights],
                                       alive, backend=backend)
    return _ids(mask), weight, nodes


def max_weight_independent_set(graph: ConflictGraph, weights: Sequence[int],
                               cap: int | None = None) -> tuple[tuple[int, ...], int]:
    """Maximum-weight independent set and its weight.

    Among optimal sets, the one that includes the lowest station id at the
    first station where two optima differ is returned.
    """
    ids, weight, _ = mwis_search(graph, weights, cap=cap)
    return ids, weight


def exhaustive_mwis(graph: ConflictGraph, weights: Sequence[int],
                    exclude: Sequence[int] = ()) -> tuple[tuple[int, ...], int]:
    """Enumerate all 2^m station subsets. Test oracle; same tie rule as the search."""
    m = graph.n_stations
    if m > EXHAUSTIVE_LIMIT:
        raise InstanceTooLarge(m, EXHAUSTIVE_LIMIT)
    adj = graph.adjacency_masks()
    banned = 0
    for s in exclude:
        banned |= 1 << s
    best_mask, best_w = 0, 0
    for mask in range(1 << m):
        if mask & banned:
            continue
        ok = True
        total = 0
        for v in range(m):
            if mask >> v & 1:
                if adj[v] & mask:
                    ok = False
                    break
                total += weights[v]
        if not ok:
            continue
        if total > best_w:
            best_mask, best_w = mask, total
        elif total == best_w:
            diff = mask ^ best_mask
            if diff and mask & diff & -diff:
                best_mask = mask
    return _ids(best_mask), best_w


def vcg_auction(graph: ConflictGraph, bids: Sequence[BidVector], cap: int | None = None,
                backend=None) -> VcgResult:
    """Welfare-optimal allocation; operator ``i`` pays ``W(-i) - (W* - w_i)``."""
    _check_cap(graph, cap)
    weights = [int(b) for b in flatten_bids(graph, bids)]
    ids, welfare, nodes = mwis_search(graph, weights, cap=cap, backend=backend)
    chosen = set(ids)
    allocation = []
    payments = []
    for i in range(graph.n_operators):
        own = graph.stations_of(i)
        allocation.append(tuple(int(s in chosen) for s in own))
        w_i = sum(weights[s] for s in own if s in chosen)
        _, without_i, n_i = mwis_search(graph, weights, exclude=own, cap=cap, backend=backend)
        nodes += n_i
        payments.append(without_i - (welfare - w_i))
    return VcgResult(tuple(allocation), tuple(payments), welfare, nodes)
