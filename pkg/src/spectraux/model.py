"""Domain types shared by every module.

Currency is always an integer number of units. Utility comparisons in the
strategy-proofness checks are exact, so nothing in this package converts
money to floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

OperatorId = int
StationId = int


class ShapeError(ValueError):
    """Bid or valuation vectors that do not match the scenario's station counts."""


def _as_amounts(values: Iterable[int], what: str) -> tuple[int, ...]:
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int):
            # numpy integer scalars are accepted, floats are not
            if hasattr(v, "__index__"):
                v = v.__index__()
            else:
                raise TypeError(f"{what} entries must be integers, got {v!r}")
        if v < 0:
            raise ValueError(f"{what} entries must be non-negative, got {v}")
        out.append(int(v))
    return tuple(out)


@dataclass(frozen=True)
class BaseStation:
    owner: OperatorId
    local_index: int
    x: float
    y: float

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class BidVector:
    """Declared per-station bids of one operator."""

    owner: OperatorId
    bids: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bids", _as_amounts(self.bids, "bid"))

    def __len__(self) -> int:
        return len(self.bids)

    @property
    def total(self) -> int:
        return sum(self.bids)


@dataclass(frozen=True)
class ValuationVector:
    """Private per-station true valuations of one operator."""

    owner: OperatorId
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", _as_amounts(self.values, "valuation"))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def total(self) -> int:
        return sum(self.values)

    def as_bids(self) -> BidVector:
        return BidVector(self.owner, self.values)


BidProfile = tuple[BidVector, ...]


def operator_bid_sum(bids: BidVector, active: Iterable[int] | None = None) -> int:
    """Sum of ``bids`` over the local indices in ``active`` (all when None)."""
    if active is None:
        return sum(bids.bids)
    return sum(bids.bids[j] for j in set(active))


def operator_true_sum(truths: ValuationVector, active: Iterable[int] | None = None) -> int:
    if active is None:
        return sum(truths.values)
    return sum(truths.values[j] for j in set(active))


@dataclass(frozen=True)
class Scenario:
    """One experiment: station placement, true valuations and interference radius.

    ``stations`` is kept in canonical order, sorted by (owner, local_index),
    so that the position of a station in the tuple is its global station id.
    """

    station_counts: tuple[int, ...]
    stations: tuple[BaseStation, ...]
    truths: tuple[ValuationVector, ...]
    radius: float
    side: float
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "station_counts", tuple(int(c) for c in self.station_counts))
        object.__setattr__(self, "stations", tuple(self.stations))
        object.__setattr__(self, "truths", tuple(self.truths))
        n = len(self.station_counts)
        if n == 0:
            raise ValueError("a scenario needs at least one operator")
        if any(c < 0 for c in self.station_counts):
            raise ValueError("station counts must be non-negative")
        if self.radius < 0 or self.side < 0:
            raise ValueError("radius and side must be non-negative")
        expected = [(i, j) for i, c in enumerate(self.station_counts) for j in range(c)]
        got = [(s.owner, s.local_index) for s in self.stations]
        if got != expected:
            raise ValueError("stations must be ordered by (owner, local_index) and dense per operator")
        for s in self.stations:
            if not (0 <= s.x <= self.side and 0 <= s.y <= self.side):
                raise ValueError(f"station {s} lies outside [0, {self.side}]^2")
        if len(self.truths) != n:
            raise ShapeError(f"expected {n} valuation vectors, got {len(self.truths)}")
        for i, t in enumerate(self.truths):
            if t.owner != i or len(t) != self.station_counts[i]:
                raise ShapeError(f"valuation vector {i} does not match operator {i}")

    @property
    def n_operators(self) -> int:
        return len(self.station_counts)

    @property
    def n_stations(self) -> int:
        return len(self.stations)

    def truthful_bids(self) -> BidProfile:
        return tuple(t.as_bids() for t in self.truths)

    @classmethod
    def from_points(
        cls,
        points: Sequence[tuple[int, float, float]],
        truths: Sequence[Sequence[int]],
        radius: float,
        side: float,
        seed: int = 0,
    ) -> "Scenario":
        """Build a scenario from ``(owner, x, y)`` triples in any order.

        Local indices follow the order in which each owner's points appear.
        """
        n = len(truths)
        counts = [0] * n
        stations = []
        for owner, x, y in points:
            stations.append(BaseStation(owner, counts[owner], float(x), float(y)))
            counts[owner] += 1
        stations.sort(key=lambda s: (s.owner, s.local_index))
        vals = tuple(ValuationVector(i, tuple(v)) for i, v in enumerate(truths))
        return cls(tuple(counts), tuple(stations), vals, float(radius), float(side), seed)


def check_bid_profile(bids: Sequence[BidVector], station_counts: Sequence[int]) -> BidProfile:
    """Validate that ``bids`` has one vector per operator with matching lengths."""
    bids = tuple(bids)
    if len(bids) != len(station_counts):
        raise ShapeError(f"expected {len(station_counts)} bid vectors, got {len(bids)}")
    for i, (b, c) in enumerate(zip(bids, station_counts)):
        if b.owner != i:
            raise ShapeError(f"bid vector at position {i} belongs to operator {b.owner}")
        if len(b) != c:
            raise ShapeError(f"operator {i} has {c} stations but bid vector has length {len(b)}")
    return bids


@dataclass(frozen=True)
class RoundRecord:
    round_index: int
    winner: OperatorId
    winner_residual_score: int
    allocated_stations: tuple[StationId, ...]
    critical_operator: Optional[OperatorId]
    price: int


@dataclass(frozen=True)
class AuctionResult:
    """Outcome of the greedy auction.

    ``utilities`` stays None until the result is settled against true valuations.
    """

    allocation: tuple[tuple[int, ...], ...]
    payments: tuple[int, ...]
    rounds: tuple[RoundRecord, ...] = ()
    utilities: Optional[tuple[int, ...]] = None

    @property
    def winners(self) -> tuple[OperatorId, ...]:
        return tuple(r.winner for r in self.rounds)

    def allocated(self, i: OperatorId) -> bool:
        return any(self.allocation[i])


@dataclass(frozen=True)
class VcgResult:
    allocation: tuple[tuple[int, ...], ...]
    payments: tuple[int, ...]
    optimal_welfare: int
    explored_count: int = 0
    utilities: Optional[tuple[int, ...]] = field(default=None)


def settle(allocation: Sequence[Sequence[int]], payments: Sequence[int],
           truths: Sequence[ValuationVector]) -> tuple[int, ...]:
    """Per-operator utility: true value of allocated stations minus payment, zero for losers."""
    if len(allocation) != len(truths):
        raise ShapeError("allocation and valuations cover different operator sets")
    out = []
    for x, p, t in zip(allocation, payments, truths):
        if len(x) != len(t):
            raise ShapeError(f"operator {t.owner}: allocation length {len(x)} != {len(t)}")
        if any(x):
            out.append(operator_true_sum(t, (j for j, bit in enumerate(x) if bit)) - p)
        else:
            out.append(0)
    return tuple(out)
