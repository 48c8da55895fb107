"""Random instance generation and JSON (de)serialization.

Randomness comes from SplitMix64 used as a counter-based generator: draw
``k`` (0-based) of a stream seeded with ``s`` is ``mix64(s + (k + 1) * GAMMA)``
modulo 2^64. The finaliser ``mix64`` is::

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

A uniform float in [0, 1) is ``(draw >> 11) * 2**-53``. A uniform integer in
``[lo, hi]`` uses rejection: with ``r = hi - lo + 1`` draws at or above
``2**64 - 2**64 % r`` are discarded, otherwise the result is ``lo + draw % r``.

``generate`` consumes the stream in a fixed order: x then y for every station
in global-id order, then one valuation per station in global-id order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .model import (AuctionResult, BaseStation, BidVector, RoundRecord, Scenario,
                    ValuationVector, VcgResult)

SCHEMA = 1
MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.counter = 0

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.seed + self.counter * GAMMA)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]`` inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        r = hi - lo + 1
        limit = (1 << 64) - (1 << 64) % r
        while True:
            x = self.next_u64()
            if x < limit:
                return lo + x % r

    def choice(self, seq: Sequence):
        return seq[self.randint(0, len(seq) - 1)]


@dataclass(frozen=True)
class GenParams:
    """Everything ``generate`` needs apart from the seed."""

    n_operators: int = 3
    stations: int | tuple[int, ...] = 3
    side: float = 1000.0
    radius: float = 300.0
    bid_max: int = 100


def station_counts(n_operators: int, stations: int | Sequence[int]) -> tuple[int, ...]:
    if isinstance(stations, int):
        return (stations,) * n_operators
    stations = tuple(int(s) for s in stations)
    if len(stations) != n_operators:
        raise ValueError(f"{len(stations)} station counts given for {n_operators} operators")
    return stations


def split_stations(total: int, n_operators: int) -> tuple[int, ...]:
    """Spread ``total`` stations over operators, lower ids taking the remainder."""
    base, extra = divmod(total, n_operators)
    return tuple(base + (i < extra) for i in range(n_operators))


def generate(n_operators: int, stations_per_operator: int | Sequence[int], region_side: float,
             radius_d: float, bid_max: int, seed: int) -> Scenario:
    """Uniform station placement over the square and i.i.d. valuations in ``[1, bid_max]``.

    With ``bid_max == 0`` every valuation is 0.
    """
    if n_operators < 1:
        raise ValueError("at least one operator is required")
    counts = station_counts(n_operators, stations_per_operator)
    if any(c < 1 for c in counts):
        raise ValueError("every operator needs at least one station")
    if bid_max < 0 or radius_d < 0 or region_side < 0:
        raise ValueError("bid_max, radius and side must be non-negative")
    if seed < 0 or seed > MASK64:
        raise ValueError("seed must be an unsigned 64-bit integer")

    rng = SplitMix64(seed)
    side = float(region_side)
    stations = []
    for owner, c in enumerate(counts):
        for j in range(c):
            x = rng.uniform() * side
            y = rng.uniform() * side
            stations.append(BaseStation(owner, j, x, y))
    truths = []
    for owner, c in enumerate(counts):
        vals = tuple(rng.randint(1, bid_max) if bid_max else 0 for _ in range(c))
        truths.append(ValuationVector(owner, vals))
    return Scenario(counts, tuple(stations), tuple(truths), float(radius_d), side, seed)


def generate_from(params: GenParams, seed: int) -> Scenario:
    return generate(params.n_operators, params.stations, params.side, params.radius,
                    params.bid_max, seed)


# --- serialization -----------------------------------------------------------

class FormatError(ValueError):
    """A file that cannot be parsed into the expected object."""

    def __init__(self, source: str, message: str, line: int | None = None):
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line


def scenario_to_dict(sc: Scenario) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "kind": "scenario",
        "operators": list(sc.station_counts),
        "stations": [{"owner": s.owner, "x": s.x, "y": s.y} for s in sc.stations],
        "truths": [list(t.values) for t in sc.truths],
        "d": sc.radius,
        "side": sc.side,
        "seed": sc.seed,
    }


def bids_to_dict(bids: Sequence[BidVector]) -> dict[str, Any]:
    return {"schema": SCHEMA, "kind": "bids", "bids": [list(b.bids) for b in bids]}


def result_to_dict(res: AuctionResult) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "kind": "result",
        "mechanism": "greedy",
        "allocation": [list(x) for x in res.allocation],
        "payments": list(res.payments),
        "utilities": None if res.utilities is None else list(res.utilities),
        "rounds": [
            {
                "round": r.round_index,
                "winner": r.winner,
                "score": r.winner_residual_score,
                "stations": list(r.allocated_stations),
                "critical": r.critical_operator,
                "price": r.price,
            }
            for r in res.rounds
        ],
    }


def vcg_to_dict(res: VcgResult) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "kind": "vcg_result",
        "mechanism": "vcg",
        "allocation": [list(x) for x in res.allocation],
        "payments": list(res.payments),
        "utilities": None if res.utilities is None else list(res.utilities),
        "optimal_welfare": res.optimal_welfare,
        "explored_count": res.explored_count,
    }


def to_dict(obj) -> dict[str, Any]:
    if isinstance(obj, Scenario):
        return scenario_to_dict(obj)
    if isinstance(obj, AuctionResult):
        return result_to_dict(obj)
    if isinstance(obj, VcgResult):
        return vcg_to_dict(obj)
    if isinstance(obj, (tuple, list)) and all(isinstance(b, BidVector) for b in obj):
        return bids_to_dict(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, extra: dict[str, Any] | None = None) -> str:
    """Canonical text form: fixed key order, two-space indent, trailing newline."""
    d = to_dict(obj)
    if extra:
        d.update(extra)
    return json.dumps(d, indent=2) + "\n"


def save(obj, path: str | Path, extra: dict[str, Any] | None = None) -> None:
    Path(path).write_text(dumps(obj, extra))


class _Reader:
    def __init__(self, d: dict, source: str):
        self.d = d
        self.source = source

    def fail(self, field: str, msg: str):
        raise FormatError(self.source, f"field {field!r}: {msg}")

    def get(self, field: str, d: dict | None = None):
        d = self.d if d is None else d
        if not isinstance(d, dict) or field not in d:
            self.fail(field, "missing")
        return d[field]

    def int_(self, field: str, v=None, allow_none=False, nonneg=False):
        v = self.get(field) if v is None and not allow_none else v
        if v is None and allow_none:
            return None
        if isinstance(v, bool) or not isinstance(v, int):
            self.fail(field, f"expected integer, got {v!r}")
        if nonneg and v < 0:
            self.fail(field, f"expected non-negative integer, got {v}")
        return v

    def num(self, field: str, v=None):
        v = self.get(field) if v is None else v
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.fail(field, f"expected number, got {v!r}")
        return float(v)

    def int_list(self, field: str, v, nonneg=False):
        if not isinstance(v, list):
            self.fail(field, f"expected list, got {v!r}")
        return [self.int_(field, x, nonneg=nonneg) for x in v]

    def matrix(self, field: str, nonneg=False):
        v = self.get(field)
        if not isinstance(v, list):
            self.fail(field, f"expected list of lists, got {v!r}")
        return [self.int_list(f"{field}[{i}]", row, nonneg=nonneg) for i, row in enumerate(v)]


def _parse(text: str, source: str) -> dict:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(source, f"invalid JSON ({exc.msg}, column {exc.colno})", exc.lineno) from None
    if not isinstance(d, dict):
        raise FormatError(source, "top level must be an object")
    if d.get("schema") != SCHEMA:
        raise FormatError(source, f"unsupported schema {d.get('schema')!r}, expected {SCHEMA}")
    return d


def _scenario_from(r: _Reader) -> Scenario:
    counts = r.int_list("operators", r.get("operators"), nonneg=True)
    raw_stations = r.get("stations")
    if not isinstance(raw_stations, list):
        r.fail("stations", "expected list")
    stations = []
    local = [0] * len(counts)
    for k, s in enumerate(raw_stations):
        owner = r.int_(f"stations[{k}].owner", r.get("owner", s), nonneg=True)
        if owner >= len(counts):
            r.fail(f"stations[{k}].owner", f"operator {owner} not declared")
        x = r.num(f"stations[{k}].x", r.get("x", s))
        y = r.num(f"stations[{k}].y", r.get("y", s))
        stations.append(BaseStation(owner, local[owner], x, y))
        local[owner] += 1
    truths = r.matrix("truths", nonneg=True)
    try:
        return Scenario(tuple(counts), tuple(stations),
                        tuple(ValuationVector(i, tuple(t)) for i, t in enumerate(truths)),
                        r.num("d"), r.num("side"), r.int_("seed", nonneg=True))
    except ValueError as exc:
        raise FormatError(r.source, str(exc)) from None


def _rounds_from(r: _Reader) -> tuple[RoundRecord, ...]:
    raw = r.get("rounds")
    if not isinstance(raw, list):
        r.fail("rounds", "expected list")
    out = []
    for k, rd in enumerate(raw):
        f = f"rounds[{k}]"
        out.append(RoundRecord(
            r.int_(f + ".round", r.get("round", rd)),
            r.int_(f + ".winner", r.get("winner", rd)),
            r.int_(f + ".score", r.get("score", rd)),
            tuple(r.int_list(f + ".stations", r.get("stations", rd))),
            r.int_(f + ".critical", r.get("critical", rd), allow_none=True),
            r.int_(f + ".price", r.get("price", rd)),
        ))
    return tuple(out)


def loads(text: str, source: str = "<string>"):
    """Parse any serialized object; the ``kind`` field selects the type."""
    d = _parse(text, source)
    r = _Reader(d, source)
    kind = r.get("kind")
    if kind == "scenario":
        return _scenario_from(r)
    if kind == "bids":
        try:
            return tuple(BidVector(i, tuple(b)) for i, b in enumerate(r.matrix("bids", nonneg=True)))
        except ValueError as exc:
            raise FormatError(source, str(exc)) from None
    if kind in ("result", "vcg_result"):
        alloc = tuple(tuple(x) for x in r.matrix("allocation"))
        for i, row in enumerate(alloc):
            if any(b not in (0, 1) for b in row):
                r.fail(f"allocation[{i}]", "entries must be 0 or 1")
        payments = tuple(r.int_list("payments", r.get("payments")))
        utils = r.get("utilities")
        utilities = None if utils is None else tuple(r.int_list("utilities", utils))
        if kind == "result":
            return AuctionResult(alloc, payments, _rounds_from(r), utilities)
        return VcgResult(alloc, payments, r.int_("optimal_welfare"),
                         r.int_("explored_count", nonneg=True), utilities)
    r.fail("kind", f"unknown kind {kind!r}")


def load(path: str | Path, expect: type | None = None):
    path = Path(path)
    obj = loads(path.read_text(), str(path))
    if expect is not None and not isinstance(obj, expect):
        raise FormatError(str(path), f"expected a {expect.__name__} file")
    return obj


def load_scenario(path: str | Path) -> Scenario:
    return load(path, Scenario)


def load_bids(path: str | Path) -> tuple[BidVector, ...]:
    return load(path, tuple)
