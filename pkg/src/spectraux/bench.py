"""Scaling sweeps: greedy runtime against m, and VCG search-tree size against m."""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from . import kernels
from .auction import run_auction
from .graph import build_conflict_graph
from .scenario import generate, split_stations
from .vcg import InstanceTooLarge, vcg_auction

BENCH_HEADER = ["mechanism", "backend", "n", "m", "rep", "seed", "edges", "search_nodes", "runtime_us"]


def parse_sweep(text: str) -> list[int]:
    """``"start:stop:step"`` (inclusive stop) or a single integer."""
    parts = text.split(":")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise ValueError(f"bad sweep {text!r}; expected start:stop:step") from None
    if len(nums) == 1:
        return nums
    if len(nums) == 2:
        nums.append(1)
    if len(nums) != 3 or nums[2] <= 0 or nums[0] > nums[1] or nums[0] < 1:
        raise ValueError(f"bad sweep {text!r}; expected start:stop:step with 1 <= start <= stop, step > 0")
    return list(range(nums[0], nums[1] + 1, nums[2]))


@dataclass(frozen=True)
class BenchRow:
    mechanism: str
    backend: str
    n: int
    m: int
    rep: int
    seed: int
    edges: int
    search_nodes: int
    runtime_us: Optional[int]

    def cells(self, timing: bool) -> list[str]:
        rt = "" if not timing or self.runtime_us is None else str(self.runtime_us)
        return [self.mechanism, self.backend, str(self.n), str(self.m), str(self.rep), str(self.seed),
                str(self.edges), str(self.search_nodes), rt]


def _instance(n, m, side, radius, bid_max, seed):
    sc = generate(n, split_stations(m, n), side, radius, bid_max, seed)
    return sc, build_conflict_graph(sc)


def instance_seed(base: int, m: int, rep: int) -> int:
    return base + 1_000_003 * m + rep


def greedy_sweep(n: int, ms: Sequence[int], seed: int, side: float = 1000.0, radius: float = 300.0,
                 bid_max: int = 100, reps: int = 1, backend: str | None = None) -> list[BenchRow]:
    """Time the greedy auction for each m; graph construction is not timed."""
    mod = kernels.load_backend(backend) if backend else None
    name = backend or kernels.BACKEND
    rows = []
    for m in ms:
        for rep in range(reps):
            s = instance_seed(seed, m, rep)
            sc, g = _instance(n, max(m, n), side, radius, bid_max, s)
            bids = sc.truthful_bids()
            t0 = time.perf_counter_ns()
            res = run_auction(g, bids, backend=mod)
            dt = (time.perf_counter_ns() - t0) // 1000
            rows.append(BenchRow("greedy", name, n, sc.n_stations, rep, s, g.n_edges, len(res.rounds), dt))
    return rows


def vcg_sweep(n: int, ms: Sequence[int], seed: int, side: float = 1000.0, radius: float = 300.0,
              bid_max: int = 100, reps: int = 30, cap: int | None = None,
              backend: str | None = None) -> list[BenchRow]:
    """Exact VCG search size per m. Raises :class:`InstanceTooLarge` above ``cap``."""
    mod = kernels.load_backend(backend) if backend else None
    name = backend or kernels.BACKEND
    rows = []
    for m in ms:
        for rep in range(reps):
            s = instance_seed(seed, m, rep)
            sc, g = _instance(n, max(m, n), side, radius, bid_max, s)
            t0 = time.perf_counter_ns()
            res = vcg_auction(g, sc.truthful_bids(), cap=cap, backend=mod)
            dt = (time.perf_counter_ns() - t0) // 1000
            rows.append(BenchRow("vcg", name, n, sc.n_stations, rep, s, g.n_edges, res.explored_count, dt))
    return rows


def geometric_means(rows: Sequence[BenchRow], mechanism: str = "vcg") -> list[tuple[int, float]]:
    """Geometric mean of ``search_nodes`` per m, ascending in m."""
    by_m: dict[int, list[int]] = {}
    for r in rows:
        if r.mechanism == mechanism:
            by_m.setdefault(r.m, []).append(r.search_nodes)
    return [(m, math.exp(sum(math.log(max(v, 1)) for v in vals) / len(vals)))
            for m, vals in sorted(by_m.items())]


def superpolynomial_growth(series: Sequence[tuple[int, float]]) -> tuple[bool, str]:
    """Growth check on ``(m, nodes)`` points.

    Passes when nodes never decrease along the sweep and the log-log slope
    over the upper half of the sweep exceeds the slope over the lower half,
    which no fixed-degree polynomial does.
    """
    if len(series) < 3:
        return False, "need at least three sweep points"
    ms = [m for m, _ in series]
    logs = [math.log(v) for _, v in series]
    if any(b < a for a, b in zip(logs, logs[1:])):
        return False, "node count decreases along the sweep"
    mid = len(series) // 2

    def slope(i, j):
        return (logs[j] - logs[i]) / (math.log(ms[j]) - math.log(ms[i]))

    lo, hi = slope(0, mid), slope(mid, len(series) - 1)
    ok = hi > lo + 1e-9
    return ok, f"log-log slope {lo:.3f} over m={ms[0]}..{ms[mid]}, {hi:.3f} over m={ms[mid]}..{ms[-1]}"


def rows_to_csv(rows: Sequence[BenchRow], timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    for r in rows:
        w.writerow(r.cells(timing))
    return buf.getvalue()

