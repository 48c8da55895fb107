"""Evaluation metrics and the greedy-versus-VCG comparison table."""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Iterable, Optional, Sequence

from ._pool import pmap
from .auction import run_auction
from .graph import build_conflict_graph
from .model import BidVector, Scenario
from .vcg import InstanceTooLarge, vcg_auction

CSV_HEADER = ["instance_id", "seed", "n", "m", "mechanism", "welfare", "efficiency",
              "ratio", "runtime_us", "search_nodes"]


def allocation_efficiency(allocation: Sequence[Sequence[int]]) -> int:
    """Number of stations that receive the channel."""
    return sum(sum(x) for x in allocation)


def social_welfare(allocation: Sequence[Sequence[int]], bids: Sequence[BidVector]) -> int:
    if len(allocation) != len(bids):
        raise ValueError("allocation and bids cover different operator sets")
    total = 0
    for x, b in zip(allocation, bids):
        if len(x) != len(b):
            raise ValueError(f"operator {b.owner}: allocation length {len(x)} != {len(b)}")
        total += sum(v for bit, v in zip(x, b.bids) if bit)
    return total


def welfare_ratio(greedy: int, optimal: int) -> Fraction:
    """Greedy over optimal welfare; 1 when both are zero."""
    if optimal == 0:
        return Fraction(1) if greedy == 0 else Fraction(greedy, 1)
    return Fraction(greedy, optimal)


@dataclass(frozen=True)
class Row:
    instance_id: int
    seed: int
    n: int
    m: int
    mechanism: str
    welfare: Optional[int]
    efficiency: Optional[int]
    ratio: Optional[Fraction]
    runtime_us: Optional[int]
    search_nodes: Optional[int]

    def cells(self, timing: bool) -> list[str]:
        def s(v):
            return "" if v is None else str(v)
        return [str(self.instance_id), str(self.seed), str(self.n), str(self.m), self.mechanism,
                s(self.welfare), s(self.efficiency),
                "" if self.ratio is None else f"{float(self.ratio):.6f}",
                s(self.runtime_us) if timing else "", s(self.search_nodes)]


def compare_instance(item: tuple[int, Scenario], mechanisms: Sequence[str] = ("greedy", "vcg"),
                     cap: int | None = None) -> list[Row]:
    """Both mechanisms on one truthful instance.

    The greedy row's ``search_nodes`` holds its number of auction rounds.
    """
    instance_id, sc = item
    bids = sc.truthful_bids()
    graph = build_conflict_graph(sc)
    base = (instance_id, sc.seed, sc.n_operators, sc.n_stations)
    g_row = v_row = None
    if "greedy" in mechanisms:
        t0 = time.perf_counter_ns()
        res = run_auction(graph, bids)
        dt = (time.perf_counter_ns() - t0) // 1000
        g_row = Row(*base, "greedy", social_welfare(res.allocation, bids),
                    allocation_efficiency(res.allocation), None, dt, len(res.rounds))
    if "vcg" in mechanisms:
        t0 = time.perf_counter_ns()
        try:
            vres = vcg_auction(graph, bids, cap=cap)
        except InstanceTooLarge:
            v_row = Row(*base, "vcg-skipped", None, None, None, None, None)
        else:
            dt = (time.perf_counter_ns() - t0) // 1000
            v_row = Row(*base, "vcg", vres.optimal_welfare, allocation_efficiency(vres.allocation),
                        Fraction(1), dt, vres.explored_count)
    if g_row is not None and v_row is not None and v_row.welfare is not None:
        g_row = Row(*base, "greedy", g_row.welfare, g_row.efficiency,
                    welfare_ratio(g_row.welfare, v_row.welfare), g_row.runtime_us, g_row.search_nodes)
    return [r for r in (g_row, v_row) if r is not None]


def compare(scenarios: Iterable[tuple[int, Scenario]], mechanisms: Sequence[str] = ("greedy", "vcg"),
            cap: int | None = None, workers: int | None = None) -> list[Row]:
    """Rows for every ``(instance_id, scenario)``, ordered by instance then mechanism."""
    fn = partial(compare_instance, mechanisms=tuple(mechanisms), cap=cap)
    return [row for rows in pmap(fn, list(scenarios), workers) for row in rows]


@dataclass(frozen=True)
class Summary:
    instances: int
    mean_ratio: Optional[Fraction]
    min_ratio: Optional[Fraction]
    mean_efficiency: dict
    mean_welfare: dict


def summarize(rows: Sequence[Row]) -> Summary:
    ratios = [r.ratio for r in rows if r.mechanism == "greedy" and r.ratio is not None]
    eff: dict = {}
    wel: dict = {}
    for mech in ("greedy", "vcg"):
        sel = [r for r in rows if r.mechanism == mech]
        if sel:
            eff[mech] = Fraction(sum(r.efficiency for r in sel), len(sel))
            wel[mech] = Fraction(sum(r.welfare for r in sel), len(sel))
    return Summary(
        len({r.instance_id for r in rows}),
        Fraction(sum(ratios), len(ratios)) if ratios else None,
        min(ratios) if ratios else None,
        eff, wel,
    )


def _fmt(x: Optional[Fraction]) -> str:
    return "" if x is None else f"{float(x):.6f}"


def rows_to_csv(rows: Sequence[Row], timing: bool = False, summary: bool = True) -> str:
    """CSV text. With ``summary`` a ``mean`` row per mechanism is appended."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.cells(timing))
    if summary and rows:
        s = summarize(rows)
        for mech in ("greedy", "vcg"):
            if mech in s.mean_welfare:
                ratio = s.mean_ratio if mech == "greedy" else Fraction(1) if s.mean_ratio is not None else None
                w.writerow(["mean", "", "", "", mech, _fmt(s.mean_welfare[mech]),
                            _fmt(s.mean_efficiency[mech]), _fmt(ratio), "", ""])
    return buf.getvalue()
