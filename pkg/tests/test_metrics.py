import csv
import io
from fractions import Fraction

from spectraux.auction import run_auction
from spectraux.graph import ConflictGraph
from spectraux.metrics import (CSV_HEADER, allocation_efficiency, compare, compare_instance, rows_to_csv,
                               social_welfare, summarize, welfare_ratio)
from spectraux.model import BidVector
from spectraux.scenario import generate
from spectraux.vcg import vcg_auction


def test_fixture_metrics(fixture_graph, fixture_bids):
    res = run_auction(fixture_graph, fixture_bids)
    assert allocation_efficiency(res.allocation) == 4
    assert social_welfare(res.allocation, fixture_bids) == 30
    opt = vcg_auction(fixture_graph, fixture_bids).optimal_welfare
    assert opt == 40
    assert welfare_ratio(30, opt) == Fraction(3, 4)


def test_edgeless_graph_ratio_is_one():
    g = ConflictGraph.from_edges([0, 1, 1], [])
    bids = [BidVector(0, (2,)), BidVector(1, (3, 4))]
    greedy = social_welfare(run_auction(g, bids).allocation, bids)
    assert welfare_ratio(greedy, vcg_auction(g, bids).optimal_welfare) == 1


def test_empty_allocation():
    assert allocation_efficiency(((0, 0), (0,))) == 0
    assert social_welfare(((0, 0), (0,)), [BidVector(0, (5, 5)), BidVector(1, (5,))]) == 0
    assert welfare_ratio(0, 0) == 1


def test_compare_rows_and_csv():
    items = [(k, generate(3, 3, 1000, 300, 100, k)) for k in range(5)]
    rows = compare(items, workers=1)
    assert [(r.instance_id, r.mechanism) for r in rows] == [(k, m) for k in range(5) for m in ("greedy", "vcg")]
    assert all(r.ratio <= 1 for r in rows)
    text = rows_to_csv(rows)
    table = list(csv.reader(io.StringIO(text)))
    assert table[0] == CSV_HEADER
    assert len(table) == 1 + 10 + 2
    assert [t[0] for t in table[-2:]] == ["mean", "mean"]
    assert all(t[CSV_HEADER.index("runtime_us")] == "" for t in table[1:])
    s = summarize(rows)
    assert s.instances == 5 and s.min_ratio <= s.mean_ratio <= 1


def test_timing_fills_runtime_column():
    rows = compare_instance((0, generate(2, 2, 1000, 300, 10, 0)))
    cells = rows[0].cells(timing=True)
    assert cells[CSV_HEADER.index("runtime_us")].isdigit()


def test_vcg_skipped_above_cap():
    rows = compare_instance((0, generate(2, 4, 1000, 300, 10, 0)), cap=5)
    assert [r.mechanism for r in rows] == ["greedy", "vcg-skipped"]
    assert rows[0].ratio is None
    text = rows_to_csv(rows)
    assert "vcg-skipped" in text
    assert sum(line.startswith("mean") for line in text.splitlines()) == 1


def test_greedy_search_nodes_counts_rounds(fixture_scenario):
    rows = compare_instance((0, fixture_scenario))
    assert rows[0].search_nodes == 2
