import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A, A1, B, B1, B2, B3, C1, C2, C3, FIXTURE_EDGES
from spectraux.graph import (ConflictGraph, ResidualView, build_conflict_graph, neighborhood_of_operator,
                             read_edge_list, remove_closed_neighborhood, write_edge_list)
from spectraux.model import Scenario
from spectraux.scenario import generate


def test_single_station_has_no_edges():
    sc = Scenario.from_points([(0, 1, 1)], [(5,)], 100, 10)
    assert build_conflict_graph(sc).n_edges == 0


def test_distance_threshold_example():
    # operators 1, 2, 1 in the prose map to ids 0, 1, 0 here
    sc = Scenario.from_points([(0, 0, 0), (1, 0, 100), (0, 0, 300)], [(1, 1), (1,)], 150, 1000)
    g = build_conflict_graph(sc)
    # station ids after ordering: (0,0)->0, (0,300)->1, op1 (0,100)->2
    assert g.edges() == [(0, 2)]


def test_same_operator_never_conflicts():
    sc = Scenario.from_points([(0, 5, 5), (0, 5, 5)], [(1, 1)], 1e9, 10)
    assert build_conflict_graph(sc).n_edges == 0


def test_tie_at_radius_is_not_an_edge():
    sc = Scenario.from_points([(0, 0, 0), (1, 0, 150)], [(1,), (1,)], 150, 1000)
    assert build_conflict_graph(sc).n_edges == 0
    sc = Scenario.from_points([(0, 0, 0), (1, 0, 149.999)], [(1,), (1,)], 150, 1000)
    assert build_conflict_graph(sc).n_edges == 1


def test_fixture_file_realizes_fixture_edges(fixture_scenario):
    assert build_conflict_graph(fixture_scenario).edges() == sorted(FIXTURE_EDGES)


def test_neighborhood_full_graph(fixture_graph):
    view = fixture_graph.full_view()
    assert neighborhood_of_operator(view, A) == {B1, B2, C1, C2}


def test_neighborhood_isolated_operator():
    g = ConflictGraph.from_edges([0, 1, 2], [(0, 1)])
    assert neighborhood_of_operator(g.full_view(), 2) == set()


def test_residual_after_round_one(fixture_graph):
    view = remove_closed_neighborhood(fixture_graph.full_view(), A)
    assert view.alive == {B3, C3}
    assert neighborhood_of_operator(view, B) == {C3}


def test_remove_single_operator_graph_empties():
    g = ConflictGraph.from_edges([0, 0, 0], [])
    assert remove_closed_neighborhood(g.full_view(), 0).is_empty()


def test_remove_operator_without_alive_stations_is_noop(fixture_graph):
    view = ResidualView(fixture_graph, frozenset({B3, C3}))
    assert remove_closed_neighborhood(view, A) == view


def test_from_edges_filters_intra_operator_pairs():
    g = ConflictGraph.from_edges([0, 0, 1], [(0, 1), (1, 2)])
    assert g.edges() == [(1, 2)]


def test_edge_list_round_trip(tmp_path, fixture_graph):
    p = tmp_path / "g.txt"
    write_edge_list(fixture_graph, p)
    assert p.read_text().splitlines()[0] == f"{A1} {B1}"
    assert read_edge_list(p) == fixture_graph.edges()


def _brute_edges(sc):
    out = []
    for u, v in itertools.combinations(range(sc.n_stations), 2):
        a, b = sc.stations[u], sc.stations[v]
        if a.owner != b.owner and (a.x - b.x) ** 2 + (a.y - b.y) ** 2 < sc.radius ** 2:
            out.append((u, v))
    return out


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 5), per=st.integers(1, 6), radius=st.floats(0, 800), seed=st.integers(0, 2**32))
def test_graph_invariants(n, per, radius, seed):
    sc = generate(n, per, 1000.0, radius, 50, seed)
    g = build_conflict_graph(sc)
    m = sc.n_stations
    assert g.edges() == _brute_edges(sc)
    assert g.n_edges <= m * (m - 1) // 2
    for u in range(m):
        nb = set(g.neighbors(u).tolist())
        assert u not in nb
        assert all(g.owners[v] != g.owners[u] for v in nb)
        assert all(g.has_edge(v, u) for v in nb)
    assert build_conflict_graph(sc).edges() == g.edges()


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 5), per=st.integers(1, 5), seed=st.integers(0, 2**32), data=st.data())
def test_residual_operations(n, per, seed, data):
    g = build_conflict_graph(generate(n, per, 1000.0, 400.0, 50, seed))
    view = g.full_view()
    rounds = 0
    while not view.is_empty():
        i = data.draw(st.sampled_from([k for k in range(n) if view.alive_stations_of(k)]))
        nb = neighborhood_of_operator(view, i)
        assert all(g.owners[u] != i for u in nb)
        nxt = remove_closed_neighborhood(view, i)
        assert nxt.alive < view.alive
        view = nxt
        rounds += 1
    assert rounds <= n
