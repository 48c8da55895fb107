"""The compiled and pure-Python kernels must agree exactly."""
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectraux import kernels
from spectraux.auction import run_auction
from spectraux.graph import ConflictGraph, build_conflict_graph
from spectraux.scenario import generate
from spectraux.vcg import mwis_search

needs_cython = pytest.mark.skipif("cython" not in kernels.available_backends(),
                                  reason="compiled kernels not built")


def test_python_backend_always_available():
    assert "python" in kernels.available_backends()
    assert kernels.load_backend("python").BACKEND == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.load_backend("fortran")


def test_env_var_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "import spectraux.kernels as k; print(k.BACKEND)"],
        env={**os.environ, "SPECTRAUX_PURE_PYTHON": "1"}, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@needs_cython
@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 8), per=st.integers(1, 12), radius=st.floats(0, 900),
       seed=st.integers(0, 2**40), bid_max=st.integers(0, 20))
def test_greedy_backends_agree(n, per, radius, seed, bid_max):
    sc = generate(n, per, 1000.0, radius, bid_max, seed)
    g = build_conflict_graph(sc)
    bids = sc.truthful_bids()
    py = run_auction(g, bids, backend=kernels.load_backend("python"))
    cy = run_auction(g, bids, backend=kernels.load_backend("cython"))
    assert py == cy


@st.composite
def weighted_graphs(draw, max_m=14):
    m = draw(st.integers(0, max_m))
    owners = sorted(draw(st.lists(st.integers(0, 3), min_size=m, max_size=m)))
    pairs = [(u, v) for u in range(m) for v in range(u + 1, m) if owners[u] != owners[v]]
    edges = [p for p in pairs if draw(st.booleans())]
    weights = draw(st.lists(st.integers(0, 9), min_size=m, max_size=m))
    return ConflictGraph.from_edges(owners, edges, n_operators=4), weights


@needs_cython
@settings(max_examples=150, deadline=None)
@given(weighted_graphs())
def test_mwis_backends_agree(gw):
    g, w = gw
    py = mwis_search(g, w, backend=kernels.load_backend("python"))
    cy = mwis_search(g, w, backend=kernels.load_backend("cython"))
    assert py == cy


def test_mwis_routes_large_instances_to_python():
    g = ConflictGraph.from_edges([0] * 70, [])
    ids, weight, _ = mwis_search(g, [1] * 70, cap=100)
    assert weight == 70 and len(ids) == 70
