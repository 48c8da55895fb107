"""Compare the compiled and pure-Python kernels on identical inputs.

    python3 benchmarks/bench_kernels.py [--operators 10] [--sizes 100,300,1000] [--mwis-sizes 16,20,24]

Prints median wall time per call for each backend and the speedup.
"""
from __future__ import annotations

import argparse
import statistics
import time

from spectraux import kernels
from spectraux.auction import run_auction
from spectraux.graph import build_conflict_graph
from spectraux.scenario import generate, split_stations
from spectraux.vcg import mwis_search


def _median_us(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - t0)
    return statistics.median(samples) / 1000


def _instance(n, m, radius, seed):
    sc = generate(n, split_stations(m, n), 1000.0, radius, 100, seed)
    return sc, build_conflict_graph(sc)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--operators", type=int, default=10)
    ap.add_argument("--sizes", default="100,300,1000")
    ap.add_argument("--radius", type=float, default=60.0,
                    help="sparser than the default 300 m so the greedy auction runs several rounds")
    ap.add_argument("--mwis-sizes", default="16,20,24")
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    mods = {name: kernels.load_backend(name) for name in backends}
    print(f"backends: {', '.join(backends)}")
    if "cython" not in mods:
        print("compiled kernels not built; only the fallback is timed")

    print(f"\ngreedy auction, n={args.operators}, d={args.radius:g}")
    print(f"{'m':>6} {'edges':>7} {'rounds':>6} " + " ".join(f"{b + ' us':>12}" for b in backends) + "  speedup")
    for m in (int(x) for x in args.sizes.split(",")):
        sc, g = _instance(args.operators, m, args.radius, args.seed)
        bids = sc.truthful_bids()
        results = {b: run_auction(g, bids, backend=mod) for b, mod in mods.items()}
        assert len(set(results.values())) == 1, "backends disagree"
        t = {b: _median_us(lambda mod=mod: run_auction(g, bids, backend=mod), args.repeat) for b, mod in mods.items()}
        speed = f"{t['python'] / t['cython']:8.1f}x" if "cython" in t else ""
        print(f"{m:>6} {g.n_edges:>7} {len(results['python'].rounds):>6} "
              + " ".join(f"{t[b]:>12.1f}" for b in backends) + f"  {speed}")

    print(f"\nexact MWIS, n={args.operators}, d=300")
    print(f"{'m':>6} {'nodes':>7} " + " ".join(f"{b + ' us':>12}" for b in backends) + "  speedup")
    for m in (int(x) for x in args.mwis_sizes.split(",")):
        sc, g = _instance(args.operators, m, 300.0, args.seed)
        w = [v for b in sc.truthful_bids() for v in b.bids]
        results = {b: mwis_search(g, w, cap=64, backend=mod) for b, mod in mods.items()}
        assert len(set(results.values())) == 1, "backends disagree"
        t = {b: _median_us(lambda mod=mod: mwis_search(g, w, cap=64, backend=mod), max(3, args.repeat // 4))
             for b, mod in mods.items()}
        speed = f"{t['python'] / t['cython']:8.1f}x" if "cython" in t else ""
        print(f"{m:>6} {results['python'][2]:>7} " + " ".join(f"{t[b]:>12.1f}" for b in backends) + f"  {speed}")


if __name__ == "__main__":
    main()
