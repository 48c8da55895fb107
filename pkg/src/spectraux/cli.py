"""Command-line driver.

Exit codes: 0 success, 1 property violation found, 2 infeasible request
(instance above the VCG cap), 3 I/O or parse error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as benchmod
from . import kernels, metrics
from .auction import run_auction, settle_utilities
from .graph import build_conflict_graph, write_edge_list
from .model import ShapeError, VcgResult, settle
from .properties import monotonicity_campaign, strategy_proofness_campaign, write_bundle
from .scenario import FormatError, GenParams, dumps, generate, generate_from, load_bids, load_scenario
from .vcg import DEFAULT_CAP, InstanceTooLarge, vcg_auction

EXIT_OK, EXIT_VIOLATION, EXIT_INFEASIBLE, EXIT_IO = 0, 1, 2, 3


def _stations_arg(text: str):
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or comma list, got {text!r}") from None
    return parts[0] if len(parts) == 1 else tuple(parts)


def _add_gen_flags(p: argparse.ArgumentParser, seed_default: int = 42) -> None:
    p.add_argument("--operators", type=int, default=3)
    p.add_argument("--stations", type=_stations_arg, default=3,
                   help="stations per operator, or a comma list with one count per operator")
    p.add_argument("--side", type=float, default=1000.0, help="region side length in meters")
    p.add_argument("--radius", type=float, default=300.0, help="interference distance d in meters")
    p.add_argument("--bid-max", type=int, default=100)
    p.add_argument("--seed", type=int, default=seed_default)


def _params(args) -> GenParams:
    return GenParams(args.operators, args.stations, args.side, args.radius, args.bid_max)


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _info(args, msg: str) -> None:
    # keep stdout clean when the payload itself goes to stdout
    stream = sys.stderr if getattr(args, "output", None) in (None, "-") else sys.stdout
    print(msg, file=stream)


def cmd_gen(args) -> int:
    sc = generate(args.operators, args.stations, args.side, args.radius, args.bid_max, args.seed)
    _emit(dumps(sc), args.output)
    g = build_conflict_graph(sc)
    _info(args, f"stations={sc.n_stations} edges={g.n_edges}")
    return EXIT_OK


def cmd_run(args) -> int:
    sc = load_scenario(args.scenario)
    bids = load_bids(args.bids) if args.bids else sc.truthful_bids()
    graph = build_conflict_graph(sc)
    if args.dump_graph:
        write_edge_list(graph, args.dump_graph)
    if args.mechanism == "greedy":
        res = settle_utilities(run_auction(graph, bids), sc.truths)
    else:
        v = vcg_auction(graph, bids, cap=args.vcg_cap)
        res = VcgResult(v.allocation, v.payments, v.optimal_welfare, v.explored_count,
                        settle(v.allocation, v.payments, sc.truths))
    extra = {
        "welfare": metrics.social_welfare(res.allocation, bids),
        "efficiency": metrics.allocation_efficiency(res.allocation),
    }
    _emit(dumps(res, extra), args.output)
    _info(args, f"mechanism={args.mechanism} welfare={extra['welfare']} "
                f"efficiency={extra['efficiency']} payments={list(res.payments)}")
    return EXIT_OK


def cmd_compare(args) -> int:
    params = _params(args)
    items = [(k, generate_from(params, args.seed + k)) for k in range(args.batch)]
    rows = metrics.compare(items, cap=args.vcg_cap)
    _emit(metrics.rows_to_csv(rows, timing=args.timing), args.output)
    s = metrics.summarize(rows)
    parts = [f"instances={s.instances}"]
    if s.mean_ratio is not None:
        parts += [f"mean_ratio={float(s.mean_ratio):.6f}", f"min_ratio={float(s.min_ratio):.6f}"]
    for mech, eff in s.mean_efficiency.items():
        parts.append(f"mean_efficiency_{mech}={float(eff):.6f}")
    skipped = sum(r.mechanism == "vcg-skipped" for r in rows)
    if skipped:
        parts.append(f"vcg_skipped={skipped}")
    _info(args, " ".join(parts))
    return EXIT_OK


def cmd_prop(args) -> int:
    params = _params(args)
    sp = strategy_proofness_campaign(params, args.trials, args.deviations, args.seed)
    mono = monotonicity_campaign(params, args.trials, args.seed)
    profitable = sp.failures
    broken = mono.failures
    lines = [
        f"strategy-proofness: {len(sp.reports)} deviations over {args.trials} instances, "
        f"{len(profitable)} profitable in {len(sp.scenarios)} instances",
        f"monotonicity: {len(mono.reports)} probes, {len(broken)} failures",
    ]
    if args.out_dir and (profitable or broken):
        written = 0
        seen = set()
        for camp, fails in ((sp, profitable), (mono, broken)):
            for k, rep in enumerate(fails):
                key = (type(rep).__name__, rep.instance_id, rep.operator)
                if key in seen or written >= args.max_bundles:
                    continue
                seen.add(key)
                write_bundle(args.out_dir, camp.scenarios[rep.instance_id], rep, k)
                written += 1
        lines.append(f"wrote {written} counterexample bundles to {args.out_dir}")
    for line in lines:
        print(line)
    if args.output:
        Path(args.output).write_text("\n".join(lines[:2]) + "\n")
    return EXIT_VIOLATION if profitable or broken else EXIT_OK


def cmd_bench(args) -> int:
    backends = kernels.available_backends() if args.backend == "all" else \
        [None if args.backend == "auto" else args.backend]
    ms = benchmod.parse_sweep(args.stations_sweep)
    vcg_ms = benchmod.parse_sweep(args.vcg_sweep) if args.vcg_sweep else []
    cap = args.vcg_cap
    if vcg_ms and max(vcg_ms) > cap:
        raise InstanceTooLarge(max(vcg_ms), cap)
    rows = []
    for be in backends:
        rows += benchmod.greedy_sweep(args.operators, ms, args.seed, args.side, args.radius,
                                      args.bid_max, reps=args.reps, backend=be)
        if vcg_ms:
            rows += benchmod.vcg_sweep(args.operators, vcg_ms, args.seed, args.side, args.radius,
                                       args.bid_max, reps=args.vcg_reps, cap=cap, backend=be)
    _emit(benchmod.rows_to_csv(rows, timing=args.timing), args.output)
    for be in backends:
        name = be or kernels.BACKEND
        g = [r for r in rows if r.mechanism == "greedy" and r.backend == name]
        worst = max(g, key=lambda r: r.runtime_us)
        _info(args, f"[{name}] greedy: {len(g)} runs, slowest {worst.runtime_us} us at m={worst.m}")
        if vcg_ms:
            series = benchmod.geometric_means([r for r in rows if r.backend == name])
            ok, detail = benchmod.superpolynomial_growth(series)
            _info(args, f"[{name}] vcg nodes: " + ", ".join(f"m={m}:{v:.1f}" for m, v in series))
            _info(args, f"[{name}] vcg growth {'super-polynomial' if ok else 'NOT super-polynomial'} ({detail})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spectraux", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random scenario file")
    _add_gen_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run one mechanism on a scenario")
    p.add_argument("scenario")
    p.add_argument("--mechanism", choices=("greedy", "vcg"), default="greedy")
    p.add_argument("--bids", help="bids file; default is truthful bidding")
    p.add_argument("--dump-graph", help="write the conflict graph as an edge list")
    p.add_argument("--vcg-cap", type=int, default=DEFAULT_CAP)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="greedy vs VCG over a batch of generated instances")
    p.add_argument("--batch", type=int, default=100)
    _add_gen_flags(p, seed_default=0)
    p.add_argument("--vcg-cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--timing", action="store_true", help="fill the runtime_us column")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("prop", help="randomized strategy-proofness and monotonicity campaign")
    p.add_argument("--trials", type=int, default=1000, help="number of generated instances")
    p.add_argument("--deviations", type=int, default=10, help="deviations per operator per instance")
    _add_gen_flags(p, seed_default=0)
    p.add_argument("--out-dir", help="directory for counterexample bundles")
    p.add_argument("--max-bundles", type=int, default=20)
    p.add_argument("-o", "--output", help="write the campaign summary here")
    p.set_defaults(func=cmd_prop)

    p = sub.add_parser("bench", help="scaling sweep of greedy runtime and VCG search size")
    p.add_argument("--operators", type=int, default=10)
    p.add_argument("--stations-sweep", default="10:1000:10", help="start:stop:step over total m")
    p.add_argument("--vcg-sweep", help="start:stop:step over total m for the exact VCG")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--vcg-reps", type=int, default=30)
    p.add_argument("--vcg-cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--side", type=float, default=1000.0)
    p.add_argument("--radius", type=float, default=300.0)
    p.add_argument("--bid-max", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=("auto", "python", "cython", "all"), default="auto")
    p.add_argument("--timing", action="store_true", help="fill the runtime_us column")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (FormatError, ShapeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
