"""Randomized attacks on truthfulness and monotonicity of the greedy auction.

A deviation replaces one operator's bid vector while everyone else bids
truthfully; both outcomes are settled against the TRUE valuations and
compared with exact integers. Deviations come in four kinds:

* ``scale_up``: every bid times one factor from {5/4, 2, 4}
* ``scale_down``: every bid times one factor from {0, 1/4, 1/2, 3/4}
* ``perturb``: each bid times its own factor from {0, 1/4, 1/2, 3/4, 5/4, 2, 4}
* ``shift``: every bid plus or minus the same delta, clamped at 0

Scaled bids are rounded half up to integers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Sequence

from ._pool import pmap
from .auction import run_auction, settle_utilities
from .graph import ConflictGraph, build_conflict_graph
from .model import BidVector, OperatorId, Scenario
from .scenario import GenParams, SplitMix64, generate_from, mix64, save

UP = (Fraction(5, 4), Fraction(2), Fraction(4))
DOWN = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
ALL_FACTORS = DOWN + UP
KINDS = ("scale_up", "scale_down", "perturb", "shift")


def scale(value: int, factor: Fraction) -> int:
    """``value * factor`` rounded half up, in exact integer arithmetic."""
    return (2 * value * factor.numerator + factor.denominator) // (2 * factor.denominator)


def sample_deviation(values: Sequence[int], rng: SplitMix64, kind: str | None = None
                     ) -> tuple[str, tuple[int, ...]]:
    kind = kind or rng.choice(KINDS)
    if kind == "scale_up" or kind == "scale_down":
        f = rng.choice(UP if kind == "scale_up" else DOWN)
        return kind, tuple(scale(v, f) for v in values)
    if kind == "perturb":
        return kind, tuple(scale(v, rng.choice(ALL_FACTORS)) for v in values)
    if kind == "shift":
        delta = rng.randint(1, max(1, max(values, default=1)))
        if rng.randint(0, 1):
            delta = -delta
        return kind, tuple(max(0, v + delta) for v in values)
    raise ValueError(f"unknown deviation kind {kind!r}")


@dataclass(frozen=True)
class DeviationReport:
    instance_id: int
    operator: OperatorId
    kind: str
    truthful_utility: int
    deviated_utility: int
    deviated_bids: tuple[int, ...]

    @property
    def profitable(self) -> bool:
        return self.deviated_utility > self.truthful_utility


def utility_under(graph: ConflictGraph, scenario: Scenario, i: OperatorId,
                  bids_i: Sequence[int] | None = None) -> int:
    """Operator ``i``'s true utility when it bids ``bids_i`` and the rest bid truthfully."""
    bids = list(scenario.truthful_bids())
    if bids_i is not None:
        bids[i] = BidVector(i, tuple(bids_i))
    res = settle_utilities(run_auction(graph, bids), scenario.truths)
    return res.utilities[i]


def _harness_rng(seed: int, instance_id: int) -> SplitMix64:
    return SplitMix64(mix64(seed) ^ instance_id)


def attack_strategy_proofness(scenario: Scenario, trials: int, deviations_per_operator: int,
                              seed: int, instance_id: int = 0) -> list[DeviationReport]:
    """``trials`` x ``deviations_per_operator`` random unilateral deviations per operator.

    Reports are ordered by operator, then by draw.
    """
    if trials < 1 or deviations_per_operator < 1:
        raise ValueError("trials and deviations_per_operator must be >= 1")
    rng = _harness_rng(seed, instance_id)
    graph = build_conflict_graph(scenario)
    truthful = settle_utilities(run_auction(graph, scenario.truthful_bids()), scenario.truths)
    reports = []
    for i in range(scenario.n_operators):
        values = scenario.truths[i].values
        for _ in range(trials * deviations_per_operator):
            kind, dev = sample_deviation(values, rng)
            reports.append(DeviationReport(instance_id, i, kind, truthful.utilities[i],
                                           utility_under(graph, scenario, i, dev), dev))
    return reports


@dataclass(frozen=True)
class MonotonicityProbe:
    instance_id: int
    operator: OperatorId
    original_bids: tuple[int, ...]
    raised_bids: tuple[int, ...]
    held: bool


def probe_monotonicity(scenario: Scenario, trials: int, seed: int, instance_id: int = 0,
                       bids: Sequence[BidVector] | None = None) -> list[MonotonicityProbe]:
    """Raise the bids of every allocated operator and check it stays allocated.

    The first trial doubles every bid; later trials raise a random non-empty
    subset of stations by factors drawn from {5/4, 2, 4}.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = _harness_rng(seed, instance_id)
    graph = build_conflict_graph(scenario)
    bids = list(bids if bids is not None else scenario.truthful_bids())
    base = run_auction(graph, bids)
    probes = []
    for i in range(scenario.n_operators):
        if not base.allocated(i):
            continue
        orig = bids[i].bids
        for t in range(trials):
            if t == 0:
                raised = tuple(2 * b for b in orig)
            else:
                raised = list(orig)
                picks = [j for j in range(len(orig)) if rng.randint(0, 1)] or [rng.randint(0, len(orig) - 1)]
                for j in picks:
                    raised[j] = max(orig[j], scale(orig[j], rng.choice(UP)))
                raised = tuple(raised)
            trial_bids = list(bids)
            trial_bids[i] = BidVector(i, raised)
            held = run_auction(graph, trial_bids).allocated(i)
            probes.append(MonotonicityProbe(instance_id, i, orig, raised, held))
    return probes


# --- campaigns over generated instances --------------------------------------

def _attack_one(instance_id: int, params: GenParams, base_seed: int, deviations: int, harness_seed: int):
    sc = generate_from(params, base_seed + instance_id)
    return sc, attack_strategy_proofness(sc, 1, deviations, harness_seed, instance_id)


def _probe_one(instance_id: int, params: GenParams, base_seed: int, trials: int, harness_seed: int):
    sc = generate_from(params, base_seed + instance_id)
    return sc, probe_monotonicity(sc, trials, harness_seed, instance_id)


@dataclass
class CampaignResult:
    instances: int
    reports: list
    scenarios: dict

    @property
    def failures(self) -> list:
        return [r for r in self.reports
                if (r.profitable if isinstance(r, DeviationReport) else not r.held)]


def strategy_proofness_campaign(params: GenParams, instances: int, deviations: int, seed: int,
                                workers: int | None = None) -> CampaignResult:
    """Instance ``k`` uses generation seed ``seed + k``; reports come back in (instance, operator) order."""
    fn = partial(_attack_one, params=params, base_seed=seed, deviations=deviations, harness_seed=seed)
    out = pmap(fn, range(instances), workers)
    reports = [r for _, reps in out for r in reps]
    bad = {r.instance_id for r in reports if r.profitable}
    return CampaignResult(instances, reports, {k: out[k][0] for k in sorted(bad)})


def monotonicity_campaign(params: GenParams, instances: int, seed: int, trials: int = 1,
                          workers: int | None = None) -> CampaignResult:
    fn = partial(_probe_one, params=params, base_seed=seed, trials=trials, harness_seed=seed)
    out = pmap(fn, range(instances), workers)
    reports = [p for _, probes in out for p in probes]
    bad = {p.instance_id for p in reports if not p.held}
    return CampaignResult(instances, reports, {k: out[k][0] for k in sorted(bad)})


def write_bundle(out_dir: str | Path, scenario: Scenario, report, index: int = 0) -> tuple[Path, Path]:
    """Write a scenario file plus a JSON record of the offending bids."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if isinstance(report, DeviationReport):
        stem = f"deviation-i{report.instance_id}-op{report.operator}-{index}"
        record = {
            "schema": 1,
            "kind": "deviation",
            "instance_id": report.instance_id,
            "operator": report.operator,
            "deviation": report.kind,
            "truthful_bids": list(scenario.truths[report.operator].values),
            "deviated_bids": list(report.deviated_bids),
            "truthful_utility": report.truthful_utility,
            "deviated_utility": report.deviated_utility,
        }
    else:
        stem = f"monotonicity-i{report.instance_id}-op{report.operator}-{index}"
        record = {
            "schema": 1,
            "kind": "monotonicity",
            "instance_id": report.instance_id,
            "operator": report.operator,
            "original_bids": list(report.original_bids),
            "raised_bids": list(report.raised_bids),
        }
    scn = out_dir / f"{stem}.scn.json"
    rec = out_dir / f"{stem}.json"
    save(scenario, scn)
    rec.write_text(json.dumps(record, indent=2) + "\n")
    return scn, rec
