"""Interference conflict graph and the residual view the greedy auction iterates on."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .model import OperatorId, Scenario, StationId


@dataclass(frozen=True, eq=False)
class ConflictGraph:
    """Undirected conflict graph over global station ids ``0..m-1``.

    Adjacency is stored in CSR form: the neighbours of ``u`` are
    ``indices[indptr[u]:indptr[u+1]]``, sorted ascending.
    """

    owners: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    n_operators: int

    def __post_init__(self):
        for arr in (self.owners, self.indptr, self.indices):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, owners: Sequence[int], edges: Iterable[tuple[int, int]],
                   n_operators: int | None = None) -> "ConflictGraph":
        owners = np.asarray(owners, dtype=np.int64)
        m = len(owners)
        if n_operators is None:
            n_operators = int(owners.max()) + 1 if m else 0
        if m and np.any(np.diff(owners) < 0):
            raise ValueError("station ids must be ordered by owner")
        pairs = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at station {u}")
            if not (0 <= u < m and 0 <= v < m):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if owners[u] == owners[v]:
                continue
            pairs.add((u, v))
            pairs.add((v, u))
        if pairs:
            arr = np.array(sorted(pairs), dtype=np.int64)
            src, dst = arr[:, 0], arr[:, 1]
        else:
            src = dst = np.zeros(0, dtype=np.int64)
        return cls._from_directed(owners, src, dst, n_operators)

    @classmethod
    def _from_directed(cls, owners, src, dst, n_operators):
        m = len(owners)
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=m), out=indptr[1:])
        return cls(owners, indptr, np.ascontiguousarray(dst, dtype=np.int64), int(n_operators))

    @property
    def n_stations(self) -> int:
        return len(self.owners)

    @property
    def n_edges(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, u: StationId) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def has_edge(self, u: StationId, v: StationId) -> bool:
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < len(nb) and nb[k] == v)

    def edges(self) -> list[tuple[int, int]]:
        """Each undirected edge once, as ``(u, v)`` with ``u < v``, sorted."""
        out = []
        for u in range(self.n_stations):
            out.extend((u, int(v)) for v in self.neighbors(u) if v > u)
        return out

    @cached_property
    def operator_ranges(self) -> tuple[tuple[int, int], ...]:
        bounds = np.searchsorted(self.owners, np.arange(self.n_operators + 1))
        return tuple((int(bounds[i]), int(bounds[i + 1])) for i in range(self.n_operators))

    def stations_of(self, i: OperatorId) -> range:
        lo, hi = self.operator_ranges[i]
        return range(lo, hi)

    @cached_property
    def adjacency_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(int(v) for v in self.neighbors(u)) for u in range(self.n_stations))

    def adjacency_masks(self) -> list[int]:
        """Neighbourhood of each station as an integer bitmask."""
        masks = []
        for u in range(self.n_stations):
            mask = 0
            for v in self.neighbors(u):
                mask |= 1 << int(v)
            masks.append(mask)
        return masks

    def full_view(self) -> "ResidualView":
        return ResidualView(self, frozenset(range(self.n_stations)))


def build_conflict_graph(scenario: Scenario) -> ConflictGraph:
    """Edge between two stations iff they have different owners and lie closer than ``radius``.

    Distances are compared squared (``dx*dx + dy*dy < d*d``); a pair exactly
    ``d`` apart does not conflict.
    """
    m = scenario.n_stations
    owners = np.fromiter((s.owner for s in scenario.stations), dtype=np.int64, count=m)
    if m < 2:
        return ConflictGraph._from_directed(owners, np.zeros(0, np.int64), np.zeros(0, np.int64),
                                            scenario.n_operators)
    xs = np.fromiter((s.x for s in scenario.stations), dtype=np.float64, count=m)
    ys = np.fromiter((s.y for s in scenario.stations), dtype=np.float64, count=m)
    dx = xs[:, None] - xs[None, :]
    dy = ys[:, None] - ys[None, :]
    close = (dx * dx + dy * dy) < scenario.radius * scenario.radius
    close &= owners[:, None] != owners[None, :]
    src, dst = np.nonzero(close)
    return ConflictGraph._from_directed(owners, src.astype(np.int64), dst.astype(np.int64),
                                        scenario.n_operators)


@dataclass(frozen=True)
class ResidualView:
    """The stations of ``base`` that are still eligible for allocation."""

    base: ConflictGraph
    alive: frozenset

    def alive_stations_of(self, i: OperatorId) -> list[StationId]:
        return [s for s in self.base.stations_of(i) if s in self.alive]

    def is_empty(self) -> bool:
        return not self.alive


def neighborhood_of_operator(view: ResidualView, i: OperatorId) -> set[StationId]:
    """Alive stations of other operators that conflict with an alive station of ``i``."""
    adj = view.base.adjacency_sets
    out: set[StationId] = set()
    for s in view.alive_stations_of(i):
        out |= adj[s]
    out &= view.alive
    return out


def remove_closed_neighborhood(view: ResidualView, i: OperatorId) -> ResidualView:
    own = set(view.alive_stations_of(i))
    if not own:
        return view
    return ResidualView(view.base, view.alive - own - neighborhood_of_operator(view, i))


def write_edge_list(graph: ConflictGraph, path: str | Path) -> None:
    """One ``u v`` line per undirected edge, ``u < v``, in ascending order."""
    lines = [f"{u} {v}\n" for u, v in graph.edges()]
    Path(path).write_text("".join(lines))


def read_edge_list(path: str | Path) -> list[tuple[int, int]]:
    edges = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'u v', got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return edges
