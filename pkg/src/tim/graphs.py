"""Alignment and conflict graphs of a topology and the quantities derived from them."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DifferentSets
from .topology import NetworkTopology


@dataclass(frozen=True)
class AlignmentConflictGraphs:
    K: int
    alignment_edges: frozenset[frozenset[int]]
    conflict_edges: frozenset[tuple[int, int]]

    @property
    def vertices(self) -> range:
        return range(1, self.K + 1)

    def alignment_neighbors(self) -> dict[int, set[int]]:
        nbrs: dict[int, set[int]] = {v: set() for v in self.vertices}
        for edge in self.alignment_edges:
            a, b = tuple(edge)
            nbrs[a].add(b)
            nbrs[b].add(a)
        return nbrs


@dataclass(frozen=True)
class InternalConflict:
    source: int
    target: int
    distance: int


@dataclass(frozen=True)
class TopologyAnalysis:
    topology: NetworkTopology
    graphs: AlignmentConflictGraphs
    alignment_sets: tuple[frozenset[int], ...]
    internal_conflicts: tuple[InternalConflict, ...]
    co_interferer_sets: Mapping[int, frozenset[int]]
    incoming_internal_count: Mapping[int, int]
    B: frozenset[int]
    delta_min: float  # int, or math.inf
    L_min_odd: float  # int, or math.inf
    max_co_interferers: int
    # directed 2-cycles inside some S_u; diagnostics only, never enter the bound
    internal_two_cycles: tuple[tuple[int, int], ...] = ()

    def set_of(self, v: int) -> frozenset[int]:
        for s in self.alignment_sets:
            if v in s:
                return s
        raise KeyError(v)

    def to_json_obj(self) -> dict:
        def num(x):
            return "inf" if x == math.inf else int(x)

        return {
            "K": self.topology.K,
            "alignment_edges": sorted(sorted(e) for e in self.graphs.alignment_edges),
            "conflict_edges": sorted(list(e) for e in self.graphs.conflict_edges),
            "alignment_sets": [sorted(s) for s in self.alignment_sets],
            "internal_conflicts": [
                [c.source, c.target, c.distance] for c in self.internal_conflicts
            ],
            "co_interferers": {
                str(i): sorted(s) for i, s in sorted(self.co_interferer_sets.items())
            },
            "incoming_internal_count": {
                str(j): n for j, n in sorted(self.incoming_internal_count.items())
            },
            "B": sorted(self.B),
            "delta_min": num(self.delta_min),
            "L_min_odd": num(self.L_min_odd),
            "max_co_interferers": self.max_co_interferers,
            "internal_two_cycles": [list(c) for c in self.internal_two_cycles],
        }


def build_graphs(t: NetworkTopology) -> AlignmentConflictGraphs:
    alignment = set()
    for k in t.users:
        members = sorted(t.I(k))
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                alignment.add(frozenset((members[x], members[y])))
    conflicts = {(i, j) for j, i in t.links()}
    return AlignmentConflictGraphs(t.K, frozenset(alignment), frozenset(conflicts))


def alignment_sets(g: AlignmentConflictGraphs) -> tuple[frozenset[int], ...]:
    """Connected components of the alignment graph, ordered by smallest member."""
    nbrs = g.alignment_neighbors()
    seen: set[int] = set()
    comps = []
    for v in g.vertices:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return tuple(comps)


def bfs_distances(nbrs: Mapping[int, Iterable[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in sorted(nbrs[u]):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def alignment_distances(g: AlignmentConflictGraphs) -> dict[int, dict[int, int]]:
    nbrs = g.alignment_neighbors()
    return {v: bfs_distances(nbrs, v) for v in g.vertices}


def conflict_distance(g: AlignmentConflictGraphs, i: int, j: int) -> int:
    """Alignment-path length between ``i`` and ``j``; only defined inside one alignment set."""
    d = bfs_distances(g.alignment_neighbors(), i)
    if j not in d:
        raise DifferentSets(f"vertices {i} and {j} lie in different alignment sets")
    return d[j]


def internal_conflicts(g: AlignmentConflictGraphs, sets=None) -> tuple[InternalConflict, ...]:
    if sets is None:
        sets = alignment_sets(g)
    owner = {v: idx for idx, s in enumerate(sets) for v in s}
    dist = alignment_distances(g)
    found = [
        InternalConflict(i, j, dist[i][j])
        for i, j in sorted(g.conflict_edges)
        if owner[i] == owner[j]
    ]
    return tuple(found)


def co_interferers(t: NetworkTopology, i: int) -> frozenset[int]:
    out: set[int] = set()
    for j in t.users:
        if i in t.I(j):
            out |= t.I(j)
    out.discard(i)
    return frozenset(out)


def receivers_hearing(t: NetworkTopology, u: int) -> frozenset[int]:
    """``S_u``: receivers at which transmitter ``u`` interferes."""
    return frozenset(j for j in t.users if u in t.I(j) and j != u)


def _shortest_odd_closed_walk(nodes: frozenset[int], succ: Mapping[int, Iterable[int]]) -> float:
    best = math.inf
    for s in sorted(nodes):
        # layer by (vertex, parity of walk length)
        dist = {(s, 0): 0}
        queue = deque([(s, 0)])
        while queue:
            u, par = queue.popleft()
            d = dist[(u, par)]
            if d + 1 >= best:
                break
            for w in succ[u]:
                state = (w, par ^ 1)
                if w == s and par == 0:
                    best = min(best, d + 1)
                if state not in dist:
                    dist[state] = d + 1
                    queue.append(state)
    return best


def _induced_conflicts(t: NetworkTopology, nodes: frozenset[int]) -> dict[int, list[int]]:
    # conflict edge x -> y iff x in I_y
    return {x: sorted(y for y in nodes if x in t.I(y)) for x in nodes}


def shortest_odd_internal_conflict_cycle(t: NetworkTopology, g: AlignmentConflictGraphs = None) -> float:
    """Length of the shortest odd directed conflict cycle whose nodes share an outside interferer."""
    best = math.inf
    for u in t.users:
        nodes = receivers_hearing(t, u)
        if len(nodes) < 3:
            continue
        best = min(best, _shortest_odd_closed_walk(nodes, _induced_conflicts(t, nodes)))
    return best


def internal_two_cycles(t: NetworkTopology) -> tuple[tuple[int, int], ...]:
    found = set()
    for u in t.users:
        nodes = receivers_hearing(t, u)
        for x in nodes:
            for y in nodes:
                if x < y and x in t.I(y) and y in t.I(x):
                    found.add((x, y))
    return tuple(sorted(found))


def analyze(t: NetworkTopology) -> TopologyAnalysis:
    g = build_graphs(t)
    sets = alignment_sets(g)
    internal = internal_conflicts(g, sets)
    co = {i: co_interferers(t, i) for i in t.users}
    incoming = {j: 0 for j in t.users}
    for c in internal:
        incoming[c.target] += 1
    B = frozenset(j for j, n in incoming.items() if n >= 2)
    into_B = [c.distance for c in internal if c.target in B]
    return TopologyAnalysis(
        topology=t,
        graphs=g,
        alignment_sets=sets,
        internal_conflicts=internal,
        co_interferer_sets=co,
        incoming_internal_count=incoming,
        B=B,
        delta_min=min(into_B) if into_B else math.inf,
        L_min_odd=shortest_odd_internal_conflict_cycle(t, g),
        max_co_interferers=max((len(s) for s in co.values()), default=0),
        internal_two_cycles=internal_two_cycles(t),
    )
