"""Brute-force references and the whole-pipeline consistency survey."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .bounds import DofBound, TopologyClass, classify, upper_bound
from .errors import DifferentSets, KTooLarge, PlanInfeasible
from .graphs import AlignmentConflictGraphs, TopologyAnalysis, analyze, receivers_hearing
from .rational import format_fraction
from .scheme import build_two_coint, half_rate_scheme, synthesize_half
from .topology import NetworkTopology, enumerate_topologies, random_topology
from .verify import verify_scheme

MAX_BRUTE_K = 8
MAX_EXHAUSTIVE_K = 4


def brute_conflict_distance(g: AlignmentConflictGraphs, i: int, j: int) -> int:
    """Shortest alignment path from ``i`` to ``j`` by enumerating every simple path."""
    nbrs = g.alignment_neighbors()
    best = math.inf

    def walk(v, visited, length):
        nonlocal best
        if v == j:
            best = min(best, length)
            return
        for w in nbrs[v]:
            if w not in visited:
                walk(w, visited | {w}, length + 1)

    walk(i, {i}, 0)
    if best == math.inf:
        raise DifferentSets(f"vertices {i} and {j} are in different alignment sets")
    return best


def simple_cycles(nodes, succ) -> Iterator[tuple[int, ...]]:
    """Every simple directed cycle once, rooted at its smallest vertex."""
    for start in sorted(nodes):
        stack = [(start, (start,))]
        while stack:
            v, path = stack.pop()
            for w in succ[v]:
                if w == start:
                    yield path
                elif w > start and w not in path:
                    stack.append((w, path + (w,)))


def brute_odd_cycle(t: NetworkTopology, g: AlignmentConflictGraphs = None) -> float:
    if t.K > MAX_BRUTE_K:
        raise KTooLarge(f"brute-force cycle search limited to K <= {MAX_BRUTE_K}")
    best = math.inf
    for u in t.users:
        nodes = receivers_hearing(t, u)
        succ = {x: [y for y in nodes if x in t.I(y)] for x in nodes}
        for cyc in simple_cycles(nodes, succ):
            if len(cyc) % 2 == 1:
                best = min(best, len(cyc))
    return best


# ---------------------------------------------------------------------------
# survey

@dataclass
class SurveyRecord:
    index: int
    topology: NetworkTopology
    cls: TopologyClass
    bound: DofBound
    outcome: str  # "Verified", "PlanInfeasible" or "NotApplicable"
    rate: Fraction | None = None
    flags: list[str] = field(default_factory=list)
    analysis: TopologyAnalysis | None = None
    scheme: object = None

    def to_json_obj(self) -> dict:
        synth = {"outcome": self.outcome}
        if self.rate is not None:
            synth["rate"] = format_fraction(self.rate)
        return {
            "index": self.index,
            "topology": self.topology.to_json_obj(),
            "class": self.cls.value,
            "bound": self.bound.to_json_obj(),
            "synth": synth,
            "flags": list(self.flags),
        }


def survey_record(index: int, t: NetworkTopology, seed: int) -> SurveyRecord:
    a = analyze(t)
    cls = classify(a)
    bound = upper_bound(a)
    rec = SurveyRecord(index, t, cls, bound, "NotApplicable", analysis=a)
    flags = rec.flags

    if a.max_co_interferers <= 2 and a.L_min_odd != math.inf:
        flags.append("fork-free topology has an odd internal conflict cycle")
    if a.L_min_odd != math.inf and a.delta_min != 1:
        flags.append("odd internal conflict cycle without delta_min = 1")
    if t.K <= MAX_BRUTE_K:
        if brute_odd_cycle(t) != a.L_min_odd:
            flags.append("odd-cycle search disagrees with brute force")
        for c in a.internal_conflicts:
            if brute_conflict_distance(a.graphs, c.source, c.target) != c.distance:
                flags.append(f"conflict distance {c.source}->{c.target} disagrees with brute force")

    if cls is TopologyClass.BEST:
        try:
            rec.scheme = synthesize_half(t, a, seed)
            rec.outcome, rec.rate = "Verified", Fraction(1, 2)
        except PlanInfeasible:
            rec.outcome = "PlanInfeasible"
            flags.append("best topology failed to verify at 1/2")
        if bound.value != Fraction(1, 2):
            flags.append("best topology with bound other than 1/2")
    elif cls is not TopologyClass.INTERFERENCE_FREE:
        # converse side: the shared-vector half-rate construction must fail here
        if verify_scheme(t, half_rate_scheme(t, a, seed), Fraction(1, 2), seed=seed).passed:
            flags.append("non-best topology verified at 1/2")
        if bound.value >= Fraction(1, 2):
            flags.append("non-best topology with bound >= 1/2")

    if cls is TopologyClass.TWO_CO_INTERFERER:
        expected = Fraction(int(a.delta_min) + 1, 2 * int(a.delta_min) + 3)
        try:
            rec.scheme, _ = build_two_coint(t, a, seed)
            rec.outcome, rec.rate = "Verified", expected
        except PlanInfeasible as exc:
            rec.outcome = "PlanInfeasible"
            flags.append(f"two-co-interferer synthesis infeasible: {exc}")
        if bound.value != expected:
            flags.append("two-co-interferer bound differs from the achievable rate")
    return rec


def _topology_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def exhaustive_survey(K: int, seed: int = 1) -> Iterator[SurveyRecord]:
    if K > MAX_EXHAUSTIVE_K:
        raise KTooLarge(f"exhaustive survey limited to K <= {MAX_EXHAUSTIVE_K}")
    for index, t in enumerate(enumerate_topologies(K)):
        yield survey_record(index, t, _topology_seed(seed, index))


def sampled_survey(K: int, count: int, density, seed: int = 1) -> Iterator[SurveyRecord]:
    if K > MAX_BRUTE_K:
        raise KTooLarge(f"sampled survey limited to K <= {MAX_BRUTE_K}")
    for index in range(count):
        s = _topology_seed(seed, index)
        t = random_topology(K, float(density), s)
        yield survey_record(index, t, s)


def summarize(records) -> dict:
    counts = {c.value: 0 for c in TopologyClass}
    outcomes: dict[str, int] = {}
    flagged = 0
    total = 0
    for rec in records:
        total += 1
        counts[rec.cls.value] += 1
        outcomes[rec.outcome] = outcomes.get(rec.outcome, 0) + 1
        flagged += bool(rec.flags)
    return {"records": total, "classes": counts, "outcomes": outcomes, "flagged": flagged}
