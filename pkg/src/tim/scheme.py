"""Linear schemes: beamforming matrices plus receiver preset-mode patterns.

Two constructions are provided:

* :func:`synthesize_half` sends one symbol over two slots.  Transmitters of
  one alignment set share a beamforming vector; receivers facing an interferer
  from their own set switch mode between the slots.
* :func:`synthesize_two_coint` handles topologies whose alignment graph has no
  fork.  Each alignment component is a path or a cycle; vertices get sliding
  windows of ``delta + 1`` beamforming labels over ``m = 2 delta + 3`` slots.

Label vectors are random integers on planned supports, so every synthesized
scheme is checked with exact ranks before it is returned.
"""

from __future__ import annotations

import enum
import itertools
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .bounds import TopologyClass, classify
from .errors import DimensionMismatch, MalformedDocument, NotBestTopology, NotPathOrCycle, PlanInfeasible, WrongClass
from .graphs import TopologyAnalysis, alignment_distances
from .rational import format_fraction, parse_fraction
from .topology import NetworkTopology
from .verify import GAIN_MAX, rank_exact, verify_scheme

DEFAULT_MAX_RETRIES = 32
VALUE_MAX = 2**20
# support layouts screened per attempt before values are drawn
STRUCTURAL_DRAWS = 64


def default_max_retries() -> int:
    env = os.environ.get("TIM_MAX_RETRIES")
    if env:
        return max(1, int(env))
    return DEFAULT_MAX_RETRIES


@dataclass(frozen=True)
class LinearScheme:
    m: int
    num_modes: int
    # V[i] lists the columns of V_i, each of length m
    V: Mapping[int, tuple[tuple[Fraction, ...], ...]]
    L: Mapping[int, tuple[int, ...]]

    def n(self, i: int) -> int:
        return len(self.V[i])

    def matrix(self, i: int) -> list[list[Fraction]]:
        """``V_i`` as an ``m x n_i`` row-major matrix."""
        cols = self.V[i]
        return [[c[r] for c in cols] for r in range(self.m)]

    def to_json_obj(self) -> dict:
        return {
            "m": self.m,
            "num_modes": self.num_modes,
            "beamforming": {
                str(i): [[format_fraction(x) for x in col] for col in cols]
                for i, cols in sorted(self.V.items())
            },
            "mode_patterns": {str(j): list(p) for j, p in sorted(self.L.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def scheme_from_json_obj(obj: Mapping) -> LinearScheme:
    try:
        m = int(obj["m"])
        num_modes = int(obj["num_modes"])
        V = {
            int(i): tuple(tuple(parse_fraction(x) for x in col) for col in cols)
            for i, cols in obj["beamforming"].items()
        }
        L = {int(j): tuple(int(x) for x in p) for j, p in obj["mode_patterns"].items()}
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise MalformedDocument(f"bad scheme document: {exc}") from exc
    if m < 1 or num_modes < 1:
        raise MalformedDocument("m and num_modes must be positive")
    return LinearScheme(m, num_modes, V, L)


def parse_scheme(document: str) -> LinearScheme:
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc
    return scheme_from_json_obj(obj)


def has_full_column_rank(scheme: LinearScheme, i: int) -> bool:
    return rank_exact(scheme.V[i]) == scheme.n(i)


# ---------------------------------------------------------------------------
# half rate: one symbol over two slots

def half_rate_scheme(t: NetworkTopology, a: TopologyAnalysis, seed: int = 1) -> LinearScheme:
    """Two-slot scheme with one shared vector per alignment set, built for any topology.

    Only guaranteed to reach rate 1/2 on best topologies; other topologies are
    useful as negative cases.
    """
    rng = np.random.default_rng([seed, 0x4A1F])
    coeffs: list[int] = []
    while len(coeffs) < len(a.alignment_sets):
        c = int(rng.integers(1, VALUE_MAX, endpoint=True))
        if c not in coeffs:
            coeffs.append(c)
    V = {}
    for c, members in zip(coeffs, a.alignment_sets):
        # distinct slopes keep vectors of different sets pairwise independent
        vec = (Fraction(1), Fraction(c))
        for i in members:
            V[i] = (vec,)
    L = {}
    for j in t.users:
        own = a.set_of(j)
        L[j] = (1, 2) if any(i in own for i in t.I(j)) else (1, 1)
    return LinearScheme(2, 2, V, L)


def synthesize_half(t: NetworkTopology, a: TopologyAnalysis, seed: int = 1) -> LinearScheme:
    cls = classify(a)
    if cls not in (TopologyClass.BEST, TopologyClass.INTERFERENCE_FREE):
        raise NotBestTopology(f"half-rate synthesis needs a best topology, got {cls.value}")
    scheme = half_rate_scheme(t, a, seed)
    if not verify_scheme(t, scheme, Fraction(1, 2), seed=seed).passed:
        raise PlanInfeasible("half-rate scheme failed exact verification")
    return scheme


# ---------------------------------------------------------------------------
# sliding windows over path / cycle components

def order_component(nbrs: Mapping[int, set[int]], component) -> tuple[list[int], bool]:
    """Walk a path or cycle component; returns ``(vertices in order, is_cycle)``.

    Paths start at the endpoint with the smaller id.  Cycles start at the
    smallest id and move toward its smaller neighbor.
    """
    comp = set(component)
    local = {v: nbrs[v] & comp for v in comp}
    if any(len(ns) > 2 for ns in local.values()):
        raise NotPathOrCycle(f"component {sorted(comp)} has a vertex of alignment degree > 2")
    if len(comp) == 1:
        return [next(iter(comp))], False
    ends = sorted(v for v, ns in local.items() if len(ns) == 1)
    is_cycle = not ends
    if is_cycle:
        start = min(comp)
        order = [start, min(local[start])]
    else:
        if len(ends) != 2:
            raise NotPathOrCycle(f"component {sorted(comp)} is not a simple path")
        order = [ends[0]]
    while True:
        cur = order[-1]
        prev = order[-2] if len(order) > 1 else None
        nxt = [w for w in local[cur] if w != prev and w not in order]
        if not nxt:
            break
        order.append(nxt[0])
    if len(order) != len(comp):
        raise NotPathOrCycle(f"component {sorted(comp)} is not connected as a path or cycle")
    return order, is_cycle


def assign_windows(
    nbrs: Mapping[int, set[int]], component, delta: int, first_label: int = 0
) -> dict[int, tuple[int, ...]]:
    """Give each vertex ``delta + 1`` consecutive labels along its path or cycle.

    A path of ``p`` vertices uses ``p + delta`` fresh labels.  A cycle uses
    ``max(p, delta + 2)`` labels with wrap-around; the floor keeps windows on
    short cycles free of repeated labels.
    """
    order, is_cycle = order_component(nbrs, component)
    p = len(order)
    w = delta + 1
    if is_cycle:
        q = max(p, delta + 2)
        return {v: tuple(first_label + (t + s) % q for s in range(w)) for t, v in enumerate(order)}
    return {v: tuple(first_label + t + s for s in range(w)) for t, v in enumerate(order)}


def label_name(label: int) -> str:
    name = ""
    label += 1
    while label:
        label, r = divmod(label - 1, 26)
        name = chr(ord("a") + r) + name
    return name


# ---------------------------------------------------------------------------
# supports, values and mode patterns

class LabelKind(str, enum.Enum):
    ALIGN_ONLY = "AlignOnly"
    SEPARATE_REQUIRED = "SeparateRequired"
    PRIVATE = "Private"


@dataclass
class LabelPlan:
    labels: tuple[int, ...]
    window: dict[int, tuple[int, ...]]
    label_kind: dict[int, LabelKind]
    support: dict[int, tuple[int, ...]] = field(default_factory=dict)  # 0-based slots
    values: dict[int, tuple[int, ...]] = field(default_factory=dict)
    # receiver -> labels needing separation / alignment there
    sep: dict[int, frozenset[int]] = field(default_factory=dict)
    align: dict[int, frozenset[int]] = field(default_factory=dict)
    attempts: int = 0


def _holders(window: Mapping[int, Sequence[int]]) -> dict[int, set[int]]:
    out: dict[int, set[int]] = {}
    for v, labels in window.items():
        for lab in labels:
            out.setdefault(lab, set()).add(v)
    return out


def collect_constraints(t: NetworkTopology, window: Mapping[int, Sequence[int]]) -> LabelPlan:
    holders = _holders(window)
    sep: dict[int, frozenset[int]] = {}
    align: dict[int, frozenset[int]] = {}
    for j in t.users:
        own = set(window[j])
        interferer_count: dict[int, int] = {}
        for i in t.I(j):
            for lab in window[i]:
                interferer_count[lab] = interferer_count.get(lab, 0) + 1
        sep[j] = frozenset(lab for lab, n in interferer_count.items() if lab in own)
        align[j] = frozenset(lab for lab, n in interferer_count.items() if n >= 2)
    any_sep = set().union(*sep.values()) if sep else set()
    kinds = {}
    for lab, hs in holders.items():
        if lab in any_sep:
            kinds[lab] = LabelKind.SEPARATE_REQUIRED
        elif len(hs) >= 2:
            kinds[lab] = LabelKind.ALIGN_ONLY
        else:
            kinds[lab] = LabelKind.PRIVATE
    return LabelPlan(tuple(sorted(holders)), dict(window), kinds, sep=sep, align=align)


def _label_groups(t: NetworkTopology, window: Mapping[int, Sequence[int]]) -> list[frozenset[int]]:
    """Label sets that must stay independent: per receiver, and per pair of label-sharing transmitters."""
    groups = set()
    for j in t.users:
        seen = set(window[j])
        for i in t.I(j):
            seen |= set(window[i])
        groups.add(frozenset(seen))
    users = sorted(window)
    for x, p in enumerate(users):
        for r in users[x + 1:]:
            if set(window[p]) & set(window[r]):
                groups.add(frozenset(window[p]) | frozenset(window[r]))
    return sorted(groups, key=lambda g: (len(g), sorted(g)))


def _allocate_supports(
    plan: LabelPlan, groups, m: int, rng, randomized: bool, wide: bool = False
) -> dict[int, tuple[int, ...]]:
    interacts: dict[int, set[int]] = {lab: set() for lab in plan.labels}
    for g in groups:
        for lab in g:
            interacts[lab] |= g - {lab}
    sep_labels = [lab for lab in plan.labels if plan.label_kind[lab] is LabelKind.SEPARATE_REQUIRED]
    align_labels = [lab for lab in plan.labels if plan.label_kind[lab] is LabelKind.ALIGN_ONLY]
    if randomized:
        rng.shuffle(sep_labels)
        rng.shuffle(align_labels)
    support: dict[int, tuple[int, ...]] = {}
    for lab in sep_labels + align_labels:
        need = 2 if plan.label_kind[lab] is LabelKind.SEPARATE_REQUIRED else 1
        if need > m:
            raise PlanInfeasible(f"label {label_name(lab)} needs {need} slots but m = {m}")
        if wide and need == 2 and m > 2 and rng.random() < 0.5:
            need = 3
        load = [0] * m
        for other in interacts[lab]:
            for s in support.get(other, ()):
                load[s] += 1
        tiebreak = rng.permutation(m) if randomized else np.arange(m)
        ranked = sorted(range(m), key=lambda s: (load[s], int(tiebreak[s])))
        support[lab] = tuple(sorted(ranked[:need]))
    for lab in plan.labels:
        if plan.label_kind[lab] is LabelKind.PRIVATE:
            support[lab] = tuple(range(m))
    return support


class _ParityUnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [0] * n  # parity relative to parent

    def find(self, x: int) -> tuple[int, int]:
        par = 0
        path = []
        while self.parent[x] != x:
            path.append(x)
            par ^= self.parity[x]
            x = self.parent[x]
        root = x
        # path compression with parity to root
        acc = par
        for node in path:
            step = self.parity[node]
            self.parent[node] = root
            self.parity[node] = acc
            acc ^= step
        return root, par

    def relate(self, a: int, b: int, differ: int) -> bool:
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == differ
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ differ
        return True


def solve_mode_pattern(m: int, sep_supports, align_supports) -> tuple[int, ...] | None:
    """Two-mode pattern: constant on every align support, switching inside every sep support.

    The smallest slot of each linked group takes mode 1; slots touched by no
    constraint stay at mode 1.  Returns ``None`` when the constraints clash.
    """
    uf = _ParityUnionFind(m)
    for sup in align_supports:
        for s in sup[1:]:
            if not uf.relate(sup[0], s, 0):
                return None
    for sup in sep_supports:
        if len(sup) < 2:
            return None
        # two-slot supports: the slots must differ
        if not uf.relate(sup[0], sup[-1], 1):
            return None
    base: dict[int, int] = {}
    pattern = []
    for s in range(m):
        root, par = uf.find(s)
        if root not in base:
            base[root] = par
        pattern.append(1 + (par ^ base[root]))
    return tuple(pattern)


def _constraint_patterns(m: int, sep_supports, align_supports, limit: int = 14):
    """Two-mode patterns meeting every align/sep constraint, parity solution first.

    Slots outside all constrained supports stay at mode 1.  Exhaustive
    enumeration covers at most ``2**limit`` assignments of the constrained slots.
    """
    first = None
    if all(len(sup) == 2 for sup in sep_supports):
        first = solve_mode_pattern(m, sep_supports, align_supports)
        if first is not None:
            yield first
    slots = sorted({s for sup in list(sep_supports) + list(align_supports) for s in sup})
    if len(slots) > limit:
        return
    for bits in itertools.product((1, 2), repeat=len(slots)):
        pattern = [1] * m
        for s, b in zip(slots, bits):
            pattern[s] = b
        pattern = tuple(pattern)
        if pattern == first:
            continue
        if any(len({pattern[s] for s in sup}) != 1 for sup in align_supports):
            continue
        if any(len({pattern[s] for s in sup}) < 2 for sup in sep_supports):
            continue
        yield pattern


def _max_matching(vectors: list[tuple[int, ...]], m: int) -> int:
    match_slot = [-1] * m

    def augment(v, seen):
        for s in vectors[v]:
            if s in seen:
                continue
            seen.add(s)
            if match_slot[s] < 0 or augment(match_slot[s], seen):
                match_slot[s] = v
                return True
        return False

    return sum(augment(v, set()) for v in range(len(vectors)))


def _received_patterns(labels_images, support, pattern) -> list[tuple[int, ...]]:
    """Sparsity patterns spanning the received images, one label at a time.

    A label seen through two or more links whose support meets both modes
    spans its two mode-restricted parts; otherwise it spans one vector.
    """
    out = []
    for lab, images in labels_images.items():
        if images == 0:
            continue
        sup = support[lab]
        parts = {}
        for s in sup:
            parts.setdefault(pattern[s], []).append(s)
        if images >= 2 and len(parts) >= 2:
            out.extend(tuple(p) for p in list(parts.values())[:images])
        else:
            out.append(tuple(sup))
    return out


def structural_desired_dim(t: NetworkTopology, plan: LabelPlan, j: int, pattern, m: int) -> int:
    """Generic-position value of ``rank([A_j B_j]) - rank(A_j)`` from supports alone.

    Label entries are independent random draws, so the generic rank of the
    received images equals the size of a maximum slot matching.
    """
    seen_all: dict[int, int] = {}
    seen_interf: dict[int, int] = {}
    for i in [j, *sorted(t.I(j))]:
        for lab in plan.window[i]:
            seen_all[lab] = seen_all.get(lab, 0) + 1
            if i != j:
                seen_interf[lab] = seen_interf.get(lab, 0) + 1
    full = _max_matching(_received_patterns(seen_all, plan.support, pattern), m)
    interf = _max_matching(_received_patterns(seen_interf, plan.support, pattern), m)
    return full - interf


def _choose_modes(t: NetworkTopology, plan: LabelPlan, m: int, need: Mapping[int, int]):
    modes = {}
    for j in t.users:
        sep = [plan.support[lab] for lab in sorted(plan.sep[j])]
        align = [plan.support[lab] for lab in sorted(plan.align[j])]
        for pattern in _constraint_patterns(m, sep, align):
            if structural_desired_dim(t, plan, j, pattern, m) >= need[j]:
                modes[j] = pattern
                break
        else:
            return None
    return modes


def _labels_independent(plan: LabelPlan, groups, m: int) -> bool:
    for g in groups:
        if len(g) > m:
            continue
        vecs = [plan.values[lab] for lab in sorted(g)]
        if rank_exact(vecs) != len(vecs):
            return False
    return True


def _scheme_from_plan(t: NetworkTopology, plan: LabelPlan, modes, m: int) -> LinearScheme:
    V = {
        i: tuple(tuple(Fraction(x) for x in plan.values[lab]) for lab in plan.window[i])
        for i in t.users
    }
    return LinearScheme(m, 2, V, dict(modes))


def plan_supports_and_modes(
    t: NetworkTopology,
    a: TopologyAnalysis,
    windows: Mapping[int, Sequence[int]],
    seed: int = 1,
    m: int | None = None,
    target=None,
    max_retries: int | None = None,
) -> tuple[LabelPlan, dict[int, tuple[int, ...]], LinearScheme]:
    """Choose supports, values and mode patterns for a label assignment, verified exactly.

    ``m`` defaults to ``2 delta_min + 3`` and ``target`` to ``n / m`` where
    ``n`` is the common window size.  The first attempt gives separation
    labels two slots and alignment-only labels one slot, packed onto the
    lowest free slots.  Later attempts shuffle the packing and may widen a
    separation support to three slots, which short cycles with conflicts in
    both directions need.  Each attempt screens supports and mode patterns
    by structural rank before drawing values; the drawn scheme must then pass
    exact verification.
    """
    if m is None:
        m = 2 * int(a.delta_min) + 3
    sizes = {len(w) for w in windows.values()}
    if target is None:
        if len(sizes) != 1:
            raise DimensionMismatch("target must be given when window sizes differ")
        target = Fraction(sizes.pop(), m)
    target = Fraction(target)
    if max_retries is None:
        max_retries = default_max_retries()
    for i, w in windows.items():
        if len(set(w)) != len(w) or len(w) > m:
            raise PlanInfeasible(f"window of transmitter {i} has repeated labels or exceeds m")
    need = {j: len(windows[j]) for j in t.users}
    template = collect_constraints(t, windows)
    groups = _label_groups(t, windows)
    reasons = []
    for attempt in range(max_retries):
        rng = np.random.default_rng([seed, 0x5C4E, attempt])
        plan = None
        for _ in range(1 if attempt == 0 else STRUCTURAL_DRAWS):
            candidate = LabelPlan(
                template.labels, template.window, template.label_kind,
                sep=template.sep, align=template.align, attempts=attempt + 1,
            )
            candidate.support = _allocate_supports(
                candidate, groups, m, rng, randomized=attempt > 0, wide=attempt > 0
            )
            modes = _choose_modes(t, candidate, m, need)
            if modes is not None:
                plan = candidate
                break
        if plan is None:
            reasons.append("no support layout passes the structural rank screen")
            continue
        for lab in plan.labels:
            vec = [0] * m
            for s in plan.support[lab]:
                vec[s] = int(rng.integers(1, GAIN_MAX, endpoint=True))
            plan.values[lab] = tuple(vec)
        if not _labels_independent(plan, groups, m):
            reasons.append("dependent label vectors")
            continue
        scheme = _scheme_from_plan(t, plan, modes, m)
        report = verify_scheme(t, scheme, target, seed=seed)
        if report.passed:
            return plan, modes, scheme
        reasons.append(f"verification reached {report.achieved_sym_rate}")
    raise PlanInfeasible(
        f"no valid plan after {max_retries} attempts (last: {reasons[-1] if reasons else 'n/a'})"
    )


def two_coint_windows(a: TopologyAnalysis) -> dict[int, tuple[int, ...]]:
    nbrs = a.graphs.alignment_neighbors()
    delta = int(a.delta_min)
    windows: dict[int, tuple[int, ...]] = {}
    next_label = 0
    for comp in a.alignment_sets:
        w = assign_windows(nbrs, comp, delta, next_label)
        windows.update(w)
        next_label = max(lab for labs in w.values() for lab in labs) + 1
    return windows


def build_two_coint(
    t: NetworkTopology, a: TopologyAnalysis, seed: int = 1, max_retries: int | None = None
) -> tuple[LinearScheme, LabelPlan]:
    cls = classify(a)
    if cls is not TopologyClass.TWO_CO_INTERFERER:
        raise WrongClass(f"two-co-interferer synthesis needs that class, got {cls.value}")
    delta = int(a.delta_min)
    windows = two_coint_windows(a)
    plan, _, scheme = plan_supports_and_modes(
        t, a, windows, seed, m=2 * delta + 3,
        target=Fraction(delta + 1, 2 * delta + 3), max_retries=max_retries,
    )
    return scheme, plan


def synthesize_two_coint(t: NetworkTopology, a: TopologyAnalysis, seed: int = 1) -> LinearScheme:
    cls = classify(a)
    if cls in (TopologyClass.BEST, TopologyClass.INTERFERENCE_FREE):
        return synthesize_half(t, a, seed)
    return build_two_coint(t, a, seed)[0]


def synthesize(t: NetworkTopology, a: TopologyAnalysis, seed: int = 1) -> LinearScheme:
    """Pick the construction matching the topology class."""
    cls = classify(a)
    if cls is TopologyClass.GENERAL:
        raise WrongClass("no construction for topologies with a fork in the alignment graph")
    return synthesize_two_coint(t, a, seed)


def alignment_distance_table(a: TopologyAnalysis) -> dict[int, dict[int, int]]:
    return alignment_distances(a.graphs)
