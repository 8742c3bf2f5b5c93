"""Upper bound on the linear symmetric DoF and the topology classes it induces."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .graphs import TopologyAnalysis
from .rational import format_fraction, format_term

Term = Union[Fraction, float]  # float only ever math.inf


class TopologyClass(str, enum.Enum):
    INTERFERENCE_FREE = "InterferenceFree"
    BEST = "Best"
    TWO_CO_INTERFERER = "TwoCoInterferer"
    GENERAL = "General"


class BoundCase(str, enum.Enum):
    INTERFERENCE_FREE = "InterferenceFree"
    HALF = "Half"
    BOUNDED = "Bounded"


@dataclass(frozen=True)
class DofBound:
    value: Fraction
    delta_term: Term
    cycle_term: Term
    case: BoundCase

    def to_json_obj(self, cls: TopologyClass = None) -> dict:
        obj = {
            "value": format_fraction(self.value),
            "delta_term": format_term(self.delta_term),
            "cycle_term": format_term(self.cycle_term),
            "case": self.case.value,
        }
        if cls is not None:
            obj["class"] = cls.value
        return obj


def delta_term(delta_min) -> Term:
    if delta_min == math.inf:
        return math.inf
    return Fraction(delta_min + 1, 2 * delta_min + 3)


def cycle_term(L) -> Term:
    if L == math.inf:
        return math.inf
    return Fraction(2 * L, 5 * L + 1)


def is_best_topology(a: TopologyAnalysis) -> bool:
    return max(a.incoming_internal_count.values(), default=0) <= 1


def upper_bound(a: TopologyAnalysis) -> DofBound:
    dt = delta_term(a.delta_min)
    ct = cycle_term(a.L_min_odd)
    if not a.topology.has_interference:
        return DofBound(Fraction(1), dt, ct, BoundCase.INTERFERENCE_FREE)
    if dt == math.inf and ct == math.inf:
        return DofBound(Fraction(1, 2), dt, ct, BoundCase.HALF)
    return DofBound(min(dt, ct), dt, ct, BoundCase.BOUNDED)


def classify(a: TopologyAnalysis) -> TopologyClass:
    if not a.topology.has_interference:
        return TopologyClass.INTERFERENCE_FREE
    if is_best_topology(a):
        return TopologyClass.BEST
    if a.max_co_interferers <= 2:
        return TopologyClass.TWO_CO_INTERFERER
    return TopologyClass.GENERAL
