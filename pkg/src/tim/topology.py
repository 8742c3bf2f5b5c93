"""Partially connected K-user interference network topologies.

A topology records, for every receiver ``j``, the set ``I_j`` of transmitters
heard above the noise floor besides its own.  The direct link ``T_j -> R_j``
is always present and never listed.  Indices are 1-based everywhere.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .errors import (
    DuplicateReceiverEntry,
    IndexOutOfRange,
    KTooLarge,
    MalformedDocument,
    SelfInterference,
)

MAX_ENUMERATE_K = 5


@dataclass(frozen=True)
class NetworkTopology:
    K: int
    # interferers[j - 1] is I_j
    interferers: tuple[frozenset[int], ...]

    def __post_init__(self):
        if not isinstance(self.K, int) or isinstance(self.K, bool) or self.K < 1:
            raise MalformedDocument(f"K must be a positive integer, got {self.K!r}")
        if len(self.interferers) != self.K:
            raise MalformedDocument("need exactly one interferer set per receiver")
        for j, I_j in enumerate(self.interferers, start=1):
            for i in I_j:
                if not 1 <= i <= self.K:
                    raise IndexOutOfRange(f"transmitter {i} at receiver {j} not in [1..{self.K}]")
                if i == j:
                    raise SelfInterference(f"receiver {j} lists itself as an interferer")

    @classmethod
    def from_mapping(cls, K: int, interferers: Mapping[int, object]) -> "NetworkTopology":
        for j in interferers:
            if not 1 <= j <= K:
                raise IndexOutOfRange(f"receiver {j} not in [1..{K}]")
        sets = tuple(frozenset(interferers.get(j, ())) for j in range(1, K + 1))
        return cls(K, sets)

    def I(self, j: int) -> frozenset[int]:
        return self.interferers[j - 1]

    @property
    def users(self) -> range:
        return range(1, self.K + 1)

    def links(self) -> Iterator[tuple[int, int]]:
        """Cross links as ``(j, i)`` pairs: transmitter ``i`` heard at receiver ``j``."""
        for j in self.users:
            for i in sorted(self.I(j)):
                yield j, i

    @property
    def has_interference(self) -> bool:
        return any(self.interferers)

    def with_link(self, j: int, i: int) -> "NetworkTopology":
        sets = list(self.interferers)
        sets[j - 1] = sets[j - 1] | {i}
        return NetworkTopology(self.K, tuple(sets))

    def without_link(self, j: int, i: int) -> "NetworkTopology":
        sets = list(self.interferers)
        sets[j - 1] = sets[j - 1] - {i}
        return NetworkTopology(self.K, tuple(sets))

    # serialization ---------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "K": self.K,
            "interferers": {str(j): sorted(self.I(j)) for j in self.users if self.I(j)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    def to_text(self) -> str:
        lines = [f"K {self.K}"]
        for j in self.users:
            if self.I(j):
                lines.append(f"{j} <- " + " ".join(str(i) for i in sorted(self.I(j))))
        return "\n".join(lines) + "\n"


def _reject_duplicate_keys(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise DuplicateReceiverEntry(f"receiver {key} listed twice")
        out[key] = value
    return out


def _as_index(value, what: str) -> int:
    if isinstance(value, bool):
        raise MalformedDocument(f"{what} must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.strip().lstrip("-").isdigit():
        return int(value)
    raise MalformedDocument(f"{what} must be an integer, got {value!r}")


def _parse_json(document: str) -> NetworkTopology:
    try:
        obj = json.loads(document, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "K" not in obj:
        raise MalformedDocument('expected an object with key "K"')
    unknown = set(obj) - {"K", "interferers"}
    if unknown:
        raise MalformedDocument(f"unknown keys: {sorted(unknown)}")
    K = _as_index(obj["K"], "K")
    if K < 1:
        raise MalformedDocument("K must be positive")
    raw = obj.get("interferers", {})
    if not isinstance(raw, dict):
        raise MalformedDocument('"interferers" must be an object')
    mapping: dict[int, set[int]] = {}
    for key, members in raw.items():
        j = _as_index(key, "receiver index")
        if j in mapping:
            raise DuplicateReceiverEntry(f"receiver {j} listed twice")
        if not isinstance(members, list):
            raise MalformedDocument(f"interferers of receiver {j} must be a list")
        mapping[j] = {_as_index(i, "transmitter index") for i in members}
    return NetworkTopology.from_mapping(K, mapping)


def _parse_text(document: str) -> NetworkTopology:
    lines = [ln.split("#", 1)[0].strip() for ln in document.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MalformedDocument("empty document")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "K":
        raise MalformedDocument('first line must be "K <int>"')
    K = _as_index(head[1], "K")
    if K < 1:
        raise MalformedDocument("K must be positive")
    mapping: dict[int, set[int]] = {}
    for ln in lines[1:]:
        if "<-" not in ln:
            raise MalformedDocument(f"expected 'j <- i ...', got {ln!r}")
        lhs, rhs = ln.split("<-", 1)
        j = _as_index(lhs.strip(), "receiver index")
        if j in mapping:
            raise DuplicateReceiverEntry(f"receiver {j} listed twice")
        mapping[j] = {_as_index(tok, "transmitter index") for tok in rhs.split()}
    return NetworkTopology.from_mapping(K, mapping)


def parse_topology(document: str) -> NetworkTopology:
    """Parse either the JSON form or the compact ``K n`` / ``j <- i ...`` text form."""
    if document.startswith("﻿"):
        raise MalformedDocument("byte order mark not allowed")
    stripped = document.lstrip()
    if stripped.startswith("{"):
        return _parse_json(document)
    return _parse_text(document)


def load_topology(path) -> NetworkTopology:
    with open(path, encoding="utf-8") as fh:
        return parse_topology(fh.read())


def cross_pairs(K: int) -> list[tuple[int, int]]:
    return [(j, i) for j in range(1, K + 1) for i in range(1, K + 1) if i != j]


def topology_from_indicator(K: int, bits) -> NetworkTopology:
    mapping: dict[int, set[int]] = {}
    for (j, i), bit in zip(cross_pairs(K), bits):
        if bit:
            mapping.setdefault(j, set()).add(i)
    return NetworkTopology.from_mapping(K, mapping)


def enumerate_topologies(K: int) -> Iterator[NetworkTopology]:
    """Every topology on ``K`` users, ordered lexicographically by link indicator."""
    if K > MAX_ENUMERATE_K:
        raise KTooLarge(f"exhaustive enumeration limited to K <= {MAX_ENUMERATE_K}")
    if K < 1:
        raise MalformedDocument("K must be positive")
    n = K * (K - 1)
    for bits in itertools.product((0, 1), repeat=n):
        yield topology_from_indicator(K, bits)


def random_topology(K: int, density: float, seed: int) -> NetworkTopology:
    if not 0 <= density <= 1:
        raise ValueError("density must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    pairs = cross_pairs(K)
    draws = rng.random(len(pairs))
    return topology_from_indicator(K, [u < density for u in draws])
