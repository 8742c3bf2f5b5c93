"""Exact-arithmetic evaluation of the linear DoF a scheme achieves on a topology.

Everything is rank based: the received desired dimension at ``R_j`` is
``rank([A_j B_j]) - rank(A_j)`` with ``A_j`` the stacked interference images
``H_{j,i} V_i`` and ``B_j = H_{j,j} V_j``.  Noise plays no role in a rank
statement and is not modeled.  Channel gains are random integers, so
"almost surely" becomes "in every one of a few independent draws".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Mapping, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, LinkAbsent
from .rational import format_fraction
from .topology import NetworkTopology

if TYPE_CHECKING:
    from .scheme import LinearScheme

GAIN_MAX = 2**20
DEFAULT_TRIALS = 3

Number = Union[int, Fraction]


def _integer_row(row: Sequence[Number]) -> list[int]:
    den = 1
    for x in row:
        if isinstance(x, Fraction):
            den = math.lcm(den, x.denominator)
    return [int(x * den) for x in row]


def rank_exact(rows: Sequence[Sequence[Number]]) -> int:
    """Rank of a rational matrix by fraction-free (Bareiss) elimination.

    Each row is first scaled to integers, which leaves the rank unchanged.
    Pivots are the first nonzero entry at or below the current row.
    """
    M = [_integer_row(r) for r in rows]
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if M[r][col] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][col]
        top = M[rank]
        for r in range(rank + 1, nrows):
            row = M[r]
            f = row[col]
            for c in range(col + 1, ncols):
                # exact by Sylvester's determinant identity
                row[c] = (p * row[c] - f * top[c]) // prev
            row[col] = 0
        prev = p
        rank += 1
    return rank


@dataclass(frozen=True)
class ChannelRealization:
    num_modes: int
    gains: Mapping[tuple[int, int, int], Number]

    def gain(self, j: int, i: int, mode: int) -> Number:
        try:
            return self.gains[(j, i, mode)]
        except KeyError:
            raise LinkAbsent(f"no gain for receiver {j}, transmitter {i}, mode {mode}") from None


def draw_channels(t: NetworkTopology, num_modes: int, seed) -> ChannelRealization:
    """Independent uniform integer gains in ``[1, 2**20]`` for every present link and mode."""
    if num_modes < 1:
        raise ValueError("num_modes must be >= 1")
    rng = np.random.default_rng(seed)
    gains = {}
    for j in t.users:
        for i in sorted(t.I(j) | {j}):
            for mode in range(1, num_modes + 1):
                gains[(j, i, mode)] = int(rng.integers(1, GAIN_MAX, endpoint=True))
    return ChannelRealization(num_modes, gains)


def channel_diagonal(j: int, i: int, scheme: "LinearScheme", ch: ChannelRealization) -> list[Number]:
    return [ch.gain(j, i, mode) for mode in scheme.L[j]]


def channel_matrix(j: int, i: int, scheme: "LinearScheme", ch: ChannelRealization) -> list[list[Number]]:
    diag = channel_diagonal(j, i, scheme, ch)
    m = len(diag)
    return [[diag[r] if r == c else 0 for c in range(m)] for r in range(m)]


def check_dimensions(t: NetworkTopology, scheme: "LinearScheme") -> None:
    m = scheme.m
    if set(scheme.V) != set(t.users) or set(scheme.L) != set(t.users):
        raise DimensionMismatch("scheme must define V_i and L_j for every user of the topology")
    for i, cols in scheme.V.items():
        if len(cols) > m or any(len(c) != m for c in cols):
            raise DimensionMismatch(f"V_{i} must be m x n_i with n_i <= m = {m}")
    for j, pattern in scheme.L.items():
        if len(pattern) != m:
            raise DimensionMismatch(f"L_{j} must have length m = {m}")
        if any(not 1 <= mode <= scheme.num_modes for mode in pattern):
            raise DimensionMismatch(f"L_{j} uses a mode outside [1..{scheme.num_modes}]")


def _received(j: int, i: int, scheme: "LinearScheme", ch: ChannelRealization) -> list[list[Number]]:
    diag = channel_diagonal(j, i, scheme, ch)
    return [[d * x for d, x in zip(diag, col)] for col in scheme.V[i]]


def receiver_ranks(j: int, t: NetworkTopology, scheme: "LinearScheme", ch: ChannelRealization) -> tuple[int, int]:
    """``(rank(A_j), rank([A_j B_j]))`` at receiver ``j``."""
    A = [col for i in sorted(t.I(j)) for col in _received(j, i, scheme, ch)]
    B = _received(j, j, scheme, ch)
    # column vectors passed as rows: rank is transpose invariant
    return rank_exact(A), rank_exact(A + B)


def projected_desired_dim(j: int, t: NetworkTopology, scheme: "LinearScheme", ch: ChannelRealization) -> int:
    check_dimensions(t, scheme)
    rank_a, rank_ab = receiver_ranks(j, t, scheme, ch)
    return rank_ab - rank_a


@dataclass
class VerificationReport:
    per_receiver_dim: dict[int, int]
    achieved_sym_rate: Fraction
    trials: int
    seed: int
    target: Fraction
    passed: bool
    m: int
    # per trial, per receiver: (rank A_j, rank [A_j B_j])
    diagnostics: list[dict[int, tuple[int, int]]] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "pass": self.passed,
            "achieved": format_fraction(self.achieved_sym_rate),
            "per_receiver": {str(j): d for j, d in sorted(self.per_receiver_dim.items())},
            "trials": self.trials,
            "seed": self.seed,
            "target": format_fraction(self.target),
            "m": self.m,
            "noise": "ignored (rank-based verification)",
        }


def verify_scheme(
    t: NetworkTopology,
    scheme: "LinearScheme",
    target_rate,
    trials: int = DEFAULT_TRIALS,
    seed: int = 1,
) -> VerificationReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    check_dimensions(t, scheme)
    target = Fraction(target_rate)
    per_receiver = {j: scheme.n(j) for j in t.users}
    diagnostics = []
    passed = True
    for trial in range(trials):
        ch = draw_channels(t, scheme.num_modes, [seed, trial])
        ranks = {j: receiver_ranks(j, t, scheme, ch) for j in t.users}
        diagnostics.append(ranks)
        dims = {j: ab - a for j, (a, ab) in ranks.items()}
        for j, d in dims.items():
            per_receiver[j] = min(per_receiver[j], d)
        if Fraction(min(dims.values()), scheme.m) < target:
            passed = False
    achieved = Fraction(min(per_receiver.values()), scheme.m)
    return VerificationReport(per_receiver, achieved, trials, seed, target, passed, scheme.m, diagnostics)
