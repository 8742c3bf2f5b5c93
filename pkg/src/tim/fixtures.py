"""Reference topologies reconstructed from the worked examples.

The exact figure adjacencies are not recoverable, so these are consistent
reconstructions: they reproduce every stated alignment set, internal
conflict, distance and cycle, not the drawings themselves.
"""

from .topology import NetworkTopology

# two alignment sets {1,2}, {3,4}; internal conflicts 1->2 and 3->4
FIXTURE_A = NetworkTopology.from_mapping(4, {1: {3, 4}, 2: {1}, 3: {1, 2}, 4: {3}})

# alignment path 1-2-3 plus {4,5}; vertex 1 receives two internal conflicts
FIXTURE_B = NetworkTopology.from_mapping(5, {1: {2, 3}, 2: {1}, 3: {4, 5}, 4: {1, 2}})

# fork at vertex 1; odd internal conflict cycle 2->4->3->2 heard from T1
FIXTURE_C = NetworkTopology.from_mapping(4, {2: {1, 3}, 3: {1, 4}, 4: {1, 2}})

# triangle {1,2,3} heard together at R4; vertex 1 receives from 2 and 3
TRIANGLE = NetworkTopology.from_mapping(4, {1: {2, 3}, 4: {1, 2, 3}})

# label sharing of the fork example: a..i -> 0..8
FIXTURE_C_WINDOWS = {1: (0, 1, 2), 2: (0, 3, 4), 3: (1, 5, 6), 4: (2, 7, 8)}


def chain(delta: int) -> NetworkTopology:
    """Alignment path 1 - 2 - ... - (delta+2) with delta_min = ``delta``.

    Receiver 1 hears the last two transmitters of the path, whose conflicts
    into 1 have distances ``delta`` and ``delta + 1``.  Every other path edge
    comes from a helper receiver hearing just that pair.
    """
    if delta < 1:
        raise ValueError("delta must be >= 1")
    top = delta + 2
    interferers = {1: {top - 1, top}}
    for v in range(1, top - 1):
        interferers[top + v] = {v, v + 1}
    return NetworkTopology.from_mapping(2 * delta + 2, interferers)
