from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tim.bounds import TopologyClass, classify
from tim.errors import NotBestTopology, NotPathOrCycle, PlanInfeasible, WrongClass
from tim.fixtures import FIXTURE_A, FIXTURE_B, FIXTURE_C, FIXTURE_C_WINDOWS, TRIANGLE, chain
from tim.graphs import alignment_distances, analyze
from tim.scheme import (
    LabelKind,
    LinearScheme,
    assign_windows,
    build_two_coint,
    default_max_retries,
    has_full_column_rank,
    label_name,
    parse_scheme,
    plan_supports_and_modes,
    solve_mode_pattern,
    synthesize,
    synthesize_half,
    synthesize_two_coint,
)
from tim.topology import NetworkTopology, enumerate_topologies, random_topology
from tim.verify import draw_channels, projected_desired_dim, rank_exact, verify_scheme

import sympy_oracle


def parallel(u, v):
    return rank_exact([u, v]) == 1


def test_half_scheme_fixture_a():
    s = synthesize_half(FIXTURE_A, analyze(FIXTURE_A), seed=1)
    assert s.m == 2 and all(s.n(i) == 1 for i in FIXTURE_A.users)
    v = {i: s.V[i][0] for i in FIXTURE_A.users}
    assert parallel(v[1], v[2]) and parallel(v[3], v[4])
    assert not parallel(v[1], v[3])
    assert s.L == {1: (1, 1), 2: (1, 2), 3: (1, 1), 4: (1, 2)}


def test_half_scheme_interference_free():
    t = NetworkTopology.from_mapping(3, {})
    s = synthesize_half(t, analyze(t))
    assert s.m == 2
    assert all(p == (1, 1) for p in s.L.values())
    assert verify_scheme(t, s, Fraction(1, 2)).passed


def test_half_scheme_rejects_non_best():
    with pytest.raises(NotBestTopology):
        synthesize_half(FIXTURE_C, analyze(FIXTURE_C))
    with pytest.raises(NotBestTopology):
        synthesize_half(FIXTURE_B, analyze(FIXTURE_B))


def nbrs_of(t):
    return analyze(t).graphs.alignment_neighbors()


def test_windows_on_fixture_b_path():
    w = assign_windows(nbrs_of(FIXTURE_B), {1, 2, 3}, 1)
    named = {v: "".join(label_name(x) for x in labs) for v, labs in w.items()}
    assert named == {1: "ab", 2: "bc", 3: "cd"}


def test_windows_on_four_cycle():
    nbrs = {1: {2, 4}, 2: {1, 3}, 3: {2, 4}, 4: {3, 1}}
    w = assign_windows(nbrs, {1, 2, 3, 4}, 1)
    assert w == {1: (0, 1), 2: (1, 2), 3: (2, 3), 4: (3, 0)}


def test_windows_singleton_and_offset():
    assert assign_windows({7: set()}, {7}, 1) == {7: (0, 1)}
    assert assign_windows({7: set()}, {7}, 2, first_label=5) == {7: (5, 6, 7)}


def test_windows_orientation_from_smaller_end():
    nbrs = {5: {2}, 2: {5, 9}, 9: {2}}
    assert assign_windows(nbrs, {2, 5, 9}, 1) == {5: (0, 1), 2: (1, 2), 9: (2, 3)}


def test_windows_reject_fork():
    with pytest.raises(NotPathOrCycle):
        assign_windows(nbrs_of(FIXTURE_C), {1, 2, 3, 4}, 1)


def test_label_names():
    assert [label_name(x) for x in (0, 1, 25, 26, 27)] == ["a", "b", "z", "aa", "ab"]


def test_fixture_b_plan():
    scheme, plan = build_two_coint(FIXTURE_B, analyze(FIXTURE_B), seed=7)
    assert scheme.m == 5 and all(scheme.n(i) == 2 for i in FIXTURE_B.users)
    # path 1-2-3 holds a,b | b,c | c,d
    b, c = 1, 2
    assert plan.label_kind[b] is LabelKind.SEPARATE_REQUIRED
    assert plan.label_kind[c] is LabelKind.ALIGN_ONLY
    assert len(plan.support[b]) == 2 and len(plan.support[c]) == 1
    for j in (1, 2):
        assert len({scheme.L[j][s] for s in plan.support[b]}) == 2
    assert scheme.L[1] == scheme.L[2]
    assert verify_scheme(FIXTURE_B, scheme, Fraction(2, 5), seed=3).passed


def test_fixture_c_label_sharing_plan():
    a = analyze(FIXTURE_C)
    plan, modes, scheme = plan_supports_and_modes(
        FIXTURE_C, a, FIXTURE_C_WINDOWS, seed=1, m=8, target=Fraction(3, 8)
    )
    assert {lab: plan.support[lab] for lab in (0, 1, 2)} == {0: (0, 1), 1: (2, 3), 2: (4, 5)}
    assert modes[2] == (1, 2, 1, 1, 1, 1, 1, 1)
    assert modes[3] == (1, 1, 1, 2, 1, 1, 1, 1)
    assert modes[4] == (1, 1, 1, 1, 1, 2, 1, 1)
    assert len(set(modes[1])) == 1
    rep = verify_scheme(FIXTURE_C, scheme, Fraction(3, 8))
    assert rep.passed and rep.per_receiver_dim == {j: 3 for j in FIXTURE_C.users}


def test_triangle_windows_and_outside_receiver():
    a = analyze(TRIANGLE)
    assert classify(a) is TopologyClass.TWO_CO_INTERFERER
    scheme, plan = build_two_coint(TRIANGLE, a, seed=1)
    assert plan.window == {1: (0, 1), 2: (1, 2), 3: (2, 0), 4: (3, 4)}
    assert verify_scheme(TRIANGLE, scheme, Fraction(2, 5)).passed
    ch = draw_channels(TRIANGLE, 2, seed=4)
    interference = [
        [ch.gain(4, i, mode) * x for mode, x in zip(scheme.L[4], col)]
        for i in (1, 2, 3) for col in scheme.V[i]
    ]
    assert rank_exact(interference) <= 3


@pytest.mark.parametrize("delta", [1, 2, 3])
def test_chain_schemes(delta):
    t = chain(delta)
    s = synthesize_two_coint(t, analyze(t), seed=delta)
    assert s.m == 2 * delta + 3
    assert all(s.n(i) == delta + 1 for i in t.users)
    assert verify_scheme(t, s, Fraction(delta + 1, 2 * delta + 3), seed=11).passed


@pytest.mark.parametrize("delta", [1, 2, 3])
def test_path_intersections_shrink_with_distance(delta):
    t = chain(delta)
    a = analyze(t)
    s, _ = build_two_coint(t, a, seed=2)
    dist = alignment_distances(a.graphs)
    path = sorted(a.set_of(1))
    for p in path:
        for r in path:
            d = dist[p][r]
            if 0 < d <= delta:
                got = sympy_oracle.intersection_dimension(s.V[p], s.V[r], s.m)
                assert got == delta + 1 - d


def test_delegation_and_class_errors():
    half = synthesize_two_coint(FIXTURE_A, analyze(FIXTURE_A))
    assert half.m == 2
    with pytest.raises(WrongClass):
        build_two_coint(FIXTURE_A, analyze(FIXTURE_A))
    with pytest.raises(WrongClass):
        synthesize(FIXTURE_C, analyze(FIXTURE_C))
    assert synthesize(FIXTURE_B, analyze(FIXTURE_B)).m == 5


def test_oversized_window_is_infeasible():
    with pytest.raises(PlanInfeasible):
        plan_supports_and_modes(FIXTURE_B, analyze(FIXTURE_B), {j: (0, 1, 2) for j in range(1, 6)},
                                m=2, target=Fraction(1, 2), max_retries=1)


def test_retry_budget_env(monkeypatch):
    monkeypatch.delenv("TIM_MAX_RETRIES", raising=False)
    assert default_max_retries() == 32
    monkeypatch.setenv("TIM_MAX_RETRIES", "5")
    assert default_max_retries() == 5


def test_mode_pattern_solver():
    assert solve_mode_pattern(5, [(1, 2)], [(3,)]) == (1, 1, 2, 1, 1)
    assert solve_mode_pattern(3, [(0, 1)], [(0, 1)]) is None
    assert solve_mode_pattern(3, [], []) == (1, 1, 1)


def synthesized_corpus():
    """Every two-co-interferer topology on 3 users plus a seeded sample on 5-7 users."""
    ts = [t for t in enumerate_topologies(3)]
    rng = np.random.default_rng(5)
    for _ in range(60):
        ts.append(random_topology(int(rng.integers(5, 8)), 0.2, int(rng.integers(2**32))))
    for t in ts:
        a = analyze(t)
        if classify(a) is TopologyClass.TWO_CO_INTERFERER:
            yield t, a


def test_structural_invariants_of_synthesized_schemes():
    count = 0
    for t, a in synthesized_corpus():
        scheme, plan = build_two_coint(t, a, seed=1)
        count += 1
        delta = int(a.delta_min)
        assert scheme.m == 2 * delta + 3
        for lab, kind in plan.label_kind.items():
            if kind is LabelKind.SEPARATE_REQUIRED:
                assert len(plan.support[lab]) >= 2
            holders = {v for v, w in plan.window.items() if lab in w}
            assert len({a.set_of(v) for v in holders}) == 1
        for j, pattern in scheme.L.items():
            assert len(set(pattern)) <= 2
            assert len(pattern) == scheme.m
            for lab in plan.sep[j]:
                assert len({pattern[s] for s in plan.support[lab]}) == 2
            for lab in plan.align[j]:
                assert len({pattern[s] for s in plan.support[lab]}) == 1
        assert all(has_full_column_rank(scheme, i) for i in t.users)
    assert count > 10


def test_scheme_json_round_trip():
    s = synthesize_two_coint(FIXTURE_B, analyze(FIXTURE_B), seed=7)
    assert parse_scheme(s.to_json()) == s
    obj = s.to_json_obj()
    assert set(obj) == {"m", "num_modes", "beamforming", "mode_patterns"}
    assert all("/" in x for cols in obj["beamforming"].values() for col in cols for x in col)


@given(
    st.integers(1, 4).flatmap(lambda m: st.tuples(
        st.just(m),
        st.dictionaries(st.integers(1, 4), st.lists(
            st.lists(st.fractions(max_denominator=50), min_size=m, max_size=m).map(tuple),
            min_size=1, max_size=m).map(tuple), min_size=1, max_size=4),
        st.lists(st.integers(1, 3), min_size=m, max_size=m).map(tuple),
    ))
)
def test_scheme_json_round_trip_property(args):
    m, V, pattern = args
    s = LinearScheme(m, 3, V, {j: pattern for j in V})
    assert parse_scheme(s.to_json()) == s
    assert parse_scheme(s.to_json()).to_json() == s.to_json()
