import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tim.fixtures import FIXTURE_A, FIXTURE_B, FIXTURE_C
from tim.topology import NetworkTopology

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def topologies(draw, min_k=1, max_k=6):
    K = draw(st.integers(min_k, max_k))
    interferers = {}
    for j in range(1, K + 1):
        others = [i for i in range(1, K + 1) if i != j]
        interferers[j] = draw(st.sets(st.sampled_from(others))) if others else set()
    return NetworkTopology.from_mapping(K, interferers)


@pytest.fixture
def fixture_a():
    return FIXTURE_A


@pytest.fixture
def fixture_b():
    return FIXTURE_B


@pytest.fixture
def fixture_c():
    return FIXTURE_C


@pytest.fixture
def topology_files(tmp_path):
    paths = {}
    for name, t in (("a", FIXTURE_A), ("b", FIXTURE_B), ("c", FIXTURE_C)):
        p = tmp_path / f"fixture_{name}.json"
        p.write_text(t.to_json(), encoding="utf-8")
        paths[name] = p
    return paths


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
