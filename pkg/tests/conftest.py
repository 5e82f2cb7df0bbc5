"""Shared fixtures: canned instances, builders, and hypothesis strategies."""

from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from rosh.model import Instance, Job, TreeEdge, TreeNetwork

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

DATA = Path(__file__).parent / "data"

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[num]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict} - {detail}")


def mk_chain(taus, depot_index=0):
    """Chain network v0 - v1 - ... with the given edge travel times."""
    nodes = tuple(f"v{i}" for i in range(len(taus) + 1))
    edges = tuple(TreeEdge(f"v{i}", f"v{i + 1}", t) for i, t in enumerate(taus))
    return TreeNetwork(nodes=nodes, edges=edges, depot=nodes[depot_index])


def mk_instance(net, jobs):
    """Jobs given as (id, node, p1, p2) tuples."""
    return Instance(network=net, jobs=tuple(Job(*j) for j in jobs))


def sample_instance() -> Instance:
    net = TreeNetwork(
        nodes=("v0", "v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8"),
        edges=(
            TreeEdge("v1", "v2", 1),
            TreeEdge("v2", "v0", 1),
            TreeEdge("v0", "v3", 2),
            TreeEdge("v0", "v4", 2),
            TreeEdge("v4", "v5", 3),
            TreeEdge("v4", "v6", 1),
            TreeEdge("v6", "v7", 2),
            TreeEdge("v6", "v8", 2),
        ),
        depot="v0",
    )
    jobs = (
        Job("1", "v0", 1, 2),
        Job("2", "v0", 3, 4),
        Job("3", "v1", 4, 1),
        Job("4", "v2", 1, 1),
        Job("5", "v2", 1, 1),
        Job("6", "v2", 1, 1),
        Job("7", "v3", 2, 1),
        Job("8", "v4", 5, 2),
        Job("9", "v4", 1, 1),
        Job("10", "v5", 2, 1),
        Job("11", "v6", 3, 2),
        Job("12", "v7", 1, 4),
        Job("13", "v8", 2, 3),
        Job("14", "v8", 1, 5),
    )
    return Instance(network=net, jobs=jobs)


@pytest.fixture
def sample() -> Instance:
    return sample_instance()


@pytest.fixture
def sample_path() -> Path:
    return DATA / "sample.json"


def overloaded_edge_instance() -> Instance:
    """Two-node chain whose far job cannot fit through the pendant edge."""
    return mk_instance(mk_chain([1]), [("a", "v0", 1, 1), ("b", "v1", 10, 10)])


def three_job_instance() -> Instance:
    """Chain whose far node carries three jobs forming an irreducible split."""
    return mk_instance(
        mk_chain([1]),
        [("J0", "v0", 1, 1), ("Ja", "v1", 2, 3), ("Jb", "v1", 3, 3), ("Jc", "v1", 3, 2)],
    )


def open_shop_triple() -> Instance:
    net = TreeNetwork(nodes=("v0",), edges=(), depot="v0")
    return mk_instance(net, [("x", "v0", 3, 1), ("y", "v0", 1, 3), ("z", "v0", 2, 2)])


@pytest.fixture
def oe1() -> Instance:
    return overloaded_edge_instance()


@pytest.fixture
def tj1() -> Instance:
    return three_job_instance()


@pytest.fixture
def gs_triple() -> Instance:
    return open_shop_triple()


def floyd_distances(net: TreeNetwork) -> dict[tuple[str, str], int]:
    """Independent all-pairs travel times for checking TreeNetwork.distance."""
    inf = float("inf")
    nodes = net.nodes
    dist = {(u, v): 0 if u == v else inf for u in nodes for v in nodes}
    for e in net.edges:
        dist[(e.u, e.v)] = dist[(e.v, e.u)] = e.tau
    for k in nodes:
        for u in nodes:
            for v in nodes:
                through = dist[(u, k)] + dist[(k, v)]
                if through < dist[(u, v)]:
                    dist[(u, v)] = through
    return dist


@st.composite
def tree_networks(draw, max_nodes=5, max_tau=3):
    n = draw(st.integers(min_value=1, max_value=max_nodes))
    nodes = tuple(f"v{i}" for i in range(n))
    edges = []
    for i in range(1, n):
        parent = draw(st.integers(min_value=0, max_value=i - 1))
        tau = draw(st.integers(min_value=0, max_value=max_tau))
        edges.append(TreeEdge(f"v{parent}", f"v{i}", tau))
    return TreeNetwork(nodes=nodes, edges=tuple(edges), depot="v0")


@st.composite
def small_instances(draw, max_nodes=5, max_tau=3, max_jobs_per_node=2, max_p=6):
    """Valid instances: every non-depot node hosts at least one job."""
    net = draw(tree_networks(max_nodes=max_nodes, max_tau=max_tau))
    jobs = []
    counter = 1
    for v in net.nodes:
        low = 0 if v == net.depot else 1
        count = draw(st.integers(min_value=low, max_value=max_jobs_per_node))
        for _ in range(count):
            p1 = draw(st.integers(min_value=0, max_value=max_p))
            p2 = draw(st.integers(min_value=0, max_value=max_p))
            jobs.append(Job(f"J{counter}", v, p1, p2))
            counter += 1
    return Instance(network=net, jobs=tuple(jobs))
