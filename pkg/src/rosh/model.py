"""Problem model: transport network, jobs, instances, and their metrics.

An instance of the two-machine routing open shop lives on an undirected tree
with integer edge travel times. Two machines start at the depot, each must
process its operation of every job at the job's node (in any order, one
operation of a job at a time), and return to the depot. The makespan of a
schedule is the later of the two machine release times, where a machine's
release time is the completion of its last operation plus the travel time
from that operation's node back to the depot.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import InputError, InternalError, PreconditionError

MACHINES = (1, 2)


@dataclass(frozen=True)
class TreeEdge:
    """Undirected edge with a nonnegative integer travel time."""

    u: str
    v: str
    tau: int

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise InputError(f"edge {self.u!r}-{self.v!r} is a self-loop")
        if not _is_int(self.tau) or self.tau < 0:
            raise InputError(f"edge {self.u!r}-{self.v!r} travel time must be a nonnegative integer")

    @property
    def key(self) -> frozenset[str]:
        return frozenset((self.u, self.v))

    def other(self, node: str) -> str:
        if node == self.u:
            return self.v
        if node == self.v:
            return self.u
        raise InputError(f"node {node!r} is not an endpoint of edge {self.u!r}-{self.v!r}")


@dataclass(frozen=True)
class TreeNetwork:
    """Tree of nodes with a designated depot.

    Construction validates the tree property: exactly ``len(nodes) - 1``
    edges, all endpoints known, no self-loops, and full connectivity.
    """

    nodes: tuple[str, ...]
    edges: tuple[TreeEdge, ...]
    depot: str

    def __post_init__(self) -> None:
        if len(set(self.nodes)) != len(self.nodes):
            raise InputError("duplicate node names")
        if not self.nodes:
            raise InputError("network needs at least one node")
        if self.depot not in self.nodes:
            raise InputError(f"depot {self.depot!r} is not a node")
        if len(self.edges) != len(self.nodes) - 1:
            raise InputError(
                f"a tree on {len(self.nodes)} nodes needs {len(self.nodes) - 1} edges, got {len(self.edges)}"
            )
        known = set(self.nodes)
        seen_keys: set[frozenset[str]] = set()
        for e in self.edges:
            if e.u not in known or e.v not in known:
                raise InputError(f"edge {e.u!r}-{e.v!r} references an unknown node")
            if e.key in seen_keys:
                raise InputError(f"duplicate edge {e.u!r}-{e.v!r}")
            seen_keys.add(e.key)
        # edge count + connectivity together certify acyclicity
        if len(self._depth) != len(self.nodes):
            raise InputError("network is not connected")

    @cached_property
    def _adjacency(self) -> dict[str, dict[str, int]]:
        adj: dict[str, dict[str, int]] = {v: {} for v in self.nodes}
        for e in self.edges:
            adj[e.u][e.v] = e.tau
            adj[e.v][e.u] = e.tau
        return adj

    @cached_property
    def _depth(self) -> dict[str, int]:
        """Travel time from the depot to every reachable node."""
        depth = {self.depot: 0}
        queue = deque([self.depot])
        while queue:
            u = queue.popleft()
            for w, tau in self._adjacency[u].items():
                if w not in depth:
                    depth[w] = depth[u] + tau
                    queue.append(w)
        return depth

    @cached_property
    def _hops(self) -> dict[str, int]:
        hops = {self.depot: 0}
        queue = deque([self.depot])
        while queue:
            u = queue.popleft()
            for w in self._adjacency[u]:
                if w not in hops:
                    hops[w] = hops[u] + 1
                    queue.append(w)
        return hops

    @cached_property
    def _parent(self) -> dict[str, str | None]:
        parent: dict[str, str | None] = {self.depot: None}
        queue = deque([self.depot])
        while queue:
            u = queue.popleft()
            for w in self._adjacency[u]:
                if w not in parent:
                    parent[w] = u
                    queue.append(w)
        return parent

    def require_node(self, v: str) -> None:
        if v not in self._adjacency:
            raise InputError(f"unknown node {v!r}")

    def neighbors(self, v: str) -> dict[str, int]:
        self.require_node(v)
        return dict(self._adjacency[v])

    def degree(self, v: str) -> int:
        self.require_node(v)
        return len(self._adjacency[v])

    def edge_between(self, u: str, v: str) -> TreeEdge:
        self.require_node(u)
        self.require_node(v)
        tau = self._adjacency[u].get(v)
        if tau is None:
            raise InputError(f"no edge between {u!r} and {v!r}")
        return TreeEdge(u, v, tau)

    def depth(self, v: str) -> int:
        """Distance from the depot."""
        self.require_node(v)
        return self._depth[v]

    def parent_of(self, v: str) -> str | None:
        """Neighbor on the path toward the depot; None for the depot itself."""
        self.require_node(v)
        return self._parent[v]

    def distance(self, u: str, v: str) -> int:
        """Travel time along the unique path between two nodes."""
        self.require_node(u)
        self.require_node(v)
        parent = self._parent
        hops = self._hops
        a, b = u, v
        da, db = hops[a], hops[b]
        dist = 0
        while da > db:
            p = parent[a]
            assert p is not None
            dist += self._adjacency[a][p]
            a, da = p, da - 1
        while db > da:
            p = parent[b]
            assert p is not None
            dist += self._adjacency[b][p]
            b, db = p, db - 1
        while a != b:
            pa, pb = parent[a], parent[b]
            assert pa is not None and pb is not None
            dist += self._adjacency[a][pa] + self._adjacency[b][pb]
            a, b = pa, pb
        return dist

    def tsp_optimum(self) -> int:
        """Length of a shortest closed walk from the depot visiting every node.

        On a tree every edge must be crossed twice, so this is exactly
        ``2 * sum(tau)``.
        """
        return 2 * sum(e.tau for e in self.edges)

    def chain_from_depot(self) -> tuple[str, ...]:
        """Node sequence of a chain network, depot first.

        Raises PreconditionError when the network is not a chain with the
        depot at one end.
        """
        if len(self.nodes) == 1:
            return (self.depot,)
        if any(len(self._adjacency[v]) > 2 for v in self.nodes):
            raise PreconditionError("network is not a chain")
        if len(self._adjacency[self.depot]) != 1:
            raise PreconditionError("depot is not an end of the chain")
        order = [self.depot]
        prev: str | None = None
        cur = self.depot
        while True:
            nxt = [w for w in self._adjacency[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            order.append(cur)
        if len(order) != len(self.nodes):
            raise PreconditionError("network is not a chain")
        return tuple(order)


@dataclass(frozen=True)
class Job:
    """One job: its node and the two machine-specific durations."""

    id: str
    node: str
    p1: int
    p2: int

    def __post_init__(self) -> None:
        for p in (self.p1, self.p2):
            if not _is_int(p) or p < 0:
                raise InputError(f"job {self.id!r} durations must be nonnegative integers")

    @property
    def length(self) -> int:
        return self.p1 + self.p2

    def duration(self, machine: int) -> int:
        if machine == 1:
            return self.p1
        if machine == 2:
            return self.p2
        raise InputError(f"unknown machine {machine!r}")


@dataclass(frozen=True)
class InstanceMetrics:
    """Derived quantities of an instance, all integers.

    ``lower_bound`` is the standard bound: the larger of
    ``load_max + tsp_opt`` and ``max_v (node_dmax[v] + 2 * depth(v))``.
    No schedule can beat it, and a schedule meeting it is called normal.
    """

    load1: int
    load2: int
    load_max: int
    job_length: dict[str, int]
    node_load: dict[str, int]
    node_dmax: dict[str, int]
    total_load: int
    tsp_opt: int
    lower_bound: int


@dataclass(frozen=True)
class Instance:
    """Immutable problem instance: a tree network plus jobs pinned to nodes.

    Invariants checked at construction: unique job ids, known nodes,
    nonnegative integer durations, and every non-depot node hosting at
    least one job (a jobless depot is allowed).
    """

    network: TreeNetwork
    jobs: tuple[Job, ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        hosted: set[str] = set()
        for job in self.jobs:
            if job.id in seen:
                raise InputError(f"duplicate job id {job.id!r}")
            seen.add(job.id)
            self.network.require_node(job.node)
            hosted.add(job.node)
        for v in self.network.nodes:
            if v != self.network.depot and v not in hosted:
                raise InputError(f"node {v!r} hosts no job")

    @cached_property
    def _by_id(self) -> dict[str, Job]:
        return {job.id: job for job in self.jobs}

    def job(self, job_id: str) -> Job:
        try:
            return self._by_id[job_id]
        except KeyError:
            raise InputError(f"unknown job {job_id!r}") from None

    @cached_property
    def jobs_at(self) -> dict[str, tuple[Job, ...]]:
        """Jobs per node (all nodes present, instance job order preserved)."""
        at: dict[str, list[Job]] = {v: [] for v in self.network.nodes}
        for job in self.jobs:
            at[job.node].append(job)
        return {v: tuple(js) for v, js in at.items()}

    @cached_property
    def metrics(self) -> InstanceMetrics:
        load1 = sum(j.p1 for j in self.jobs)
        load2 = sum(j.p2 for j in self.jobs)
        load_max = max(load1, load2)
        job_length = {j.id: j.length for j in self.jobs}
        node_load = {v: sum(j.length for j in js) for v, js in self.jobs_at.items()}
        node_dmax = {v: max((j.length for j in js), default=0) for v, js in self.jobs_at.items()}
        tsp_opt = self.network.tsp_optimum()
        bound = load_max + tsp_opt
        for v in self.network.nodes:
            bound = max(bound, node_dmax[v] + 2 * self.network.depth(v))
        total = load1 + load2
        if total > 2 * (bound - tsp_opt):
            raise InternalError("total load exceeds twice the travel-free slack")
        return InstanceMetrics(
            load1=load1,
            load2=load2,
            load_max=load_max,
            job_length=job_length,
            node_load=node_load,
            node_dmax=node_dmax,
            total_load=total,
            tsp_opt=tsp_opt,
            lower_bound=bound,
        )


def _is_int(x: object) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)
