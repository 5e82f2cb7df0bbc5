"""Instance reduction toward an irreducible chain.

Reduction applies two transformations that preserve the lower bound and the
total weight of the instance:

* aggregation replaces a set of jobs at one node by a single job with the
  summed durations (valid while the combined length fits the node's budget,
  ``lower_bound - 2 * depth(v)``);
* contraction removes a terminal node whose single job fits through the
  pendant edge, moving the job to the neighbor with both durations grown by
  twice the edge travel time.

The driver runs aggregation everywhere, contracts underloaded pendant edges
until each remaining terminal is blocked, then splits the job set of the at
most one overloaded node into at most three aggregable groups. The result is
a single node or a chain hanging off the depot whose far terminal carries the
single overloaded object; a trace of the steps supports expanding any
schedule of the reduced instance back to the original one.
"""

from __future__ import annotations

import enum
import functools
import re
from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import InputError, InternalError, PreconditionError, ValidityError
from .model import Instance, Job, TreeEdge, TreeNetwork
from .schedule import Schedule, ScheduleEntry, machine_releases


class OutcomeKind(str, enum.Enum):
    SINGLE_NODE = "SingleNode"
    OVERLOADED_NODE_TWO_JOBS = "OverloadedNodeTwoJobs"
    OVERLOADED_NODE_THREE_JOBS = "OverloadedNodeThreeJobs"
    OVERLOADED_EDGE = "OverloadedEdge"


@dataclass(frozen=True)
class Outcome:
    """Shape of the reduced instance.

    ``node_jobs`` lists the job ids sitting at the overloaded node, so a
    guarded aggregation leaving more than three jobs there is visible (such
    instances are tagged OVERLOADED_NODE_TWO_JOBS, the bucket without a
    normality guarantee).
    """

    kind: OutcomeKind
    overloaded_node: str | None
    overloaded_edge: tuple[str, str] | None
    node_jobs: tuple[str, ...]
    partition_used: str | None


@dataclass(frozen=True)
class AggregateStep:
    node: str
    merged: tuple[str, ...]
    durations: tuple[tuple[int, int], ...]
    new_id: str


@dataclass(frozen=True)
class ContractStep:
    u: str
    v: str
    tau: int
    job: str
    durations_after: tuple[int, int]


Step = AggregateStep | ContractStep


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[Step, ...]


@dataclass(frozen=True)
class OverloadStatus:
    """Census of overloaded objects (at most one exists, see the invariants)."""

    nodes: tuple[str, ...]
    edges: tuple[TreeEdge, ...]

    @property
    def count(self) -> int:
        return len(self.nodes) + len(self.edges)


def node_budget(inst: Instance, v: str) -> int:
    """Largest combined length a single node may carry without raising the bound."""
    return inst.metrics.lower_bound - 2 * inst.network.depth(v)


def is_node_overloaded(inst: Instance, v: str) -> bool:
    inst.network.require_node(v)
    return inst.metrics.node_load[v] > node_budget(inst, v)


def is_edge_overloaded(inst: Instance, edge: TreeEdge) -> bool | None:
    """Overload state of a pendant edge, or None when the notion does not apply.

    The predicate is defined for an edge whose far endpoint is a non-depot
    terminal holding exactly one job: contraction would then create a job of
    length ``d + 4 tau``, which must fit the near endpoint's budget.
    """
    net = inst.network
    actual = net.edge_between(edge.u, edge.v)
    if actual.tau != edge.tau:
        raise InputError(f"edge {edge.u!r}-{edge.v!r} has travel time {actual.tau}, not {edge.tau}")
    far = _far_endpoint(net, edge)
    if far == net.depot or net.degree(far) != 1:
        return None
    jobs = inst.jobs_at[far]
    if len(jobs) != 1:
        return None
    near = edge.other(far)
    return jobs[0].length + 4 * edge.tau > node_budget(inst, near)


def overload_census(inst: Instance) -> OverloadStatus:
    nodes = tuple(v for v in inst.network.nodes if is_node_overloaded(inst, v))
    edges = tuple(e for e in inst.network.edges if is_edge_overloaded(inst, e) is True)
    return OverloadStatus(nodes=nodes, edges=edges)


def _far_endpoint(net: TreeNetwork, edge: TreeEdge) -> str:
    return edge.u if net.parent_of(edge.u) == edge.v else edge.v


_DIGIT_RUNS = re.compile(r"(\d+)")


@functools.lru_cache(maxsize=65536)
def _natural_key(s: str):
    return tuple(int(part) if part.isdigit() else part for part in _DIGIT_RUNS.split(s))


def merged_id(ids: Sequence[str]) -> str:
    """Combined id for an aggregated job: every constituent id, natural order.

    Ids of previously merged jobs are split back into their atoms so the
    result reads the same however the merges were nested.
    """
    atoms = [atom for composite in ids for atom in composite.split(",")]
    return ",".join(sorted(atoms, key=_natural_key))


def aggregate(
    inst: Instance, v: str, job_ids: Sequence[str], allow_invalid: bool = False
) -> tuple[Instance, AggregateStep]:
    """Merge the given jobs at node ``v`` into one job with summed durations.

    Valid only while the combined length fits the node budget; pass
    ``allow_invalid`` to override (the lower bound of the result may then be
    larger). Constituents are recorded in instance job order, which is the
    order expansion uses to split the merged intervals back apart.
    """
    inst.network.require_node(v)
    wanted = set(job_ids)
    if len(wanted) != len(job_ids):
        raise InputError("duplicate job ids in aggregation set")
    if len(wanted) < 2:
        raise InputError("aggregation needs at least two jobs")
    for job_id in job_ids:
        if inst.job(job_id).node != v:
            raise InputError(f"job {job_id!r} is not at node {v!r}")
    chosen = [j for j in inst.jobs if j.id in wanted]
    total = sum(j.length for j in chosen)
    if not allow_invalid and total > node_budget(inst, v):
        raise ValidityError(
            f"aggregating {sorted(wanted)} at {v!r} gives length {total}, over the budget {node_budget(inst, v)}"
        )
    new = Job(
        id=merged_id([j.id for j in chosen]),
        node=v,
        p1=sum(j.p1 for j in chosen),
        p2=sum(j.p2 for j in chosen),
    )
    jobs: list[Job] = []
    placed = False
    for j in inst.jobs:
        if j.id in wanted:
            if not placed:
                jobs.append(new)
                placed = True
        else:
            jobs.append(j)
    step = AggregateStep(
        node=v,
        merged=tuple(j.id for j in chosen),
        durations=tuple((j.p1, j.p2) for j in chosen),
        new_id=new.id,
    )
    return Instance(network=inst.network, jobs=tuple(jobs)), step


def contract(inst: Instance, edge: TreeEdge) -> tuple[Instance, ContractStep]:
    """Remove the terminal far endpoint of an underloaded pendant edge.

    The single job there moves to the near endpoint with both durations grown
    by ``2 tau`` (the machine detour it absorbs). Contracting an overloaded
    edge raises ValidityError; an edge the predicate does not apply to raises
    PreconditionError.
    """
    net = inst.network
    state = is_edge_overloaded(inst, edge)
    if state is None:
        raise PreconditionError(
            f"edge {edge.u!r}-{edge.v!r} is not a pendant edge with a single far job"
        )
    if state:
        raise ValidityError(f"edge {edge.u!r}-{edge.v!r} is overloaded")
    far = _far_endpoint(net, edge)
    near = edge.other(far)
    moved = inst.jobs_at[far][0]
    new_net = TreeNetwork(
        nodes=tuple(n for n in net.nodes if n != far),
        edges=tuple(e for e in net.edges if far not in (e.u, e.v)),
        depot=net.depot,
    )
    new_job = Job(id=moved.id, node=near, p1=moved.p1 + 2 * edge.tau, p2=moved.p2 + 2 * edge.tau)
    jobs = tuple(new_job if j.id == moved.id else j for j in inst.jobs)
    step = ContractStep(
        u=near, v=far, tau=edge.tau, job=moved.id, durations_after=(new_job.p1, new_job.p2)
    )
    return Instance(network=new_net, jobs=jobs), step


def partition_v1(inst: Instance, v: str) -> tuple[tuple[str, ...], ...]:
    """Split the jobs at ``v`` into three groups by prefix thresholds.

    Applicable when the node has at least three jobs, all of length at most
    half the budget. The first group is the shortest prefix exceeding half
    the budget, the second the shortest following prefix exceeding what the
    first left of the budget, the third the rest. Missing cut points raise
    PreconditionError.
    """
    jobs = inst.jobs_at[v]
    bound = node_budget(inst, v)
    parts = _partition_first_fit([j.length for j in jobs], bound)
    return tuple(tuple(jobs[i].id for i in part) for part in parts)


def _partition_first_fit(lengths: Sequence[int], bound: int) -> tuple[list[int], list[int], list[int]]:
    k = len(lengths)
    if k < 3:
        raise PreconditionError("partition needs at least three jobs")
    for d in lengths:
        if 2 * d > bound:
            raise PreconditionError("a job longer than half the budget is present")
    prefix = lengths[0]
    x = None
    for i in range(1, k):
        prefix += lengths[i]
        if 2 * prefix > bound:
            x = i + 1
            break
    if x is None:
        raise PreconditionError("no prefix exceeds half the budget")
    first_weight = prefix
    remainder = bound - first_weight
    run = 0
    y = None
    for i in range(x, k):
        run += lengths[i]
        if run > remainder:
            y = i + 1
            break
    if y is None:
        raise PreconditionError("no second group exceeds the leftover budget")
    return list(range(x)), list(range(x, y)), list(range(y, k))


def partition_v2(inst: Instance, v: str) -> tuple[tuple[str, ...], ...]:
    """Total splitting procedure for an overloaded node.

    Jobs longer than half the budget move to the front first; thresholds are
    half of (budget + longest length) and its complement. Runs on any
    overloaded node and never fails; groups may come back empty.
    """
    if not is_node_overloaded(inst, v):
        raise PreconditionError(f"node {v!r} is not overloaded")
    jobs = inst.jobs_at[v]
    bound = node_budget(inst, v)
    dmax = max(j.length for j in jobs)
    parts = _partition_total([j.length for j in jobs], bound, dmax)
    return tuple(tuple(jobs[i].id for i in part) for part in parts)


def _partition_total(
    lengths: Sequence[int], bound: int, dmax: int
) -> tuple[list[int], list[int], list[int]]:
    k = len(lengths)
    order = [i for i in range(k) if 2 * lengths[i] > bound]
    order += [i for i in range(k) if 2 * lengths[i] <= bound]
    prefix = lengths[order[0]]
    x = None
    for pos in range(1, k):
        prefix += lengths[order[pos]]
        if 2 * prefix > bound + dmax:
            x = pos + 1
            break
    if x is None or x == k:
        return order, [], []
    first_weight = prefix
    remainder = bound + dmax - first_weight
    run = 0
    y = k
    for pos in range(x, k):
        run += lengths[order[pos]]
        if run > remainder:
            y = pos + 1
            break
    return order[:x], order[x:y], order[y:]


class _WJob:
    __slots__ = ("id", "p1", "p2")

    def __init__(self, id: str, p1: int, p2: int):
        self.id = id
        self.p1 = p1
        self.p2 = p2

    @property
    def length(self) -> int:
        return self.p1 + self.p2


Observer = Callable[[Step, Instance], None]


def reduce_instance(
    inst: Instance, observer: Observer | None = None
) -> tuple[Instance, ReductionTrace, Outcome]:
    """Run the full reduction and classify the result.

    ``observer`` (tests only: it materializes a full snapshot instance per
    step) is called after every aggregation and contraction. The lower bound
    and total weight of the instance are preserved throughout; the trace
    contains no aggregation over budget and no contraction of an overloaded
    edge.
    """
    net = inst.network
    rbar = inst.metrics.lower_bound
    depot = net.depot
    depth = {v: net.depth(v) for v in net.nodes}
    adj: dict[str, dict[str, int]] = {v: dict(net.neighbors(v)) for v in net.nodes}
    jobs_at: dict[str, list[_WJob]] = {
        v: [_WJob(j.id, j.p1, j.p2) for j in js] for v, js in inst.jobs_at.items()
    }
    delta = {v: sum(w.length for w in ws) for v, ws in jobs_at.items()}
    steps: list[Step] = []

    def budget(v: str) -> int:
        return rbar - 2 * depth[v]

    def snapshot() -> Instance:
        return Instance(
            network=TreeNetwork(
                nodes=tuple(v for v in net.nodes if v in adj),
                edges=tuple(e for e in net.edges if e.u in adj and e.v in adj),
                depot=depot,
            ),
            jobs=tuple(
                Job(w.id, v, w.p1, w.p2) for v in net.nodes if v in adj for w in jobs_at[v]
            ),
        )

    def record(step: Step) -> None:
        steps.append(step)
        if observer is not None:
            observer(step, snapshot())

    def merge(v: str, chosen: list[_WJob]) -> None:
        if len(chosen) < 2:
            return
        new = _WJob(
            merged_id([w.id for w in chosen]),
            sum(w.p1 for w in chosen),
            sum(w.p2 for w in chosen),
        )
        step = AggregateStep(
            node=v,
            merged=tuple(w.id for w in chosen),
            durations=tuple((w.p1, w.p2) for w in chosen),
            new_id=new.id,
        )
        lst = jobs_at[v]
        picked = set(map(id, chosen))
        out: list[_WJob] = []
        placed = False
        for w in lst:
            if id(w) in picked:
                if not placed:
                    out.append(new)
                    placed = True
            else:
                out.append(w)
        jobs_at[v] = out
        record(step)

    # fold every underloaded multi-job node into a single job
    for v in net.nodes:
        if len(jobs_at[v]) >= 2 and delta[v] <= budget(v):
            merge(v, list(jobs_at[v]))

    # contract underloaded pendant edges until every terminal is blocked
    queue = deque(v for v in net.nodes if v != depot and len(adj[v]) == 1)
    while queue:
        v = queue.popleft()
        if v not in adj or len(adj[v]) != 1:
            continue
        if len(jobs_at[v]) != 1:
            continue
        ((u, tau),) = adj[v].items()
        w = jobs_at[v][0]
        if w.length + 4 * tau > budget(u):
            continue
        del adj[u][v]
        del adj[v]
        del jobs_at[v]
        moved = _WJob(w.id, w.p1 + 2 * tau, w.p2 + 2 * tau)
        jobs_at[u].append(moved)
        delta[u] += moved.length
        record(ContractStep(u=u, v=v, tau=tau, job=w.id, durations_after=(moved.p1, moved.p2)))
        if len(jobs_at[u]) >= 2 and delta[u] <= budget(u):
            merge(u, list(jobs_at[u]))
        if u != depot and len(adj[u]) == 1:
            queue.append(u)

    # split the job set of the overloaded node, if any, into aggregable groups
    overloaded = [v for v in net.nodes if v in adj and delta[v] > budget(v)]
    if len(overloaded) > 1:
        raise InternalError(f"multiple overloaded nodes after contraction: {overloaded}")
    partition_used: str | None = None
    if overloaded:
        v = overloaded[0]
        lst = jobs_at[v]
        if len(lst) < 2:
            raise InternalError(f"overloaded node {v!r} holds a single job")
        lengths = [w.length for w in lst]
        dmax = max(lengths)
        if 2 * delta[v] > 3 * budget(v) + 2 * dmax:
            groups = _partition_first_fit(lengths, budget(v))
            partition_used = "v1"
        else:
            groups = _partition_total(lengths, budget(v), dmax)
            partition_used = "v2"
        for group in groups:
            chosen = [lst[i] for i in group]
            if len(chosen) >= 2 and sum(w.length for w in chosen) <= budget(v):
                merge(v, chosen)
        lst = jobs_at[v]
        if len(lst) >= 2:
            shortest = sorted(range(len(lst)), key=lambda i: (lst[i].length, i))[:2]
            chosen = [lst[i] for i in shortest]
            if sum(w.length for w in chosen) <= budget(v):
                merge(v, chosen)

    reduced = snapshot()
    if reduced.metrics.lower_bound != rbar:
        raise InternalError("reduction changed the lower bound")
    outcome = _classify_outcome(reduced, partition_used)
    return reduced, ReductionTrace(steps=tuple(steps)), outcome


def _classify_outcome(reduced: Instance, partition_used: str | None) -> Outcome:
    net = reduced.network
    chain = net.chain_from_depot()  # reduction always ends on a chain
    if len(chain) == 1:
        v = net.depot
        over = is_node_overloaded(reduced, v)
        return Outcome(
            kind=OutcomeKind.SINGLE_NODE,
            overloaded_node=v if over else None,
            overloaded_edge=None,
            node_jobs=tuple(j.id for j in reduced.jobs_at[v]) if over else (),
            partition_used=partition_used,
        )
    far = chain[-1]
    far_jobs = tuple(j.id for j in reduced.jobs_at[far])
    if is_node_overloaded(reduced, far):
        kind = (
            OutcomeKind.OVERLOADED_NODE_THREE_JOBS
            if len(far_jobs) == 3
            else OutcomeKind.OVERLOADED_NODE_TWO_JOBS
        )
        return Outcome(
            kind=kind,
            overloaded_node=far,
            overloaded_edge=None,
            node_jobs=far_jobs,
            partition_used=partition_used,
        )
    edge = net.edge_between(chain[-2], far)
    if is_edge_overloaded(reduced, edge) is True:
        return Outcome(
            kind=OutcomeKind.OVERLOADED_EDGE,
            overloaded_node=None,
            overloaded_edge=(chain[-2], far),
            node_jobs=far_jobs,
            partition_used=partition_used,
        )
    raise InternalError("reduced chain has no overloaded object at its far end")


def expand(original: Instance, trace: ReductionTrace, sched: Schedule) -> Schedule:
    """Replay the trace backwards, turning a schedule of the reduced instance
    into one for the original with the same makespan.

    Undoing a contraction trims the travel detour off both operation
    intervals; undoing an aggregation splits each merged interval into the
    recorded per-job slices, in merge order, on both machines.
    """
    intervals: dict[tuple[str, int], tuple[int, int]] = {
        (e.job, e.machine): (e.start, e.end) for e in sched.entries
    }
    for step in reversed(trace.steps):
        if isinstance(step, ContractStep):
            for m in (1, 2):
                key = (step.job, m)
                if key not in intervals:
                    raise InputError(f"schedule has no entry for contracted job {step.job!r}")
                s, e = intervals[key]
                if s + step.tau > e - step.tau:
                    raise InputError(f"interval of job {step.job!r} is too short to trim the detour")
                intervals[key] = (s + step.tau, e - step.tau)
        else:
            for m in (1, 2):
                key = (step.new_id, m)
                if key not in intervals:
                    raise InputError(f"schedule has no entry for aggregated job {step.new_id!r}")
                s, e = intervals.pop(key)
                t = s
                for cid, (p1, p2) in zip(step.merged, step.durations):
                    d = p1 if m == 1 else p2
                    intervals[(cid, m)] = (t, t + d)
                    t += d
                if t != e:
                    raise InputError(
                        f"constituents of {step.new_id!r} do not fill its interval on machine {m}"
                    )
    expected = {(j.id, m) for j in original.jobs for m in (1, 2)}
    if set(intervals) != expected:
        raise InputError("trace does not map the schedule onto the original job set")
    entries = tuple(
        ScheduleEntry(job=j, machine=m, start=s, end=e)
        for (j, m), (s, e) in sorted(
            intervals.items(), key=lambda kv: (kv[0][1], kv[1][0], kv[1][1], kv[0][0])
        )
    )
    releases = machine_releases(original, entries)
    return Schedule(entries=entries, makespan=max(releases), machine_release=releases)
