"""Schedules, precedence schemes, the early-schedule builder, and validation.

A precedence scheme is a DAG over operations (job, machine) with lag-weighted
arcs; START and FINISH are virtual endpoints. Given a scheme whose machine
chains carry true travel-time lags, ``build_early`` produces the unique
schedule in which no operation can start earlier without breaking a
precedence, i.e. every start equals the longest path from START.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable

from .errors import InputError, SchemeError
from .model import Instance

OpKey = tuple[str, int]

START = "START"
FINISH = "FINISH"

Arc = tuple[object, object, int]  # (src, dst, lag); src/dst are OpKey or START/FINISH


@dataclass(frozen=True)
class PrecedenceScheme:
    ops: frozenset[OpKey]
    arcs: tuple[Arc, ...]


@dataclass(frozen=True)
class ScheduleEntry:
    job: str
    machine: int
    start: int
    end: int


@dataclass(frozen=True)
class Schedule:
    """Operation intervals plus the two machine release times.

    A release time is the completion of the machine's last operation plus
    the travel time from its node back to the depot; the makespan is the
    larger release.
    """

    entries: tuple[ScheduleEntry, ...]
    makespan: int
    machine_release: tuple[int, int]

    def __post_init__(self) -> None:
        if self.makespan != max(self.machine_release):
            raise InputError("makespan must equal the larger machine release")

    def entry(self, job: str, machine: int) -> ScheduleEntry:
        for e in self.entries:
            if e.job == job and e.machine == machine:
                return e
        raise InputError(f"no entry for job {job!r} on machine {machine}")


@dataclass(frozen=True)
class ValidationReport:
    feasible: bool
    violations: tuple[str, ...]
    makespan: int
    machine_release: tuple[int, int]
    normal: bool


def sequence_scheme(
    inst: Instance,
    seq1: Iterable[str],
    seq2: Iterable[str],
    cross_arcs: Iterable[tuple[OpKey, OpKey]] = (),
) -> PrecedenceScheme:
    """Scheme whose machine chains follow the given job sequences.

    Chain arcs carry shortest-path travel lags between consecutive job
    locations, START arcs the travel from the depot, FINISH arcs the travel
    home. ``cross_arcs`` adds zero-lag operation-to-operation arcs.
    """
    net = inst.network
    arcs: list[Arc] = []
    ops: set[OpKey] = set()
    for machine, seq in ((1, tuple(seq1)), (2, tuple(seq2))):
        for job_id in seq:
            inst.job(job_id)
            ops.add((job_id, machine))
        if not seq:
            continue
        arcs.append((START, (seq[0], machine), net.distance(net.depot, inst.job(seq[0]).node)))
        for prev, nxt in zip(seq, seq[1:]):
            lag = net.distance(inst.job(prev).node, inst.job(nxt).node)
            arcs.append(((prev, machine), (nxt, machine), lag))
        arcs.append(((seq[-1], machine), FINISH, net.distance(inst.job(seq[-1]).node, net.depot)))
    for src, dst in cross_arcs:
        arcs.append((src, dst, 0))
    return PrecedenceScheme(ops=frozenset(ops), arcs=tuple(arcs))


def build_early(inst: Instance, scheme: PrecedenceScheme) -> Schedule:
    """Longest-path start times over the scheme DAG.

    Raises SchemeError on a cyclic scheme or arcs naming operations outside
    the scheme, InputError when an operation references an unknown job.
    """
    for job_id, machine in scheme.ops:
        if machine not in (1, 2):
            raise InputError(f"unknown machine {machine!r} in scheme")
        inst.job(job_id)

    succs: dict[object, list[tuple[object, int]]] = defaultdict(list)
    indeg: dict[object, int] = {op: 0 for op in scheme.ops}
    for src, dst, lag in scheme.arcs:
        for end in (src, dst):
            if end not in (START, FINISH) and end not in scheme.ops:
                raise SchemeError(f"arc references operation {end!r} missing from the scheme")
        succs[src].append((dst, lag))
        if dst not in (START, FINISH):
            indeg[dst] += 1

    start_time: dict[OpKey, int] = {}
    completion: dict[object, int] = {START: 0}
    queue = deque([START] + [op for op, d in indeg.items() if d == 0])
    done = 0
    while queue:
        cur = queue.popleft()
        if cur != START:
            op = cur  # type: ignore[assignment]
            job_id, machine = op
            earliest = start_time.get(op, 0)
            completion[op] = earliest + inst.job(job_id).duration(machine)
            done += 1
        for dst, lag in succs[cur]:
            if dst == FINISH:
                continue
            candidate = completion[cur] + lag
            if candidate > start_time.get(dst, 0):
                start_time[dst] = candidate
            indeg[dst] -= 1
            if indeg[dst] == 0:
                queue.append(dst)
    if done != len(scheme.ops):
        raise SchemeError("precedence scheme is cyclic")

    entries = tuple(
        ScheduleEntry(job=j, machine=m, start=start_time.get((j, m), 0), end=completion[(j, m)])
        for j, m in sorted(scheme.ops, key=lambda op: (op[1], start_time.get(op, 0), completion[op], op[0]))
    )
    releases = machine_releases(inst, entries)
    return Schedule(entries=entries, makespan=max(releases), machine_release=releases)


def machine_releases(inst: Instance, entries: Iterable[ScheduleEntry]) -> tuple[int, int]:
    """Max over the machine's operations of completion plus travel home.

    For any schedule satisfying the travel condition this is reached at the
    machine's last operation, so it matches the release-time definition while
    staying well defined on infeasible input.
    """
    net = inst.network
    rel = {1: 0, 2: 0}
    for e in entries:
        rel[e.machine] = max(rel[e.machine], e.end + net.distance(inst.job(e.job).node, net.depot))
    return (rel[1], rel[2])


def validate(inst: Instance, sched: Schedule) -> ValidationReport:
    """Check a schedule against the three feasibility conditions.

    Structural problems (unknown job, bad machine id, missing or duplicated
    operation) raise InputError; timing problems are reported as violations:
    duration mismatch, negative start, overlap of dependent operations
    (same job or same machine), a first operation starting before the node
    is reachable, and consecutive same-machine operations violating travel
    time.
    """
    net = inst.network
    seen: set[OpKey] = set()
    for e in sched.entries:
        inst.job(e.job)
        if e.machine not in (1, 2):
            raise InputError(f"unknown machine {e.machine!r}")
        if (e.job, e.machine) in seen:
            raise InputError(f"duplicate entry for job {e.job!r} machine {e.machine}")
        seen.add((e.job, e.machine))
    for job in inst.jobs:
        for m in (1, 2):
            if (job.id, m) not in seen:
                raise InputError(f"missing entry for job {job.id!r} machine {m}")

    violations: list[str] = []
    for e in sched.entries:
        if e.start < 0:
            violations.append(f"operation ({e.job}, M{e.machine}) starts at {e.start} < 0")
        want = inst.job(e.job).duration(e.machine)
        if e.end - e.start != want:
            violations.append(
                f"operation ({e.job}, M{e.machine}) spans {e.end - e.start}, duration is {want}"
            )

    # same-job pairs must not overlap (open intervals)
    for job in inst.jobs:
        e1, e2 = sched.entry(job.id, 1), sched.entry(job.id, 2)
        if max(e1.start, e2.start) < min(e1.end, e2.end):
            violations.append(f"both operations of job {job.id!r} run at once")

    # per machine: reachability of the first operation, then travel times
    for m in (1, 2):
        ops = sorted((e for e in sched.entries if e.machine == m), key=lambda e: (e.start, e.end, e.job))
        if not ops:
            continue
        first = ops[0]
        lag = net.distance(net.depot, inst.job(first.job).node)
        if first.start < lag:
            violations.append(
                f"machine {m} starts ({first.job}) at {first.start}, node is {lag} away from the depot"
            )
        for prev, nxt in zip(ops, ops[1:]):
            lag = net.distance(inst.job(prev.job).node, inst.job(nxt.job).node)
            if nxt.start < prev.end + lag:
                violations.append(
                    f"machine {m} cannot reach ({nxt.job}) at {nxt.start} from ({prev.job}) ending {prev.end} (travel {lag})"
                )

    releases = machine_releases(inst, sched.entries)
    makespan = max(releases) if sched.entries else 0
    return ValidationReport(
        feasible=not violations,
        violations=tuple(violations),
        makespan=makespan,
        machine_release=releases,
        normal=makespan == inst.metrics.lower_bound,
    )
