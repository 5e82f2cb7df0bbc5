"""Guaranteed schedulers for the reduced shapes, and the end-to-end solver.

Each scheduler takes an instance in one of the shapes the reduction can
produce (a chain with the special structure at the far terminal) and builds a
schedule meeting the lower bound. ``solve`` wires the whole pipeline:
reduce, dispatch on the outcome, expand the schedule back to the original
instance, validate, and report.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classify import is_irreducible_partition
from .errors import InternalError, PreconditionError
from .model import Instance, Job
from .openshop import (
    _anchored_schedule,
    _swap_machines,
    _swap_schedule,
    chain_diagonal_at_depot,
    chain_long_diagonal,
    diagonal_job,
    gonzalez_sahni,
)
from .oracle import DEFAULT_CAP, optimal_makespan
from .reduction import Outcome, OutcomeKind, expand, is_edge_overloaded, node_budget, reduce_instance
from .schedule import Schedule, build_early, sequence_scheme, validate

NORMAL = "normal"
ABNORMAL_FALLBACK = "abnormal-fallback"


@dataclass(frozen=True)
class SolveReport:
    status: str
    schedule: Schedule
    lower_bound: int
    makespan: int
    outcome: Outcome
    scheduler_used: str
    gap: int


def _chain_shape(inst: Instance, far_count: int) -> tuple[tuple[str, ...], list[Job | None]]:
    """Chain node order plus the single job per node (None for a jobless depot).

    The far terminal must hold exactly ``far_count`` jobs; every other
    non-depot node exactly one.
    """
    chain = inst.network.chain_from_depot()
    if len(chain) < 2:
        raise PreconditionError("instance must have at least one edge")
    singles: list[Job | None] = []
    for v in chain[:-1]:
        jobs = inst.jobs_at[v]
        if v == inst.network.depot and not jobs:
            singles.append(None)
            continue
        if len(jobs) != 1:
            raise PreconditionError(f"node {v!r} must hold exactly one job")
        singles.append(jobs[0])
    if len(inst.jobs_at[chain[-1]]) != far_count:
        raise PreconditionError(f"far terminal must hold exactly {far_count} jobs")
    return chain, singles


def schedule_overloaded_edge(inst: Instance) -> Schedule:
    """Normal schedule for a chain blocked by an overloaded far edge.

    Machine 1 sweeps outward and ends at the far job; machine 2 rides out to
    the far job first and sweeps home. The far job runs machine 2 first; the
    job before it crosses the other way, which chains every earlier pair
    apart.
    """
    chain, singles = _chain_shape(inst, far_count=1)
    far_job = inst.jobs_at[chain[-1]][0]
    edge = inst.network.edge_between(chain[-2], chain[-1])
    if is_edge_overloaded(inst, edge) is not True:
        raise PreconditionError("far edge is not overloaded")
    outward = [j.id for j in singles if j is not None]
    seq1 = outward + [far_job.id]
    seq2 = [far_job.id] + outward[::-1]
    cross = [((far_job.id, 2), (far_job.id, 1))]
    if singles[-1] is not None:
        last = singles[-1]
        cross.append(((last.id, 1), (last.id, 2)))
    return build_early(inst, sequence_scheme(inst, seq1, seq2, cross))


def three_job_candidates(inst: Instance) -> tuple[Schedule, Schedule]:
    """Both candidate schedules for a chain ending in a superoverloaded triple.

    The triple is normalized so the first-scheduled job's machine-1 operation
    is the smallest operation among it and the job scheduled last (machine
    roles are swapped when needed, and swapped back in the output). At least
    one of the two candidates is always normal.
    """
    chain, singles = _chain_shape(inst, far_count=3)
    far = chain[-1]
    triple = list(inst.jobs_at[far])
    budget = node_budget(inst, far)
    for i in range(3):
        for j in range(i + 1, 3):
            if triple[i].length + triple[j].length <= budget:
                raise PreconditionError("far triple is not superoverloaded")

    beta = max(triple, key=lambda j: j.length)
    rest = [j for j in triple if j.id != beta.id]
    candidates = [
        (job.duration(machine), pos, machine)
        for pos, job in enumerate(rest)
        for machine in (1, 2)
    ]
    _, pos, machine = min(candidates)
    alpha, gamma = rest[pos], rest[1 - pos]
    swapped = machine == 2

    work = _swap_machines(inst) if swapped else inst
    outward = [j.id for j in singles if j is not None]
    homeward = outward[::-1]
    a, b, g = alpha.id, beta.id, gamma.id
    seq2 = outward + [g, a, b]
    first = _early(work, [a, b, g] + homeward, seq2, [(a, 1, 2), (b, 1, 2), (g, 2, 1)])
    second = _early(work, [b, g, a] + homeward, seq2, [(a, 2, 1), (b, 1, 2), (g, 2, 1)])
    if swapped:
        first, second = _swap_schedule(first), _swap_schedule(second)
    return first, second


def _early(inst: Instance, seq1, seq2, crossings) -> Schedule:
    cross = [((j, src), (j, dst)) for j, src, dst in crossings]
    return build_early(inst, sequence_scheme(inst, seq1, seq2, cross))


def schedule_three_jobs(inst: Instance) -> Schedule:
    """Normal schedule for a chain ending in a superoverloaded triple."""
    first, second = three_job_candidates(inst)
    rbar = inst.metrics.lower_bound
    for sched in (first, second):
        if sched.makespan == rbar and validate(inst, sched).feasible:
            return sched
    raise InternalError("neither triple candidate meets the lower bound")


def _fallback_heuristics(inst: Instance) -> tuple[Schedule, str]:
    """Best of the two generic chain sweeps around the diagonal job."""
    info = diagonal_job(inst)
    if not info.in_set_a:
        sched, tag = _fallback_heuristics(_swap_machines(inst))
        return _swap_schedule(sched), tag
    chain = inst.network.chain_from_depot()
    r = info.job
    set_a = set(info.set_a)
    blocks = [j.id for v in chain for j in inst.jobs_at[v] if j.id in set_a and j.id != r.id]
    blocks += [j.id for v in reversed(chain) for j in inst.jobs_at[v] if j.id not in set_a and j.id != r.id]
    split = _anchored_schedule(inst, r.id, blocks, blocks)
    outward = [j.id for v in chain for j in inst.jobs_at[v] if j.id != r.id]
    homeward = [j.id for v in reversed(chain) for j in inst.jobs_at[v] if j.id != r.id]
    serial = _anchored_schedule(inst, r.id, outward, homeward)
    if split.makespan <= serial.makespan:
        return split, "heuristic-split-sweep"
    return serial, "heuristic-serial-sweep"


def solve(inst: Instance, oracle_cap: int | None = None) -> SolveReport:
    """Reduce, schedule, expand, validate, and report.

    Status is ``normal`` exactly when the final makespan equals the lower
    bound, whichever scheduler produced the schedule. Instances falling
    outside every guaranteed shape run the exhaustive oracle when the reduced
    job count fits the cap, else the better of two heuristic sweeps.
    """
    cap = DEFAULT_CAP if oracle_cap is None else oracle_cap
    reduced, trace, outcome = reduce_instance(inst)
    rbar = inst.metrics.lower_bound

    if not reduced.jobs:
        sched_r = Schedule(entries=(), makespan=0, machine_release=(0, 0))
        used = "empty"
    elif outcome.kind is OutcomeKind.SINGLE_NODE:
        sched_r = gonzalez_sahni(reduced)
        used = "gonzalez-sahni"
    elif outcome.kind is OutcomeKind.OVERLOADED_EDGE:
        sched_r = schedule_overloaded_edge(reduced)
        used = "overloaded-edge"
    elif outcome.kind is OutcomeKind.OVERLOADED_NODE_THREE_JOBS and is_irreducible_partition(
        reduced, outcome.overloaded_node, [(j,) for j in outcome.node_jobs]
    ):
        sched_r = schedule_three_jobs(reduced)
        used = "three-jobs"
    else:
        info = diagonal_job(reduced)
        chain = reduced.network.chain_from_depot()
        if info.job.node == reduced.network.depot:
            sched_r = chain_diagonal_at_depot(reduced)
            used = "chain-diagonal-depot"
        elif info.job.node == chain[-1] and info.job.length >= reduced.metrics.load_max:
            sched_r = chain_long_diagonal(reduced)
            used = "chain-long-diagonal"
        elif len(reduced.jobs) <= cap:
            sched_r = optimal_makespan(reduced, cap).witness
            used = "oracle-fallback"
        else:
            sched_r, used = _fallback_heuristics(reduced)

    expanded = expand(inst, trace, sched_r)
    report = validate(inst, expanded)
    if not report.feasible:
        raise InternalError(f"pipeline produced an infeasible schedule: {report.violations[:3]}")
    status = NORMAL if report.makespan == rbar else ABNORMAL_FALLBACK
    return SolveReport(
        status=status,
        schedule=expanded,
        lower_bound=rbar,
        makespan=report.makespan,
        outcome=outcome,
        scheduler_used=used,
        gap=report.makespan - rbar,
    )
