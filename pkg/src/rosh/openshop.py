"""Classical two-machine open shop pieces and the two chain schedulers.

The diagonal job is the one maximizing min(p1, p2). Splitting jobs into
set A (p1 <= p2) and set B (p1 > p2) and anchoring the diagonal job last on
machine 1 / first on machine 2 yields a schedule meeting the classical
optimum max(load1, load2, longest job). The same skeleton, with jobs walked
along a chain network in node blocks, stays optimal when the diagonal job
sits at the depot, or sits at the far terminal and is at least as long as
the heavier machine load.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import PreconditionError
from .model import Instance, Job
from .schedule import Schedule, ScheduleEntry, build_early, sequence_scheme


@dataclass(frozen=True)
class DiagonalInfo:
    job: Job
    in_set_a: bool
    set_a: tuple[str, ...]
    set_b: tuple[str, ...]


def diagonal_job(inst: Instance) -> DiagonalInfo:
    """Job with the largest min(p1, p2); ties go to the earliest job."""
    if not inst.jobs:
        raise PreconditionError("instance has no jobs")
    best = inst.jobs[0]
    for job in inst.jobs[1:]:
        if min(job.p1, job.p2) > min(best.p1, best.p2):
            best = job
    set_a = tuple(j.id for j in inst.jobs if j.p1 <= j.p2)
    set_b = tuple(j.id for j in inst.jobs if j.p1 > j.p2)
    return DiagonalInfo(job=best, in_set_a=best.p1 <= best.p2, set_a=set_a, set_b=set_b)


def _swap_machines(inst: Instance) -> Instance:
    return Instance(
        network=inst.network,
        jobs=tuple(replace(j, p1=j.p2, p2=j.p1) for j in inst.jobs),
    )


def _swap_schedule(sched: Schedule) -> Schedule:
    entries = tuple(
        sorted(
            (replace(e, machine=3 - e.machine) for e in sched.entries),
            key=lambda e: (e.machine, e.start, e.end, e.job),
        )
    )
    r1, r2 = sched.machine_release
    return Schedule(entries=entries, makespan=sched.makespan, machine_release=(r2, r1))


def _anchored_schedule(inst: Instance, diagonal: str, order: list[str], seq2: list[str]) -> Schedule:
    """Machine 1 runs ``order`` then the diagonal; machine 2 runs the diagonal
    then ``seq2``. Every other job crosses machine 1 -> machine 2; the
    diagonal crosses the other way."""
    cross = [((j, 1), (j, 2)) for j in order]
    cross.append(((diagonal, 2), (diagonal, 1)))
    scheme = sequence_scheme(inst, order + [diagonal], [diagonal] + seq2, cross)
    return build_early(inst, scheme)


def gonzalez_sahni(inst: Instance) -> Schedule:
    """Optimal two-machine open shop schedule for a single-node instance."""
    if len(inst.network.nodes) != 1:
        raise PreconditionError("instance must live on a single node")
    info = diagonal_job(inst)
    if not info.in_set_a:
        return _swap_schedule(gonzalez_sahni(_swap_machines(inst)))
    r = info.job
    if r.length < inst.metrics.load_max:
        order = [j for j in info.set_a if j != r.id] + list(info.set_b)
    else:
        order = [j.id for j in inst.jobs if j.id != r.id]
    return _anchored_schedule(inst, r.id, order, order)


def chain_diagonal_at_depot(inst: Instance) -> Schedule:
    """Chain scheduler for a diagonal job located at the depot.

    Both machines walk set-A jobs outward and set-B jobs homeward in the
    same order; the resulting makespan meets the lower bound.
    """
    info = diagonal_job(inst)
    if not info.in_set_a:
        return _swap_schedule(chain_diagonal_at_depot(_swap_machines(inst)))
    chain = inst.network.chain_from_depot()
    r = info.job
    if r.node != inst.network.depot:
        raise PreconditionError("diagonal job is not at the depot")
    set_a, set_b = set(info.set_a), set(info.set_b)
    order = [j.id for v in chain for j in inst.jobs_at[v] if j.id in set_a and j.id != r.id]
    order += [j.id for v in reversed(chain) for j in inst.jobs_at[v] if j.id in set_b]
    return _anchored_schedule(inst, r.id, order, order)


def chain_long_diagonal(inst: Instance) -> Schedule:
    """Chain scheduler for a dominant diagonal job at the far terminal.

    Requires length(diagonal) >= max machine load. Machine 1 walks outward
    and finishes with the diagonal; machine 2 starts with it and walks home.
    """
    chain = inst.network.chain_from_depot()
    info = diagonal_job(inst)
    r = info.job
    if r.node != chain[-1]:
        raise PreconditionError("diagonal job is not at the far terminal")
    if r.length < inst.metrics.load_max:
        raise PreconditionError("diagonal job is shorter than the heavier machine load")
    outward = [j.id for v in chain for j in inst.jobs_at[v] if j.id != r.id]
    homeward = [j.id for v in reversed(chain) for j in inst.jobs_at[v] if j.id != r.id]
    return _anchored_schedule(inst, r.id, outward, homeward)
