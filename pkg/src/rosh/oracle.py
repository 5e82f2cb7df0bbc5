"""Exhaustive baseline: optimal makespan by enumerating all configurations.

A configuration is a job order per machine plus a per-job orientation (which
machine runs the job first). The early schedule of a configuration is the
best schedule realizing it, so minimizing over all acyclic configurations
gives the exact optimum. The inner enumeration is compiled (numba); the best
configuration found is replayed through the pure precedence-scheme builder,
which both produces the witness schedule and cross-checks the kernel.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from numba import njit

from .errors import InternalError, OracleCapError, PreconditionError, SchemeError
from .model import Instance
from .schedule import Schedule, build_early, sequence_scheme

DEFAULT_CAP = 5


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: Schedule
    explored: int


def evaluate_config(
    inst: Instance,
    seq1: Iterable[str],
    seq2: Iterable[str],
    machine2_first: Iterable[str] = (),
) -> Schedule | None:
    """Early schedule of one configuration, or None when it is cyclic.

    ``machine2_first`` lists the jobs whose machine-2 operation precedes the
    machine-1 one; all other jobs cross machine 1 -> machine 2.
    """
    flipped = set(machine2_first)
    cross = []
    for job in inst.jobs:
        if job.id in flipped:
            cross.append(((job.id, 2), (job.id, 1)))
        else:
            cross.append(((job.id, 1), (job.id, 2)))
    scheme = sequence_scheme(inst, seq1, seq2, cross)
    try:
        return build_early(inst, scheme)
    except SchemeError:
        return None


@njit(cache=True)
def _search(perms, dur1, dur2, loc, dist, depot, stop_at):  # pragma: no cover - compiled
    n = dur1.shape[0]
    count = perms.shape[0]
    best = 1 << 62
    best_i1 = -1
    best_i2 = -1
    best_mask = -1
    explored = 0
    comp1 = np.zeros(n, np.int64)
    comp2 = np.zeros(n, np.int64)
    done1 = np.zeros(n, np.uint8)
    done2 = np.zeros(n, np.uint8)
    for i1 in range(count):
        for i2 in range(count):
            for mask in range(1 << n):
                for j in range(n):
                    done1[j] = 0
                    done2[j] = 0
                pos1 = 0
                pos2 = 0
                t1 = 0
                t2 = 0
                at1 = depot
                at2 = depot
                while True:
                    progress = False
                    while pos1 < n:
                        j = perms[i1, pos1]
                        if (mask >> j) & 1 == 1 and done2[j] == 0:
                            break
                        s = t1 + dist[at1, loc[j]]
                        if (mask >> j) & 1 == 1 and comp2[j] > s:
                            s = comp2[j]
                        comp1[j] = s + dur1[j]
                        done1[j] = 1
                        t1 = comp1[j]
                        at1 = loc[j]
                        pos1 += 1
                        progress = True
                    while pos2 < n:
                        j = perms[i2, pos2]
                        if (mask >> j) & 1 == 0 and done1[j] == 0:
                            break
                        s = t2 + dist[at2, loc[j]]
                        if (mask >> j) & 1 == 0 and comp1[j] > s:
                            s = comp1[j]
                        comp2[j] = s + dur2[j]
                        done2[j] = 1
                        t2 = comp2[j]
                        at2 = loc[j]
                        pos2 += 1
                        progress = True
                    if pos1 == n and pos2 == n:
                        break
                    if not progress:
                        break
                if pos1 < n or pos2 < n:
                    continue
                explored += 1
                r1 = t1 + dist[at1, depot]
                r2 = t2 + dist[at2, depot]
                makespan = r1 if r1 > r2 else r2
                if makespan < best:
                    best = makespan
                    best_i1 = i1
                    best_i2 = i2
                    best_mask = mask
                    if best <= stop_at:
                        return best, best_i1, best_i2, best_mask, explored
    return best, best_i1, best_i2, best_mask, explored


def optimal_makespan(inst: Instance, cap: int = DEFAULT_CAP) -> OracleResult:
    """Exact optimum by exhaustive search over (n!)^2 * 2^n configurations.

    Refuses instances with more than ``cap`` jobs; raising the cap beyond the
    default is possible but warned about, the search being factorial. Stops
    early once the incumbent reaches the lower bound (nothing can beat it).
    """
    if cap > DEFAULT_CAP:
        warnings.warn(
            f"oracle cap {cap} beyond the default {DEFAULT_CAP}: the search is factorial-squared",
            RuntimeWarning,
            stacklevel=2,
        )
    n = len(inst.jobs)
    if n == 0:
        raise PreconditionError("instance has no jobs")
    if n > cap:
        raise OracleCapError(f"instance has {n} jobs, cap is {cap}")

    net = inst.network
    used = [net.depot] + sorted({j.node for j in inst.jobs} - {net.depot})
    index = {v: i for i, v in enumerate(used)}
    dist = np.zeros((len(used), len(used)), np.int64)
    for a in range(len(used)):
        for b in range(a + 1, len(used)):
            dist[a, b] = dist[b, a] = net.distance(used[a], used[b])
    dur1 = np.array([j.p1 for j in inst.jobs], np.int64)
    dur2 = np.array([j.p2 for j in inst.jobs], np.int64)
    loc = np.array([index[j.node] for j in inst.jobs], np.int64)
    perms = np.array(list(itertools.permutations(range(n))), np.int64)

    rbar = inst.metrics.lower_bound
    best, i1, i2, mask, explored = _search(perms, dur1, dur2, loc, dist, 0, rbar)
    if i1 < 0:
        raise InternalError("every configuration was cyclic")

    ids = [j.id for j in inst.jobs]
    seq1 = [ids[k] for k in perms[i1]]
    seq2 = [ids[k] for k in perms[i2]]
    flipped = [ids[j] for j in range(n) if (mask >> j) & 1]
    witness = evaluate_config(inst, seq1, seq2, flipped)
    if witness is None or witness.makespan != best:
        raise InternalError("kernel best configuration does not replay to the same makespan")
    return OracleResult(optimum=int(best), witness=witness, explored=int(explored))
