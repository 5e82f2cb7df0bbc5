"""File formats, the random instance generator, and the experiment runner."""

from __future__ import annotations

import csv
import io
import json
import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .classify import check_normality_conditions
from .errors import InputError
from .model import Instance, Job, TreeEdge, TreeNetwork
from .reduction import Outcome
from .schedule import Schedule, ScheduleEntry, machine_releases
from .schedulers import SolveReport, solve


def parse_instance(text: str) -> Instance:
    """Read an instance document; errors carry the offending path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("instance document must be an object")
    depot = _expect_str(doc, "depot")
    nodes = _expect_list(doc, "nodes")
    for i, v in enumerate(nodes):
        if not isinstance(v, str):
            raise InputError(f"nodes[{i}] must be a string")
    edges = []
    for i, e in enumerate(_expect_list(doc, "edges")):
        if not isinstance(e, dict):
            raise InputError(f"edges[{i}] must be an object")
        edges.append(
            TreeEdge(
                u=_expect_str(e, "u", f"edges[{i}].u"),
                v=_expect_str(e, "v", f"edges[{i}].v"),
                tau=_expect_int(e, "tau", f"edges[{i}].tau"),
            )
        )
    jobs = []
    for i, j in enumerate(_expect_list(doc, "jobs")):
        if not isinstance(j, dict):
            raise InputError(f"jobs[{i}] must be an object")
        p = j.get("p")
        if not isinstance(p, list) or len(p) != 2:
            raise InputError(f"jobs[{i}].p must be a pair [p1, p2]")
        for k, val in enumerate(p):
            if not isinstance(val, int) or isinstance(val, bool):
                raise InputError(f"jobs[{i}].p[{k}] must be an integer")
        jobs.append(
            Job(
                id=_expect_str(j, "id", f"jobs[{i}].id"),
                node=_expect_str(j, "node", f"jobs[{i}].node"),
                p1=p[0],
                p2=p[1],
            )
        )
    network = TreeNetwork(nodes=tuple(nodes), edges=tuple(edges), depot=depot)
    return Instance(network=network, jobs=tuple(jobs))


def _expect_str(doc: dict, key: str, path: str | None = None) -> str:
    val = doc.get(key)
    if not isinstance(val, str):
        raise InputError(f"{path or key} must be a string")
    return val


def _expect_int(doc: dict, key: str, path: str | None = None) -> int:
    val = doc.get(key)
    if not isinstance(val, int) or isinstance(val, bool):
        raise InputError(f"{path or key} must be an integer")
    return val


def _expect_list(doc: dict, key: str) -> list:
    val = doc.get(key)
    if not isinstance(val, list):
        raise InputError(f"{key} must be an array")
    return val


def instance_document(inst: Instance) -> dict:
    return {
        "depot": inst.network.depot,
        "nodes": list(inst.network.nodes),
        "edges": [{"u": e.u, "v": e.v, "tau": e.tau} for e in inst.network.edges],
        "jobs": [{"id": j.id, "node": j.node, "p": [j.p1, j.p2]} for j in inst.jobs],
    }


def write_instance(inst: Instance) -> str:
    return json.dumps(instance_document(inst), indent=2) + "\n"


def schedule_document(inst: Instance, sched: Schedule, status: str | None = None) -> dict:
    rbar = inst.metrics.lower_bound
    if status is None:
        status = "normal" if sched.makespan == rbar else "abnormal-fallback"
    return {
        "makespan": sched.makespan,
        "lower_bound": rbar,
        "status": status,
        "operations": [
            {"job": e.job, "machine": e.machine, "start": e.start, "end": e.end,
             "node": inst.job(e.job).node}
            for e in sorted(sched.entries, key=lambda e: (e.machine, e.start, e.end, e.job))
        ],
    }


def write_schedule(inst: Instance, sched: Schedule, status: str | None = None) -> str:
    return json.dumps(schedule_document(inst, sched, status), indent=2) + "\n"


def parse_schedule(inst: Instance, text: str) -> Schedule:
    """Read a schedule document against its instance.

    Releases and makespan are recomputed from the operations; a stated node
    disagreeing with the instance is rejected.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("schedule document must be an object")
    entries = []
    for i, op in enumerate(_expect_list(doc, "operations")):
        if not isinstance(op, dict):
            raise InputError(f"operations[{i}] must be an object")
        job = _expect_str(op, "job", f"operations[{i}].job")
        node = op.get("node")
        if node is not None and inst.job(job).node != node:
            raise InputError(f"operations[{i}].node contradicts the instance")
        entries.append(
            ScheduleEntry(
                job=job,
                machine=_expect_int(op, "machine", f"operations[{i}].machine"),
                start=_expect_int(op, "start", f"operations[{i}].start"),
                end=_expect_int(op, "end", f"operations[{i}].end"),
            )
        )
    releases = machine_releases(inst, entries)
    return Schedule(entries=tuple(entries), makespan=max(releases), machine_release=releases)


def outcome_document(outcome: Outcome) -> dict:
    return {
        "kind": outcome.kind.value,
        "overloaded_node": outcome.overloaded_node,
        "overloaded_edge": list(outcome.overloaded_edge) if outcome.overloaded_edge else None,
        "node_jobs": list(outcome.node_jobs),
        "partition_used": outcome.partition_used,
    }


@dataclass(frozen=True)
class GeneratorConfig:
    """Ranges for the random generator; all draws are inclusive and seeded."""

    seed: int
    nodes: tuple[int, int] = (1, 8)
    edge_weight: tuple[int, int] = (0, 4)
    jobs_per_node: tuple[int, int] = (1, 3)
    duration: tuple[int, int] = (0, 9)

    def __post_init__(self) -> None:
        for name, (lo, hi) in (
            ("nodes", self.nodes),
            ("edge_weight", self.edge_weight),
            ("jobs_per_node", self.jobs_per_node),
            ("duration", self.duration),
        ):
            if lo > hi or lo < 0:
                raise InputError(f"{name} range ({lo}, {hi}) is empty or negative")
        if self.nodes[0] < 1:
            raise InputError("need at least one node")
        if self.jobs_per_node[1] < 1:
            raise InputError("jobs_per_node range must allow at least one job")


def gen_random(cfg: GeneratorConfig) -> Instance:
    """Uniform random tree instance, a pure function of the seed.

    Node k attaches to a uniformly chosen earlier node. Non-depot nodes draw
    their job count with a floor of one (every such node must host a job);
    the depot may draw zero.
    """
    rng = random.Random(cfg.seed)
    count = rng.randint(*cfg.nodes)
    nodes = tuple(f"v{i}" for i in range(count))
    edges = []
    for k in range(1, count):
        parent = nodes[rng.randint(0, k - 1)]
        edges.append(TreeEdge(u=parent, v=nodes[k], tau=rng.randint(*cfg.edge_weight)))
    network = TreeNetwork(nodes=nodes, edges=tuple(edges), depot=nodes[0])
    jobs = []
    serial = 1
    for v in nodes:
        lo, hi = cfg.jobs_per_node
        if v != network.depot:
            lo = max(lo, 1)
        for _ in range(rng.randint(lo, hi)):
            jobs.append(
                Job(
                    id=f"J{serial}",
                    node=v,
                    p1=rng.randint(*cfg.duration),
                    p2=rng.randint(*cfg.duration),
                )
            )
            serial += 1
    return Instance(network=network, jobs=tuple(jobs))


@dataclass(frozen=True)
class ExperimentRow:
    seed: int
    jobs: int
    nodes: int
    lower_bound: int
    makespan: int
    gap: int
    outcome: str
    conditions: str
    status: str
    scheduler: str


EXPERIMENT_COLUMNS = [
    "seed", "jobs", "nodes", "lower_bound", "makespan", "gap",
    "outcome", "conditions", "status", "scheduler",
]


def _conditions_summary(inst: Instance) -> str:
    verdict = check_normality_conditions(inst)
    hits = []
    if verdict.condition1:
        hits.append("1")
    if verdict.condition2:
        hits.append("2")
    if verdict.condition3 is not None:
        hits.append("3")
    if verdict.condition4 is not None:
        hits.append("4")
    return "+".join(hits) if hits else "none"


def experiment_row(seed: int, inst: Instance, report: SolveReport) -> ExperimentRow:
    return ExperimentRow(
        seed=seed,
        jobs=len(inst.jobs),
        nodes=len(inst.network.nodes),
        lower_bound=report.lower_bound,
        makespan=report.makespan,
        gap=report.gap,
        outcome=report.outcome.kind.value,
        conditions=_conditions_summary(inst),
        status=report.status,
        scheduler=report.scheduler_used,
    )


def run_experiment(
    count: int,
    seed: int,
    cfg: GeneratorConfig | None = None,
    oracle_cap: int | None = None,
) -> tuple[list[ExperimentRow], dict[str, Counter]]:
    """Solve ``count`` generated instances with seeds ``seed .. seed+count-1``.

    Rows come back in seed order; the summary counts outcomes and statuses.
    """
    rows: list[ExperimentRow] = []
    for s in range(seed, seed + count):
        base = cfg or GeneratorConfig(seed=s)
        inst = gen_random(
            GeneratorConfig(
                seed=s,
                nodes=base.nodes,
                edge_weight=base.edge_weight,
                jobs_per_node=base.jobs_per_node,
                duration=base.duration,
            )
        )
        report = solve(inst, oracle_cap=oracle_cap)
        rows.append(experiment_row(s, inst, report))
    summary = {
        "outcomes": Counter(r.outcome for r in rows),
        "statuses": Counter(r.status for r in rows),
    }
    return rows, summary


def experiment_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(EXPERIMENT_COLUMNS)
    for r in rows:
        writer.writerow([getattr(r, col) for col in EXPERIMENT_COLUMNS])
    return buf.getvalue()


def summary_lines(summary: dict[str, Counter]) -> list[str]:
    lines = []
    for key in ("outcomes", "statuses"):
        counts = summary[key]
        body = " ".join(f"{name}={counts[name]}" for name in sorted(counts))
        lines.append(f"{key}: {body}" if body else f"{key}: none")
    return lines
