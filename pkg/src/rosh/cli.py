"""Command line interface.

Commands print their document (JSON, CSV, or a bare number) on stdout and
exit 0; domain errors print an {"error", "message"} object on stderr and
exit 1. ``validate`` exits 1 when the schedule is infeasible, with the
verdict still on stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import toolkit
from .classify import check_normality_conditions
from .errors import RoshError
from .model import Instance
from .oracle import optimal_makespan
from .reduction import AggregateStep, ReductionTrace, reduce_instance
from .schedule import validate as validate_schedule
from .schedulers import solve

ENV_CAP = "ROSH_ORACLE_CAP"


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (RoshError, OSError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rosh",
        description="Two-machine routing open shop on a tree: reduce, classify, schedule.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lowerbound", help="print the standard lower bound of an instance")
    p.add_argument("file", type=Path)
    p.set_defaults(handler=_cmd_lowerbound)

    p = sub.add_parser("reduce", help="reduce an instance and print it with trace and outcome")
    p.add_argument("file", type=Path)
    p.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("classify", help="print the reduction outcome and normality conditions")
    p.add_argument("file", type=Path)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("solve", help="solve an instance and print the schedule document")
    p.add_argument("file", type=Path)
    p.add_argument("--cap", type=int, default=None, help="oracle fallback job cap")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("validate", help="check a schedule document against an instance")
    p.add_argument("file", type=Path)
    p.add_argument("schedule", type=Path)
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("oracle", help="exhaustive optimum for a small instance")
    p.add_argument("file", type=Path)
    p.add_argument("--cap", type=int, default=None, help="job cap for the search")
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("gen", help="generate a random instance")
    _gen_flags(p)
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser("experiment", help="generate, solve, and tabulate many instances")
    p.add_argument("--count", type=int, required=True)
    _gen_flags(p)
    p.add_argument("--cap", type=int, default=None, help="oracle fallback job cap")
    p.add_argument("--out", type=Path, default=None, help="write the CSV here instead of stdout")
    p.set_defaults(handler=_cmd_experiment)

    return parser


def _gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--nodes", type=int, nargs=2, default=(1, 8), metavar=("LO", "HI"))
    p.add_argument("--edge-weight", type=int, nargs=2, default=(0, 4), metavar=("LO", "HI"))
    p.add_argument("--jobs", type=int, nargs=2, default=(1, 3), metavar=("LO", "HI"))
    p.add_argument("--duration", type=int, nargs=2, default=(0, 9), metavar=("LO", "HI"))


def _load_instance(path: Path) -> Instance:
    return toolkit.parse_instance(path.read_text())


def _resolve_cap(flag: int | None) -> int | None:
    if flag is not None:
        return flag
    env = os.environ.get(ENV_CAP)
    return int(env) if env else None


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _cmd_lowerbound(args) -> int:
    inst = _load_instance(args.file)
    sys.stdout.write(f"{inst.metrics.lower_bound}\n")
    return 0


def _trace_document(trace: ReductionTrace) -> list[dict]:
    steps = []
    for step in trace.steps:
        if isinstance(step, AggregateStep):
            steps.append(
                {
                    "type": "aggregate",
                    "node": step.node,
                    "merged": list(step.merged),
                    "durations": [list(d) for d in step.durations],
                    "new_id": step.new_id,
                }
            )
        else:
            steps.append(
                {
                    "type": "contract",
                    "u": step.u,
                    "v": step.v,
                    "tau": step.tau,
                    "job": step.job,
                    "durations_after": list(step.durations_after),
                }
            )
    return steps


def _cmd_reduce(args) -> int:
    inst = _load_instance(args.file)
    reduced, trace, outcome = reduce_instance(inst)
    _emit(
        {
            "instance": toolkit.instance_document(reduced),
            "outcome": toolkit.outcome_document(outcome),
            "trace": _trace_document(trace),
        }
    )
    return 0


def _conditions_document(inst: Instance) -> dict:
    verdict = check_normality_conditions(inst)
    return {
        "condition1": verdict.condition1,
        "condition2": verdict.condition2,
        "condition3": [verdict.condition3.u, verdict.condition3.v] if verdict.condition3 else None,
        "condition4": verdict.condition4,
        "any": verdict.any,
    }


def _cmd_classify(args) -> int:
    inst = _load_instance(args.file)
    _, _, outcome = reduce_instance(inst)
    _emit(
        {
            "outcome": toolkit.outcome_document(outcome),
            "conditions": _conditions_document(inst),
        }
    )
    return 0


def _cmd_solve(args) -> int:
    inst = _load_instance(args.file)
    report = solve(inst, oracle_cap=_resolve_cap(args.cap))
    doc = toolkit.schedule_document(inst, report.schedule, report.status)
    doc["gap"] = report.gap
    doc["scheduler"] = report.scheduler_used
    doc["outcome"] = toolkit.outcome_document(report.outcome)
    _emit(doc)
    return 0


def _cmd_validate(args) -> int:
    inst = _load_instance(args.file)
    sched = toolkit.parse_schedule(inst, args.schedule.read_text())
    report = validate_schedule(inst, sched)
    _emit(
        {
            "feasible": report.feasible,
            "violations": list(report.violations),
            "makespan": report.makespan,
            "normal": report.normal,
        }
    )
    return 0 if report.feasible else 1


def _cmd_oracle(args) -> int:
    inst = _load_instance(args.file)
    cap = _resolve_cap(args.cap)
    result = optimal_makespan(inst) if cap is None else optimal_makespan(inst, cap)
    _emit(
        {
            "optimum": result.optimum,
            "explored": result.explored,
            "schedule": toolkit.schedule_document(inst, result.witness),
        }
    )
    return 0


def _generator_config(args) -> toolkit.GeneratorConfig:
    return toolkit.GeneratorConfig(
        seed=args.seed,
        nodes=tuple(args.nodes),
        edge_weight=tuple(args.edge_weight),
        jobs_per_node=tuple(args.jobs),
        duration=tuple(args.duration),
    )


def _cmd_gen(args) -> int:
    inst = toolkit.gen_random(_generator_config(args))
    sys.stdout.write(toolkit.write_instance(inst))
    return 0


def _cmd_experiment(args) -> int:
    rows, summary = toolkit.run_experiment(
        count=args.count,
        seed=args.seed,
        cfg=_generator_config(args),
        oracle_cap=_resolve_cap(args.cap),
    )
    text = toolkit.experiment_csv(rows)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    for line in toolkit.summary_lines(summary):
        sys.stderr.write(line + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
