"""Two-machine routing open shop on a tree.

Exact schedulers, instance reduction, normality classification, and a
brute-force oracle for small instances.
"""

from .classify import NormalityConditions, check_normality_conditions, is_irreducible_partition
from .errors import (
    InputError,
    InternalError,
    OracleCapError,
    PreconditionError,
    RoshError,
    SchemeError,
    ValidityError,
)
from .model import Instance, InstanceMetrics, Job, TreeEdge, TreeNetwork
from .openshop import chain_diagonal_at_depot, chain_long_diagonal, diagonal_job, gonzalez_sahni
from .oracle import DEFAULT_CAP, OracleResult, optimal_makespan
from .reduction import (
    Outcome,
    OutcomeKind,
    ReductionTrace,
    aggregate,
    contract,
    expand,
    is_edge_overloaded,
    is_node_overloaded,
    node_budget,
    overload_census,
    partition_v1,
    partition_v2,
    reduce_instance,
)
from .schedule import (
    PrecedenceScheme,
    Schedule,
    ScheduleEntry,
    ValidationReport,
    build_early,
    sequence_scheme,
    validate,
)
from .schedulers import SolveReport, schedule_overloaded_edge, schedule_three_jobs, solve
from .toolkit import (
    GeneratorConfig,
    gen_random,
    parse_instance,
    parse_schedule,
    run_experiment,
    write_instance,
    write_schedule,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CAP",
    "GeneratorConfig",
    "InputError",
    "Instance",
    "InstanceMetrics",
    "InternalError",
    "Job",
    "NormalityConditions",
    "OracleCapError",
    "OracleResult",
    "Outcome",
    "OutcomeKind",
    "PreconditionError",
    "PrecedenceScheme",
    "ReductionTrace",
    "RoshError",
    "Schedule",
    "ScheduleEntry",
    "SchemeError",
    "SolveReport",
    "TreeEdge",
    "TreeNetwork",
    "ValidationReport",
    "ValidityError",
    "aggregate",
    "build_early",
    "chain_diagonal_at_depot",
    "chain_long_diagonal",
    "check_normality_conditions",
    "contract",
    "diagonal_job",
    "expand",
    "gen_random",
    "gonzalez_sahni",
    "is_edge_overloaded",
    "is_irreducible_partition",
    "is_node_overloaded",
    "node_budget",
    "optimal_makespan",
    "overload_census",
    "parse_instance",
    "parse_schedule",
    "partition_v1",
    "partition_v2",
    "reduce_instance",
    "run_experiment",
    "schedule_overloaded_edge",
    "schedule_three_jobs",
    "sequence_scheme",
    "solve",
    "validate",
    "write_instance",
    "write_schedule",
]
