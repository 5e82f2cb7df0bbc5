"""Structural classification: subtree weights and sufficient normality tests.

The weight of a subtree is the total job length inside it plus four times its
edge travel times: exactly the load the subtree contributes after it is fully
folded into its root by contractions. Each of the four conditions below
forces the reduction to end in a shape one of the guaranteed schedulers
accepts, so any of them certifies that the optimum equals the lower bound.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError
from .model import Instance, TreeEdge, TreeNetwork
from .reduction import is_node_overloaded, node_budget


@dataclass(frozen=True)
class NormalityConditions:
    """Outcome of the four sufficient conditions; ``any`` is their disjunction.

    ``condition3`` carries the witness edge, ``condition4`` the witness node
    (None when the condition fails everywhere).
    """

    condition1: bool
    condition2: bool
    condition3: TreeEdge | None
    condition4: str | None
    any: bool


def subtree_nodes(net: TreeNetwork, root: str) -> tuple[str, ...]:
    """Nodes whose path to the depot passes through ``root`` (root included)."""
    net.require_node(root)
    out = [root]
    queue = deque([root])
    seen = {root}
    parent = net.parent_of(root)
    while queue:
        u = queue.popleft()
        for w in net.neighbors(u):
            if w in seen or (u == root and w == parent):
                continue
            seen.add(w)
            out.append(w)
            queue.append(w)
    return tuple(out)


def subtree_weight(inst: Instance, root: str) -> int:
    """Job lengths in the subtree plus four times its internal travel times."""
    nodes = set(subtree_nodes(inst.network, root))
    load = sum(inst.metrics.node_load[v] for v in nodes)
    travel = sum(e.tau for e in inst.network.edges if e.u in nodes and e.v in nodes)
    return load + 4 * travel


def _children(net: TreeNetwork, v: str) -> list[str]:
    parent = net.parent_of(v)
    return [w for w in net.neighbors(v) if w != parent]


def check_normality_conditions(inst: Instance) -> NormalityConditions:
    """Evaluate the four sufficient conditions for the optimum to meet the bound.

    1. the depot is overloaded;
    2. every depot subtree's weight fits through its first edge;
    3. some subtree weight lands inside the window that makes its top edge the
       single blocked object;
    4. some node's children all fold into it while the node's own weight is
       large against its budget and its heaviest piece.
    """
    net = inst.network
    rbar = inst.metrics.lower_bound
    weight = {v: subtree_weight(inst, v) for v in net.nodes}

    condition1 = is_node_overloaded(inst, net.depot)

    condition2 = all(
        weight[v] <= rbar - 2 * tau for v, tau in net.neighbors(net.depot).items()
    )

    condition3: TreeEdge | None = None
    for e in net.edges:
        far = e.u if net.parent_of(e.u) == e.v else e.v
        hi = rbar - 2 * net.depth(far)
        if hi - 2 * e.tau < weight[far] <= hi:
            condition3 = e
            break

    condition4: str | None = None
    for v in net.nodes:
        if v == net.depot:
            continue
        kids = _children(net, v)
        if any(weight[u] > rbar - 2 * net.depth(u) for u in kids):
            continue
        heaviest = inst.metrics.node_dmax[v]
        for u in kids:
            heaviest = max(heaviest, weight[u] + 4 * net.neighbors(v)[u])
        if 2 * weight[v] > 3 * node_budget(inst, v) + 2 * heaviest:
            condition4 = v
            break

    return NormalityConditions(
        condition1=condition1,
        condition2=condition2,
        condition3=condition3,
        condition4=condition4,
        any=condition1 or condition2 or condition3 is not None or condition4 is not None,
    )


def is_irreducible_partition(
    inst: Instance, v: str, parts: Sequence[Iterable[str]]
) -> bool:
    """True when each part fits the node budget but every pairwise union exceeds it.

    ``parts`` must be three disjoint groups covering exactly the jobs at ``v``
    (empty groups allowed; the checks are evaluated literally). A node with
    such a partition is superoverloaded: no aggregation can reduce it below
    three jobs without raising the bound.
    """
    inst.network.require_node(v)
    groups = [tuple(p) for p in parts]
    if len(groups) != 3:
        raise InputError("expected exactly three groups")
    flat = [job_id for g in groups for job_id in g]
    if len(set(flat)) != len(flat):
        raise InputError("groups overlap")
    if set(flat) != {j.id for j in inst.jobs_at[v]}:
        raise InputError(f"groups do not cover exactly the jobs at {v!r}")
    budget = node_budget(inst, v)
    lengths = [sum(inst.job(job_id).length for job_id in g) for g in groups]
    if any(w > budget for w in lengths):
        return False
    pairs = ((0, 1), (0, 2), (1, 2))
    return all(lengths[i] + lengths[j] > budget for i, j in pairs)
