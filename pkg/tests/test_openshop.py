import pytest
from hypothesis import given, strategies as st

from conftest import mk_chain, mk_instance
from rosh.errors import PreconditionError
from rosh.model import Instance, Job, TreeNetwork
from rosh.openshop import chain_diagonal_at_depot, chain_long_diagonal, diagonal_job, gonzalez_sahni
from rosh.schedule import validate


def single_node(jobs):
    net = TreeNetwork(nodes=("v0",), edges=(), depot="v0")
    return mk_instance(net, [(f"J{i}", "v0", a, b) for i, (a, b) in enumerate(jobs, 1)])


class TestDiagonalJob:
    def test_picks_largest_min(self, gs_triple):
        info = diagonal_job(gs_triple)
        assert info.job.id == "z"
        assert info.in_set_a
        assert info.set_a == ("y", "z")
        assert info.set_b == ("x",)

    def test_tie_goes_to_earliest(self):
        inst = single_node([(3, 4), (4, 3)])
        assert diagonal_job(inst).job.id == "J1"

    def test_machine_two_heavy_job(self):
        inst = single_node([(3, 1), (1, 2)])
        info = diagonal_job(inst)
        assert info.job.id == "J1"
        assert not info.in_set_a

    def test_no_jobs(self):
        net = TreeNetwork(nodes=("v0",), edges=(), depot="v0")
        with pytest.raises(PreconditionError, match="no jobs"):
            diagonal_job(Instance(network=net, jobs=()))


class TestGonzalezSahni:
    def test_frozen_triple(self, gs_triple):
        sched = gonzalez_sahni(gs_triple)
        assert sched.makespan == 6
        report = validate(gs_triple, sched)
        assert report.feasible and report.normal

    def test_multi_node_rejected(self, oe1):
        with pytest.raises(PreconditionError, match="single node"):
            gonzalez_sahni(oe1)

    def test_machine_swap_branch(self):
        # diagonal (3,1) sits in set B, forcing the mirrored construction
        inst = single_node([(3, 1), (1, 2)])
        sched = gonzalez_sahni(inst)
        report = validate(inst, sched)
        assert report.feasible
        assert sched.makespan == inst.metrics.lower_bound

    def test_single_job(self):
        inst = single_node([(4, 2)])
        sched = gonzalez_sahni(inst)
        assert sched.makespan == 6
        assert validate(inst, sched).feasible

    def test_dominant_diagonal_branch(self):
        # diagonal at least as long as the heavier load: order keeps instance order
        inst = single_node([(1, 0), (3, 4), (0, 1)])
        info = diagonal_job(inst)
        assert info.job.length >= inst.metrics.load_max
        sched = gonzalez_sahni(inst)
        assert validate(inst, sched).feasible
        assert sched.makespan == inst.metrics.lower_bound

    @given(
        st.lists(
            st.tuples(st.integers(0, 7), st.integers(0, 7)), min_size=1, max_size=6
        )
    )
    def test_always_meets_classical_optimum(self, durations):
        inst = single_node(durations)
        sched = gonzalez_sahni(inst)
        report = validate(inst, sched)
        assert report.feasible
        assert sched.makespan == inst.metrics.lower_bound


class TestChainDiagonalAtDepot:
    def test_worked_reduction(self, sample):
        from rosh.reduction import reduce_instance

        reduced, _, _ = reduce_instance(sample)
        sched = chain_diagonal_at_depot(reduced)
        assert sched.makespan == 57
        report = validate(reduced, sched)
        assert report.feasible and report.normal

    def test_depot_precondition(self, oe1):
        with pytest.raises(PreconditionError, match="depot"):
            chain_diagonal_at_depot(oe1)

    def test_swap_branch(self):
        # depot diagonal heavier on machine 1
        inst = mk_instance(
            mk_chain([1]), [("r", "v0", 6, 5), ("s", "v1", 2, 1), ("t", "v1", 1, 2)]
        )
        assert not diagonal_job(inst).in_set_a
        sched = chain_diagonal_at_depot(inst)
        report = validate(inst, sched)
        assert report.feasible
        assert sched.makespan == inst.metrics.lower_bound

    def test_blocks_walk_the_chain(self):
        inst = mk_instance(
            mk_chain([1, 1]),
            [("r", "v0", 5, 5), ("a1", "v1", 1, 2), ("a2", "v2", 1, 3), ("b1", "v2", 3, 1)],
        )
        sched = chain_diagonal_at_depot(inst)
        report = validate(inst, sched)
        assert report.feasible
        assert sched.makespan == inst.metrics.lower_bound
        # set-A jobs run outward on machine 1, before the diagonal job
        assert sched.entry("a1", 1).end <= sched.entry("a2", 1).start
        assert sched.entry("a2", 1).end <= sched.entry("b1", 1).start
        assert sched.entry("b1", 1).end <= sched.entry("r", 1).start


class TestChainLongDiagonal:
    def test_far_dominant_job(self, oe1):
        sched = chain_long_diagonal(oe1)
        assert sched.makespan == 22
        report = validate(oe1, sched)
        assert report.feasible and report.normal

    def test_requires_far_terminal(self):
        inst = mk_instance(mk_chain([1]), [("r", "v0", 9, 9), ("s", "v1", 1, 1)])
        with pytest.raises(PreconditionError, match="far terminal"):
            chain_long_diagonal(inst)

    def test_requires_dominant_length(self):
        inst = mk_instance(
            mk_chain([1]),
            [("d1", "v0", 4, 1), ("d2", "v0", 1, 4), ("d3", "v0", 1, 1), ("r", "v1", 5, 5)],
        )
        assert diagonal_job(inst).job.id == "r"
        assert inst.metrics.load_max > inst.job("r").length
        with pytest.raises(PreconditionError, match="shorter"):
            chain_long_diagonal(inst)

    def test_interior_jobs(self):
        inst = mk_instance(
            mk_chain([1, 1]),
            [("a", "v0", 1, 1), ("b", "v1", 2, 1), ("r", "v2", 8, 9)],
        )
        sched = chain_long_diagonal(inst)
        report = validate(inst, sched)
        assert report.feasible
        assert sched.makespan == inst.metrics.lower_bound
