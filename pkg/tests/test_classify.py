"""Tests for subtree weights and the sufficient normality conditions."""

import pytest
from hypothesis import given, settings

from conftest import mk_chain, mk_instance, small_instances
from rosh.classify import (
    check_normality_conditions,
    is_irreducible_partition,
    subtree_nodes,
    subtree_weight,
)
from rosh.errors import InputError
from rosh.model import TreeEdge
from rosh.schedulers import solve


class TestSubtreeWeight:
    def test_whole_network(self, sample):
        # every job plus four times every travel time
        assert subtree_weight(sample, "v0") == 113

    def test_inner_subtrees(self, sample):
        assert subtree_weight(sample, "v4") == 65
        assert subtree_weight(sample, "v2") == 15
        assert subtree_weight(sample, "v6") == 37

    def test_leaf_weight_is_its_load(self, sample):
        assert subtree_weight(sample, "v8") == sample.metrics.node_load["v8"]

    def test_subtree_nodes(self, sample):
        assert subtree_nodes(sample.network, "v4") == ("v4", "v5", "v6", "v7", "v8")
        assert subtree_nodes(sample.network, "v2") == ("v2", "v1")
        assert set(subtree_nodes(sample.network, "v0")) == set(sample.network.nodes)

    def test_unknown_root(self, sample):
        with pytest.raises(InputError, match="unknown node"):
            subtree_weight(sample, "zz")

    @settings(max_examples=40)
    @given(small_instances())
    def test_root_weight_decomposes(self, inst):
        net = inst.network
        depot_total = inst.metrics.node_load[net.depot] + sum(
            subtree_weight(inst, v) + 4 * tau for v, tau in net.neighbors(net.depot).items()
        )
        assert subtree_weight(inst, net.depot) == depot_total


class TestConditions:
    def test_sample_meets_none(self, sample):
        conds = check_normality_conditions(sample)
        assert conds == check_normality_conditions(sample)
        assert not conds.condition1
        assert not conds.condition2  # v4 subtree is too heavy for its first edge
        assert conds.condition3 is None
        assert conds.condition4 is None
        assert not conds.any

    def test_overloaded_depot(self, gs_triple):
        conds = check_normality_conditions(gs_triple)
        assert conds.condition1
        assert conds.any

    def test_light_subtrees(self):
        inst = mk_instance(mk_chain([]), [("a", "v0", 3, 0), ("b", "v0", 2, 0)])
        conds = check_normality_conditions(inst)
        # no depot neighbours at all: the per-subtree test holds vacuously
        assert not conds.condition1
        assert conds.condition2
        assert conds.any

    def test_blocked_edge_window(self, oe1):
        conds = check_normality_conditions(oe1)
        assert conds.condition2
        assert conds.condition3 == TreeEdge("v0", "v1", 1)
        assert conds.any

    def test_heavy_node_with_foldable_children(self):
        inst = mk_instance(mk_chain([1]), [(f"J{i}", "v1", 2, 2) for i in range(1, 7)])
        conds = check_normality_conditions(inst)
        assert not conds.condition1
        assert not conds.condition2
        assert conds.condition3 is None
        assert conds.condition4 == "v1"
        assert conds.any

    @settings(max_examples=40)
    @given(small_instances())
    def test_witnesses_are_well_formed(self, inst):
        conds = check_normality_conditions(inst)
        assert conds.any == (
            conds.condition1
            or conds.condition2
            or conds.condition3 is not None
            or conds.condition4 is not None
        )
        if conds.condition3 is not None:
            assert conds.condition3 in inst.network.edges
        if conds.condition4 is not None:
            assert conds.condition4 in inst.network.nodes
            assert conds.condition4 != inst.network.depot

    @settings(max_examples=40)
    @given(small_instances(max_nodes=4, max_p=5))
    def test_any_condition_forces_the_bound(self, inst):
        conds = check_normality_conditions(inst)
        if conds.any:
            report = solve(inst)
            assert report.status == "normal"
            assert report.gap == 0


class TestIrreduciblePartition:
    def test_superoverloaded_node(self):
        inst = mk_instance(
            mk_chain([1]),
            [("d", "v0", 1, 0), ("a", "v1", 4, 4), ("b", "v1", 4, 4), ("c", "v1", 4, 4)],
        )
        assert inst.metrics.lower_bound == 15
        assert is_irreducible_partition(inst, "v1", [("a",), ("b",), ("c",)])

    def test_mergeable_pair_fails(self):
        inst = mk_instance(
            mk_chain([1]),
            [("d", "v0", 0, 0), ("a", "v1", 6, 6), ("b", "v1", 4, 4), ("c", "v1", 2, 2)],
        )
        # the two shortest together still fit the budget
        assert not is_irreducible_partition(inst, "v1", [("a",), ("b",), ("c",)])

    def test_oversized_group_fails(self):
        inst = mk_instance(
            mk_chain([1]),
            [("d", "v0", 1, 0), ("a", "v1", 4, 4), ("b", "v1", 4, 4), ("c", "v1", 4, 4)],
        )
        assert not is_irreducible_partition(inst, "v1", [("a", "b"), ("c",), ()])

    def test_group_count_checked(self, gs_triple):
        with pytest.raises(InputError, match="three groups"):
            is_irreducible_partition(gs_triple, "v0", [("x",), ("y", "z")])

    def test_overlap_checked(self, gs_triple):
        with pytest.raises(InputError, match="overlap"):
            is_irreducible_partition(gs_triple, "v0", [("x",), ("x",), ("y", "z")])

    def test_cover_checked(self, gs_triple):
        with pytest.raises(InputError, match="cover"):
            is_irreducible_partition(gs_triple, "v0", [("x",), ("y",), ()])

    def test_foreign_id_checked(self, gs_triple):
        with pytest.raises(InputError, match="cover"):
            is_irreducible_partition(gs_triple, "v0", [("x",), ("y",), ("qq",)])
