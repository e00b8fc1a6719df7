"""Tests for leaf distance, spanning-tree counting and enumeration, and
the two tree oracles.

Tree counts are compared with Cayley's formula and networkx; the
exhaustive oracle is checked for Found and Absent on cycles, and the
constructive search for reproducibility under a fixed seed.
"""

from __future__ import annotations

import networkx as nx
import pytest

from certifier.graph import (
    GraphError,
    cycle_graph,
    from_networkx,
    graph_union,
    make_complete,
    path_graph,
    star_graph,
)
from certifier.spanning_trees import (
    TreeBudgetError,
    TreeError,
    construct_tree,
    iter_spanning_trees,
    leaf_degree,
    leaf_distance,
    meets,
    spanning_tree_count,
    spanning_tree_leafdist,
    tree_from_edges,
)


class TestCertificates:

    def test_path(self, p5):
        tree = tree_from_edges(p5, p5.edges())
        assert tree.leaf_distance == 4
        assert tree.leaf_degree == 1

    def test_star(self):
        g = star_graph(4)
        tree = tree_from_edges(g, g.edges())
        assert tree.leaf_distance == 2
        assert tree.leaf_degree == 4

    def test_single_edge(self):
        g = make_complete(2)
        assert tree_from_edges(g, [(0, 1)]).leaf_distance == 1

    def test_single_vertex_has_no_leaf_pair(self):
        tree = tree_from_edges(make_complete(1), [])
        assert tree.leaf_distance is None
        assert meets(tree.leaf_distance, 100)

    def test_accessors_revalidate(self, p5):
        tree = tree_from_edges(p5, p5.edges())
        assert leaf_distance(tree, p5) == 4
        assert leaf_degree(tree, p5) == 1

    def test_wrong_edge_count(self, c5):
        with pytest.raises(TreeError, match="4 edges"):
            tree_from_edges(c5, c5.edges())

    def test_non_host_edge(self, p5):
        with pytest.raises(TreeError, match="not an edge"):
            tree_from_edges(p5, [(0, 1), (1, 2), (2, 3), (0, 4)])

    def test_cycle_leaves_a_vertex_out(self, k4):
        with pytest.raises(TreeError, match="connect"):
            tree_from_edges(k4, [(0, 1), (1, 2), (0, 2)])

    def test_repeated_edge(self, k4):
        with pytest.raises(TreeError, match="repeated"):
            tree_from_edges(k4, [(0, 1), (1, 0), (2, 3)])


class TestCounting:

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_cayley(self, n):
        assert spanning_tree_count(make_complete(n)) == max(1, n ** (n - 2))

    def test_cycle(self, c6):
        assert spanning_tree_count(c6) == 6

    def test_disconnected(self):
        assert spanning_tree_count(graph_union(make_complete(2), make_complete(2))) == 0

    def test_petersen(self):
        assert spanning_tree_count(from_networkx(nx.petersen_graph())) == 2000


class TestEnumeration:

    def test_k4_trees(self, k4):
        trees = list(iter_spanning_trees(k4))
        assert len(trees) == 16
        assert len(set(trees)) == 16
        for edges in trees:
            assert nx.is_tree(nx.Graph(list(edges)))

    def test_enumeration_count_matches(self, c6):
        assert len(list(iter_spanning_trees(c6))) == spanning_tree_count(c6)

    def test_budget_refusal(self):
        with pytest.raises(TreeBudgetError) as info:
            list(iter_spanning_trees(make_complete(6), budget=100))
        assert info.value.count == 1296


class TestOracles:

    def test_c6_d5_found(self, c6):
        result = spanning_tree_leafdist(c6, 5, "exhaustive")
        assert result.status == "found"
        assert result.certificate.leaf_distance == 5

    def test_c6_d6_absent(self, c6):
        result = spanning_tree_leafdist(c6, 6, "exhaustive")
        assert result.status == "absent"
        assert result.trees_examined == 6

    def test_construct_never_claims_absence(self, c6):
        assert spanning_tree_leafdist(c6, 6, "construct", restarts=4).status == "unknown"

    def test_construct_on_complete_graph(self):
        result = spanning_tree_leafdist(make_complete(16), 4)
        assert result.status == "found"
        assert meets(result.certificate.leaf_distance, 4)

    def test_construct_is_reproducible(self, tree_extremal):
        first, _ = construct_tree(tree_extremal, 4, restarts=8, seed=11)
        second, _ = construct_tree(tree_extremal, 4, restarts=8, seed=11)
        assert first == second

    def test_exhaustive_over_budget_is_unknown(self):
        result = spanning_tree_leafdist(make_complete(8), 7, "exhaustive", budget=10)
        assert result.status == "unknown"
        assert result.tree_count == 8 ** 6

    def test_certificate_is_a_spanning_tree(self):
        g = cycle_graph(7)
        result = spanning_tree_leafdist(g, 6)
        assert result.status == "found"
        tree = nx.Graph([tuple(e) for e in result.certificate.edges])
        assert nx.is_tree(tree)
        assert tree.number_of_nodes() == g.n

    def test_disconnected_rejected(self):
        with pytest.raises(GraphError):
            spanning_tree_leafdist(graph_union(make_complete(2), make_complete(2)), 2)

    def test_bad_mode(self, c6):
        with pytest.raises(ValueError, match="mode"):
            spanning_tree_leafdist(c6, 3, "guess")

    def test_path_has_only_itself(self):
        result = spanning_tree_leafdist(path_graph(5), 4, "exhaustive")
        assert result.status == "found"
        assert result.tree_count == 1
