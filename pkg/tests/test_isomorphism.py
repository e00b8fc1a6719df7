"""Tests for isomorphism testing and extremal-graph recognition."""

from __future__ import annotations

import networkx as nx
import numpy as np

from certifier.graph import (
    FamilySpec,
    cycle_graph,
    from_networkx,
    graph_union,
    make_complete,
    relabel,
    with_edge,
    without_edge,
)
from certifier.isomorphism import invariant_key, is_extremal_graph, is_isomorphic


class TestIsIsomorphic:

    def test_relabelled_graph(self, fke_extremal_a):
        perm = list(reversed(range(fke_extremal_a.n)))
        assert is_isomorphic(fke_extremal_a, relabel(fke_extremal_a, perm))

    def test_same_invariants_different_graphs(self, c6):
        two_triangles = graph_union(make_complete(3), make_complete(3))
        assert invariant_key(c6) == invariant_key(two_triangles)
        assert not is_isomorphic(c6, two_triangles)

    def test_different_orders(self, c5, c6):
        assert not is_isomorphic(c5, c6)

    def test_agrees_with_networkx(self):
        rng = np.random.default_rng(5)
        for seed in range(10):
            first = nx.gnp_random_graph(8, 0.5, seed=seed)
            perm = [int(v) for v in rng.permutation(8)]
            second = nx.relabel_nodes(first, dict(enumerate(perm)))
            other = nx.gnp_random_graph(8, 0.5, seed=seed + 100)
            g = from_networkx(first)
            assert is_isomorphic(g, from_networkx(second))
            assert is_isomorphic(g, from_networkx(other)) == nx.is_isomorphic(first, other)


class TestExtremalRecognition:

    def test_built_family_is_recognised(self, tree_extremal):
        assert is_extremal_graph(tree_extremal, FamilySpec("tree-extremal", 16, d=4))

    def test_permuted_family_is_recognised(self, fke_extremal_a):
        perm = [(v * 4) % 11 for v in range(11)]
        spec = FamilySpec("fke-extremal-a", 11, k=1)
        assert is_extremal_graph(relabel(fke_extremal_a, perm), spec)

    def test_one_edge_away_is_not_extremal(self, fke_extremal_a):
        spec = FamilySpec("fke-extremal-a", 11, k=1)
        assert not is_extremal_graph(with_edge(fke_extremal_a, 2, 10), spec)
        assert not is_extremal_graph(without_edge(fke_extremal_a, 0, 1), spec)

    def test_wrong_order(self, c6):
        assert not is_extremal_graph(c6, FamilySpec("tree-extremal", 16, d=4))

    def test_complete_graph_is_not_tree_extremal(self):
        assert not is_extremal_graph(make_complete(16), FamilySpec("tree-extremal", 16, d=4))

    def test_cycle_is_itself(self):
        assert is_isomorphic(cycle_graph(7), relabel(cycle_graph(7), [3, 5, 0, 6, 1, 4, 2]))
