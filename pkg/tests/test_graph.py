"""Tests for graph construction, the named families, and edge lists.

Edge and degree counts of the constructors are checked directly; the
join/union algebra and connectivity are cross-checked against networkx.
Families are checked for part sizes, closed-form edge counts and the
inequality each invalid parameter combination names.
"""

from __future__ import annotations

import networkx as nx
import pytest

from certifier.graph import (
    FamilyError,
    FamilySpec,
    EdgeListError,
    Graph,
    GraphError,
    VertexCapError,
    build_family,
    delete_vertices,
    edge_count,
    emit_edge_list,
    empty_graph,
    family_cells,
    graph_from_edges,
    graph_join,
    graph_union,
    induced_subgraph,
    is_complete,
    is_connected,
    is_star,
    make_complete,
    min_degree,
    parse_edge_list,
    relabel,
    star_graph,
    to_networkx,
    from_networkx,
    with_edge,
    without_edge,
)


class TestGraphInvariants:

    def test_asymmetric_rows_rejected(self):
        with pytest.raises(GraphError, match="asymmetric"):
            Graph(2, (0b10, 0))

    def test_loop_rejected(self):
        with pytest.raises(GraphError, match="loop"):
            Graph(1, (0b1,))

    def test_vertex_cap(self):
        with pytest.raises(VertexCapError):
            empty_graph(65)

    def test_vertex_cap_is_a_graph_error(self):
        assert issubclass(VertexCapError, GraphError)

    def test_edges_are_sorted_pairs(self, c5):
        assert c5.edges() == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]

    def test_out_of_range_edge(self):
        with pytest.raises(GraphError, match="out of range"):
            graph_from_edges(3, [(0, 3)])


class TestConstructors:

    def test_empty_complete(self):
        g = make_complete(0)
        assert g.n == 0
        assert edge_count(g) == 0

    def test_k4(self, k4):
        assert edge_count(k4) == 6
        assert k4.degrees() == [3, 3, 3, 3]

    def test_union_of_two_k1(self):
        g = graph_union(make_complete(1), make_complete(1))
        assert g.n == 2
        assert edge_count(g) == 0
        assert not is_connected(g)

    def test_union_k3_k2(self):
        g = graph_union(make_complete(3), make_complete(2))
        assert (g.n, edge_count(g)) == (5, 4)

    def test_folded_union_is_independent_set(self):
        g = make_complete(0)
        for _ in range(4):
            g = graph_union(g, make_complete(1))
        assert g.n == 4
        assert edge_count(g) == 0

    def test_join_edge_count(self):
        g = graph_join(make_complete(2), empty_graph(3))
        assert edge_count(g) == 1 + 0 + 2 * 3

    def test_join_matches_networkx(self):
        g = graph_join(make_complete(2), graph_union(make_complete(3), empty_graph(1)))
        expected = nx.complete_graph(2)
        other = nx.disjoint_union(nx.complete_graph(3), nx.empty_graph(1))
        expected = nx.disjoint_union(expected, other)
        expected.add_edges_from((u, v) for u in range(2) for v in range(2, 6))
        assert nx.is_isomorphic(to_networkx(g), expected)

    def test_star(self):
        g = star_graph(4)
        assert g.degree(0) == 4
        assert is_star(g)

    def test_k2_is_a_star_and_complete(self):
        g = make_complete(2)
        assert is_star(g)
        assert is_complete(g)

    def test_k1_is_not_a_star(self):
        assert not is_star(make_complete(1))


class TestOperations:

    def test_delete_vertices_relabels(self, p5):
        g = delete_vertices(p5, [0])
        assert g.edges() == [(0, 1), (1, 2), (2, 3)]

    def test_induced_subgraph(self, k4):
        g = induced_subgraph(k4, [1, 3])
        assert g.edges() == [(0, 1)]

    def test_induced_subgraph_accepts_an_iterator(self, k4):
        assert induced_subgraph(k4, iter([0, 2, 3])) == make_complete(3)

    def test_relabel_reverses_path(self, p5):
        g = relabel(p5, [4, 3, 2, 1, 0])
        assert g.edges() == p5.edges()

    def test_with_and_without_edge(self, c5):
        g = with_edge(c5, 0, 2)
        assert g.has_edge(2, 0)
        assert without_edge(g, 0, 2) == c5

    def test_min_degree_of_empty_graph(self):
        with pytest.raises(GraphError):
            min_degree(make_complete(0))

    def test_networkx_round_trip(self, c6):
        assert from_networkx(to_networkx(c6)) == c6


class TestFamilies:

    def test_tree_extremal_parts(self):
        spec = FamilySpec("tree-extremal", 16, d=4)
        assert spec.parts() == (1, 14, 1)
        assert spec.label() == "K_1 ∨ (K_14 ∪ K_1)"

    def test_tree_proof_g1_edge_count(self):
        g = build_family(FamilySpec("tree-proof-g1", 16, d=4, q=2))
        assert g.n == 16
        assert edge_count(g) == 95

    def test_fke_extremal_a(self, fke_extremal_a):
        assert fke_extremal_a.n == 11
        assert fke_extremal_a.degree(0) == 10
        assert fke_extremal_a.degree(10) == 2
        assert is_connected(fke_extremal_a)

    def test_fke_extremal_b_with_delta_2k_minus_1_is_complete(self):
        g = build_family(FamilySpec("fke-extremal-b", 11, k=1, delta=1))
        assert is_complete(g)

    def test_fke_proof_g1_parts(self):
        spec = FamilySpec("fke-proof-g1", 11, k=1, s=3)
        assert spec.parts() == (3, 6, 2)

    def test_tree_extremal_needs_hub(self):
        with pytest.raises(FamilyError, match=r"ceil\(d/2\)-1 >= 1"):
            build_family(FamilySpec("tree-extremal", 5, d=2))

    def test_fke_proof_g1_s_bound(self):
        with pytest.raises(FamilyError, match="s >= 2k"):
            FamilySpec("fke-proof-g1", 11, k=2, s=3).validate()

    def test_fke_extremal_b_isolated_part(self):
        with pytest.raises(FamilyError, match="delta - 2k \\+ 1 >= 0"):
            FamilySpec("fke-extremal-b", 11, k=2, delta=2).validate()

    def test_missing_parameter(self):
        with pytest.raises(FamilyError, match="d is given"):
            FamilySpec("tree-extremal", 16).validate()

    def test_unknown_kind(self):
        with pytest.raises(FamilyError):
            FamilySpec("petersen", 10).validate()

    def test_cells_drop_empty_clique(self):
        # n = 2s - 2k + 1 leaves the clique part empty.
        spec = FamilySpec("fke-proof-g1", 5, k=1, s=3)
        assert spec.parts() == (3, 0, 2)
        assert family_cells(spec) == [[0, 1, 2], [3, 4]]

    def test_to_dict_names_only_relevant_parameters(self):
        document = FamilySpec("fke-extremal-a", 11, k=1).to_dict()
        assert document == {"kind": "fke-extremal-a", "n": 11, "k": 1,
                            "label": "K_2 ∨ (K_8 ∪ K_1)"}


class TestEdgeLists:

    def test_parse_with_header_and_comments(self):
        g = parse_edge_list("# triangle plus one\nn 4\n0 1\n1 2  # side\n0 2\n")
        assert g.n == 4
        assert edge_count(g) == 3

    def test_parse_without_header(self):
        g = parse_edge_list("0 1\n1 2\n")
        assert g.n == 3

    def test_header_after_edges(self):
        with pytest.raises(EdgeListError, match="line 2"):
            parse_edge_list("0 1\nn 3\n")

    def test_malformed_line(self):
        with pytest.raises(EdgeListError, match="line 1"):
            parse_edge_list("0 1 2\n")

    def test_loop_is_an_edge_list_error(self):
        with pytest.raises(EdgeListError):
            parse_edge_list("1 1\n")

    def test_emit_then_parse(self, c6):
        assert parse_edge_list(emit_edge_list(c6)) == c6
