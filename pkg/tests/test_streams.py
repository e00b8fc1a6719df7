"""Tests for the graph streams: the small-order catalogue, edge
deletions, seeded samplers, and corpus reading."""

from __future__ import annotations

import pytest

from certifier.graph import edge_count, empty_graph, is_connected, make_complete
from certifier.graph6 import Graph6CharacterError, emit_graph6
from certifier.isomorphism import is_isomorphic
from certifier.streams import (
    SamplerConfig,
    all_graphs,
    edge_deletions,
    graphs_up_to,
    iter_instances,
    mutation_stream,
    random_graphs,
    read_corpus,
)


class TestAllGraphs:

    @pytest.mark.parametrize("n, expected", [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156)])
    def test_counts(self, n, expected):
        assert len(all_graphs(n)) == expected

    @pytest.mark.parametrize("n, expected", [(3, 2), (4, 6), (5, 21), (6, 112), (7, 853)])
    def test_connected_counts(self, n, expected):
        graphs = all_graphs(n, connected=True)
        assert len(graphs) == expected
        assert all(is_connected(g) for g in graphs)

    @pytest.mark.slow
    def test_connected_order_8(self):
        assert len(all_graphs(8, connected=True)) == 11117

    def test_pairwise_non_isomorphic(self):
        graphs = all_graphs(5)
        for i, g in enumerate(graphs):
            for h in graphs[i + 1:]:
                assert not is_isomorphic(g, h)

    def test_graphs_up_to(self):
        assert sum(1 for _ in graphs_up_to(4, connected=True)) == 1 + 1 + 2 + 6

    def test_order_out_of_range(self):
        with pytest.raises(ValueError):
            all_graphs(9)


class TestEdgeDeletions:

    def test_counts(self):
        assert sum(1 for _ in edge_deletions(make_complete(4), 1)) == 7
        assert sum(1 for _ in edge_deletions(make_complete(4), 2)) == 22

    def test_starts_from_the_base(self):
        base = make_complete(5)
        assert next(iter(edge_deletions(base, 2))) == base

    def test_fixed_order(self):
        first = [emit_graph6(g) for g in edge_deletions(make_complete(5), 2)]
        second = [emit_graph6(g) for g in edge_deletions(make_complete(5), 2)]
        assert first == second


class TestSamplers:

    def test_mutation_is_deterministic(self):
        base = make_complete(8)
        first = [emit_graph6(g) for g in mutation_stream(base, 3, 20, seed=4)]
        second = [emit_graph6(g) for g in mutation_stream(base, 3, 20, seed=4)]
        assert first == second

    def test_deleting_mutations_stay_close_to_the_base(self):
        for g in mutation_stream(make_complete(8), 3, 50, seed=1, add=False):
            assert 28 - 3 <= edge_count(g) < 28

    def test_random_graphs(self):
        graphs = list(random_graphs(6, 0.5, 10, seed=2))
        assert len(graphs) == 10
        assert graphs == list(random_graphs(6, 0.5, 10, seed=2))

    def test_iter_instances_deletion(self):
        config = SamplerConfig(kind="deletion", max_edits=1)
        assert sum(1 for _ in iter_instances(config, 5)) == 11

    def test_iter_instances_unknown_kind(self):
        with pytest.raises(ValueError, match="sampler"):
            iter_instances(SamplerConfig(kind="bogus"), 5)

    def test_corpus_needs_a_file(self):
        with pytest.raises(ValueError, match="corpus"):
            iter_instances(SamplerConfig(kind="corpus"), 5)

    def test_complete_base_only_deletes(self):
        config = SamplerConfig(kind="mutation", samples=20, max_edits=2, seed=6)
        assert all(edge_count(g) < 10 for g in iter_instances(config, 5))

    def test_extremal_base_adds_edges(self):
        config = SamplerConfig(kind="mutation", samples=10, max_edits=1, base="extremal")
        graphs = list(iter_instances(config, 6, empty_graph(6)))
        assert len(graphs) == 10
        assert all(edge_count(g) == 1 for g in graphs)

    def test_extremal_base_deletions_start_from_it(self, tree_extremal):
        config = SamplerConfig(kind="deletion", max_edits=1, base="extremal")
        graphs = list(iter_instances(config, 16, tree_extremal))
        assert graphs[0] == tree_extremal
        assert len(graphs) == 1 + edge_count(tree_extremal)

    def test_extremal_base_needs_a_graph(self):
        with pytest.raises(ValueError, match="extremal"):
            list(iter_instances(SamplerConfig(base="extremal"), 5))

    def test_unknown_base(self):
        with pytest.raises(ValueError, match="base"):
            iter_instances(SamplerConfig(base="petersen"), 5)


class TestReadCorpus:

    def test_reads_graphs(self, tmp_path):
        corpus = tmp_path / "corpus.g6"
        corpus.write_text("Bw\n\n@\n")
        assert [g.n for g in read_corpus(corpus)] == [3, 1]

    def test_bad_line_is_named(self, tmp_path):
        corpus = tmp_path / "corpus.g6"
        corpus.write_text("Bw\nB!\n")
        with pytest.raises(Graph6CharacterError, match="line 2"):
            list(read_corpus(corpus))

    def test_corpus_sampler(self, tmp_path):
        corpus = tmp_path / "corpus.g6"
        corpus.write_text("Bw\n")
        config = SamplerConfig(kind="corpus", corpus=str(corpus))
        assert list(iter_instances(config, 3)) == [make_complete(3)]
