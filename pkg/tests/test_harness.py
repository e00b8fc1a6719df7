"""Tests for thresholds, verifiers, audits and lemma suites.

Grid-wide runs that take more than a few seconds are marked slow;
deselect them with -m "not slow".
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from certifier.graph import FamilySpec, cycle_graph, make_complete
from certifier.graph6 import emit_graph6
from certifier.harness import (
    AUDITS,
    audit_case2,
    audit_claim1,
    audit_gamma2,
    audit_grid,
    audit_lemma31,
    audit_psi1,
    case2_constants,
    claim1_boundaries,
    compare,
    edge_addition_check,
    extremal_fke_specs,
    family_quotient_root,
    lemma22_graphs,
    parallel_map,
    psi1,
    run_audit,
    run_suite,
    threshold_fke,
    threshold_tree,
    verify_thm1,
    verify_thm2,
)
from certifier.report import Quarantine, render_json
from certifier.streams import SamplerConfig


class TestParallelMap:

    def test_serial(self):
        values = list(parallel_map(claim1_boundaries, [1, 2, 3]))
        assert [v["s_eq_2k_1"] for v in values] == [70, 88, 106]

    def test_pool_preserves_order(self):
        ks = list(range(1, 30))
        assert list(parallel_map(claim1_boundaries, ks, jobs=2)) == [claim1_boundaries(k) for k in ks]


class TestThresholds:

    def test_tree_threshold(self):
        result = threshold_tree(16, 4)
        assert 14.0 < result.value < 15.0
        assert result.method_agreement < 1e-8
        assert result.family.kind == "tree-extremal"

    def test_tree_threshold_above_vertex_cap(self):
        result = threshold_tree(72, 8)
        assert 70.0 < result.value < 71.0
        assert result.method_agreement < 1e-8
        assert result.family.n == 72

    def test_tree_threshold_warns_outside_range(self, capsys):
        threshold_tree(12, 4)
        assert "Warning" in capsys.readouterr().err

    def test_fke_threshold_coincident_families(self):
        result = threshold_fke(11, 1, 2)
        assert 9.0 < result.value < 9.1
        assert len(result.candidates) == 2
        assert result.method_agreement < 1e-8
        assert any("coincides" in note for note in result.notes)

    def test_fke_threshold_degenerate_family(self):
        result = threshold_fke(11, 1, 1)
        assert result.value == pytest.approx(10.0, abs=1e-9)
        assert result.family.kind == "fke-extremal-b"
        assert any("degenerate" in note for note in result.notes)

    def test_fke_threshold_undefined_family(self):
        result = threshold_fke(13, 2, 2)
        assert len(result.candidates) == 1
        assert result.family.kind == "fke-extremal-a"

    def test_fke_threshold_rejects_zero(self):
        with pytest.raises(ValueError):
            threshold_fke(11, 0, 2)

    def test_family_quotient_root(self, tree_extremal):
        spec = FamilySpec("tree-extremal", 16, d=4)
        assert family_quotient_root(spec) == pytest.approx(threshold_tree(16, 4).value, abs=1e-8)

    def test_extremal_specs(self):
        assert len(extremal_fke_specs(11, 1, 2)) == 2
        assert len(extremal_fke_specs(13, 2, 2)) == 1


class TestVerifyThm1:

    def test_mutations_of_complete_graph(self):
        sampler = SamplerConfig(kind="mutation", samples=100, max_edits=3, seed=1)
        report = verify_thm1(16, 4, sampler, quiet=True)
        assert report.instances == 100
        assert report.counts["fail"] == 0
        assert report.counts["pass"] > 0
        assert report.extra["extremal_probe"]["informational"]

    def test_complete_graph_itself_passes(self, tmp_path):
        corpus = tmp_path / "k16.g6"
        corpus.write_bytes(emit_graph6(make_complete(16)) + b"\n")
        report = verify_thm1(16, 4, SamplerConfig(kind="corpus", corpus=str(corpus)),
                             quiet=True)
        assert report.grid[0]["verdict"] == "pass"

    def test_mutations_of_extremal_graph(self):
        sampler = SamplerConfig(kind="mutation", samples=20, seed=3, base="extremal")
        report = verify_thm1(16, 4, sampler, quiet=True)
        assert report.instances == 20
        assert report.counts["fail"] == 0
        assert report.params["sampler"]["base"] == "extremal"

    def test_extremal_graph_is_the_exception(self, tree_extremal, tmp_path):
        corpus = tmp_path / "corpus.g6"
        corpus.write_bytes(emit_graph6(tree_extremal) + b"\n" + emit_graph6(make_complete(9)) + b"\n")
        sampler = SamplerConfig(kind="corpus", corpus=str(corpus))
        report = verify_thm1(16, 4, sampler, quiet=True)
        assert report.counts["exception"] == 1
        assert report.grid[1]["reason"] == "order"

    def test_hypothesis_range_enforced(self):
        with pytest.raises(ValueError, match="exploratory"):
            verify_thm1(10, 4, quiet=True)

    def test_exploratory_run(self, capsys):
        sampler = SamplerConfig(kind="mutation", samples=3, seed=2)
        report = verify_thm1(10, 4, sampler, exploratory=True, quiet=True)
        assert report.exploratory
        assert "Exploratory" in capsys.readouterr().err


class TestVerifyThm2:

    def test_extremal_graphs_are_not_extendable(self):
        sampler = SamplerConfig(kind="deletion", max_edits=1)
        report = verify_thm2(11, 1, 2, sampler, quiet=True)
        assert all(check["ok"] for check in report.extra["extremal_checks"])
        assert report.counts["skipped"] == 56
        assert report.passed

    def test_extremal_graph_is_the_exception(self, fke_extremal_a, tmp_path):
        corpus = tmp_path / "corpus.g6"
        corpus.write_bytes(emit_graph6(fke_extremal_a) + b"\n")
        sampler = SamplerConfig(kind="corpus", corpus=str(corpus))
        report = verify_thm2(11, 1, 2, sampler, quiet=True)
        assert report.counts["exception"] == 1
        assert report.counterexamples == []

    def test_hypothesis_range_enforced(self):
        with pytest.raises(ValueError, match="exploratory"):
            verify_thm2(11, 1, 3, quiet=True)

    def test_quarantine_stays_empty(self, tmp_path):
        quarantine = Quarantine(tmp_path / "q.jsonl")
        sampler = SamplerConfig(kind="mutation", samples=10, seed=3)
        verify_thm2(11, 1, 2, sampler, quarantine=quarantine, quiet=True)
        assert quarantine.written == 0

    def test_mutations_of_extremal_graph(self):
        sampler = SamplerConfig(kind="mutation", samples=15, seed=4, base="extremal")
        report = verify_thm2(11, 1, 2, sampler, quiet=True)
        assert report.instances == 15
        assert report.counts["fail"] == 0


def _stable_json(report):
    document = report.to_dict()
    document.pop("timing_ms")
    return render_json(document)


class TestDeterminism:

    def test_verify_thm2_repeats(self):
        sampler = SamplerConfig(kind="mutation", samples=10, seed=7)
        first = verify_thm2(11, 1, 2, sampler, quiet=True)
        second = verify_thm2(11, 1, 2, sampler, quiet=True)
        assert _stable_json(first) == _stable_json(second)

    def test_verify_thm1_repeats(self):
        sampler = SamplerConfig(kind="mutation", samples=5, seed=8)
        first = verify_thm1(16, 4, sampler, quiet=True)
        second = verify_thm1(16, 4, sampler, quiet=True)
        assert _stable_json(first) == _stable_json(second)

    def test_audit_repeats(self):
        points = [{"n": 20, "k": 2, "s": 6}, {"n": 14, "k": 1, "s": 4}]
        first = run_audit("claim1", points=points, quiet=True)
        second = run_audit("claim1", points=points, quiet=True)
        assert _stable_json(first) == _stable_json(second)

    def test_suite_is_the_same_for_any_worker_count(self):
        params = {"n": [4, 6], "k": [1, 2]}
        serial = run_suite("lemma23", params, jobs=1, quiet=True)
        pooled = run_suite("lemma23", params, jobs=2, quiet=True)
        assert _stable_json(serial) == _stable_json(pooled)


class TestClosedForms:

    def test_psi1_at_16_4(self):
        assert psi1(16, 4, 2) == 177

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_claim1_boundaries(self, k):
        boundaries = claim1_boundaries(k)
        assert boundaries["n_eq_2s_2k_1"] == 16
        assert boundaries["n_ge_2s_2k_2"] == 8
        assert boundaries["s_eq_2k_1"] == 18 * k + 52
        assert boundaries["s_eq_2k_1_printed"] <= boundaries["s_eq_2k_1"]

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_case2_constants(self, k):
        constants = case2_constants(k)
        assert constants["h_floor"] == constants["h_floor_closed"]
        assert constants["second_range_floor"] == constants["second_range_floor_closed"]
        assert constants["h_floor_closed"] > 0

    def test_compare_tolerance_loosens_non_strict_only(self):
        assert compare("x", 1.0 + 1e-12, "<=", 1.0, 1e-9).passed
        assert not compare("x", 1.0, "<", 1.0, 1e-9).passed
        assert compare("x", Fraction(1, 3), "==", Fraction(1, 3)).passed

    def test_compare_rejects_unknown_relation(self):
        with pytest.raises(ValueError):
            compare("x", 1, "~", 1)


class TestAudits:

    def test_psi1_point(self):
        result = audit_psi1(16, 4)
        assert result.passed
        assert result.to_dict()["checks"][0]["rhs"] == 177

    def test_lemma31_point(self):
        assert audit_lemma31(16, 4, 3).passed

    @pytest.mark.parametrize("n, k, s", [(11, 1, 3), (11, 1, 5), (14, 1, 4), (20, 2, 6)])
    def test_claim1_points(self, n, k, s):
        assert audit_claim1(n, k, s).passed

    @pytest.mark.parametrize("n, k, delta, s", [(16, 1, 3, 4), (26, 1, 5, 13), (30, 2, 5, 10)])
    def test_case2_points(self, n, k, delta, s):
        result = audit_case2(n, k, delta, s)
        assert result.passed, result.failed

    def test_gamma2_point(self):
        assert audit_gamma2(20, 1, 5).passed

    def test_out_of_range_point(self):
        with pytest.raises(ValueError):
            audit_claim1(10, 1, 3)

    @pytest.mark.parametrize("name", ["psi1", "claim1", "case2", "gamma2"])
    def test_grids_pass(self, name):
        report = run_audit(name, quiet=True)
        assert report.instances > 0
        assert report.passed, report.counterexamples[:3]

    @pytest.mark.slow
    def test_lemma31_grid_passes(self):
        assert run_audit("lemma31", quiet=True).passed

    def test_single_point_report_lists_checks(self):
        report = run_audit("psi1", points=[{"n": 16, "d": 4}], quiet=True)
        assert len(report.extra["checks"]) == 5
        assert report.task == "audit-psi1"

    def test_claim1_report_carries_boundaries(self):
        report = run_audit("claim1", points=[{"n": 11, "k": 1, "s": 3}], quiet=True)
        assert report.extra["boundaries"][1]["s_eq_2k_1"] == 70

    def test_every_audit_has_a_grid(self):
        for name in AUDITS:
            assert next(audit_grid(name), None) is not None

    def test_unknown_audit(self):
        with pytest.raises(ValueError):
            run_audit("nope", quiet=True)


class TestSuites:

    def test_hong(self):
        report = run_suite("hong", {"n_max": 6}, quiet=True)
        assert report.instances == 1 + 1 + 2 + 6 + 21 + 112
        assert report.passed

    def test_interlace(self):
        report = run_suite("interlace", {"samples": 50, "order_max": 6}, quiet=True)
        assert report.counts["pass"] == 50

    def test_lemma21(self):
        report = run_suite("lemma21", {"n_max": 5, "d": [3, 4, 5]}, quiet=True)
        assert report.instances == 1 + 2 + 6 + 21
        assert report.passed

    def test_lemma23(self):
        report = run_suite("lemma23", {"n": [4, 6], "k": [1, 2]}, quiet=True)
        assert report.counts["fail"] == 0

    def test_lemma24(self):
        report = run_suite("lemma24", {"samples": 30, "n": [4, 9]}, quiet=True)
        assert report.passed

    def test_lemma26_default_grid(self):
        report = run_suite("lemma26", quiet=True)
        assert report.instances > 0
        assert report.passed, report.counterexamples[:3]

    def test_lemma26_above_vertex_cap(self):
        params = {"d": [8, 8], "n_above_d_squared": 8, "k": [1, 1], "n_max": 4}
        report = run_suite("lemma26", params, quiet=True)
        assert report.passed, report.counterexamples[:3]
        assert sum(row["graph6"] is None for row in report.grid) == 8

    def test_fpm(self):
        report = run_suite("fpm", {"n_max": 6}, quiet=True)
        assert report.passed

    def test_fke_monotone(self):
        report = run_suite("fke-monotone", {"samples": 20, "n": [4, 7], "k": [1, 2]},
                           quiet=True)
        assert report.counts["fail"] == 0
        assert report.task == "sweep-fke-monotone"
        assert report.extra["lost_through_new_edge"] >= 0

    def test_chord_of_c4_only_fails_through_the_new_edge(self):
        check = edge_addition_check(cycle_graph(4), 1, 1, 3)
        assert check["added"] == [1, 3]
        assert check["breaks"] == []
        assert check["through_edge_failures"] == 1
        assert not check["still_extendable"]

    def test_edge_added_to_c6_keeps_extendability(self):
        check = edge_addition_check(cycle_graph(6), 1, 0, 3)
        assert check["breaks"] == []

    @pytest.mark.slow
    def test_fke_monotone_default_grid(self):
        report = run_suite("fke-monotone", quiet=True)
        assert report.passed, report.counterexamples[:3]

    @pytest.mark.slow
    def test_lemma22(self):
        report = run_suite("lemma22", quiet=True)
        assert report.counts["fail"] == 0

    def test_lemma22_reads_larger_orders_from_a_corpus(self, tmp_path):
        corpus = tmp_path / "nine.g6"
        corpus.write_bytes(emit_graph6(make_complete(9)) + b"\n"
                           + emit_graph6(make_complete(7)) + b"\n")
        graphs = list(lemma22_graphs({"n": [9, 9], "corpus": str(corpus)}))
        assert graphs == [make_complete(9)]

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["hong", "fpm", "lemma21", "lemma23"])
    def test_default_grid_passes(self, name):
        report = run_suite(name, quiet=True)
        assert report.instances > 0
        assert report.passed, report.counterexamples[:3]

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_suite("nope", quiet=True)
