"""Theorem thresholds, verifiers, inequality audits and lemma suites.

Thresholds are spectral radii of the extremal families, each computed
twice (dense eigensolver and quotient cubic) and reported with the gap
between the two. Verifiers stream graphs through the hypothesis
filters and the exact oracles and collect a `VerificationReport`.
Audits evaluate the closed-form quantities of the two proofs on a
parameter point and return every comparison they make with both sides.
Lemma suites run the small-n equivalences and monotonicity properties
exhaustively or on seeded samples.
"""

import math
import multiprocessing as mp
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combinatorics import (
    ModeDisagreementError,
    NoKMatchingError,
    delta_condition,
    enumerate_k_matchings,
    fpm,
    has_fpm,
    independence_number,
    is_fractional_k_extendable,
    isolated_sweep,
    kaneko,
    max_matching_size,
)
from .config import (
    DEFAULT_MATCHING_BUDGET,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_TREE_BUDGET,
    VERTEX_CAP,
    load_grids,
    resolve_tolerances,
)
from .graph import (
    FamilySpec,
    build_family,
    delete_vertices,
    family_cells,
    is_connected,
    min_degree,
    with_edge,
    without_edge,
)
from .graph6 import emit_graph6
from .isomorphism import is_extremal_graph
from .report import VerificationReport
from .spanning_trees import meets, spanning_tree_leafdist, tree_from_edges
from .spectral import (
    b1_matrix,
    b2_matrix,
    b3_matrix,
    characteristic_cubic,
    check_interlacing,
    cubic_largest_root,
    default_bracket,
    dense_quotient_matrix,
    eigenvalues_sym,
    family_adjacency,
    family_quotient,
    hong_bound,
    matrix_spectral_radius,
    phi_b1,
    phi_b2,
    phi_b3,
    spectral_radius,
    symmetrize,
)
from .streams import (
    GENERATED_MAX_ORDER,
    SamplerConfig,
    graphs_up_to,
    iter_instances,
    random_connected_graph,
    read_corpus,
)


def warn(message):
    print(f"  Warning: {message}", file=sys.stderr)


def progress(message, quiet=False):
    if not quiet:
        print(f"  {message}", file=sys.stderr)


def parallel_map(func, items, jobs=1, chunksize=8):
    """Apply `func` over `items` in order, on a process pool when
    jobs > 1."""
    if jobs <= 1:
        for item in items:
            yield func(item)
        return
    with mp.Pool(jobs) as pool:
        yield from pool.imap(func, items, chunksize)


def _graph6(g):
    return emit_graph6(g).decode("ascii")


def _elapsed_ms(started):
    return round((time.perf_counter() - started) * 1000.0, 3)


# --- Thresholds -----------------------------------------------------------

@dataclass(frozen=True)
class ThresholdResult:
    """rho of the family attaining a theorem's threshold.

    `method_agreement` is the largest |eigensolver - quotient root| over
    every family considered.
    """

    value: float
    family: FamilySpec
    method_agreement: float
    quotient_value: float
    candidates: tuple = ()
    notes: tuple = ()

    def to_dict(self):
        return {
            "value": self.value,
            "family": self.family.to_dict(),
            "method_agreement": self.method_agreement,
            "quotient_value": self.quotient_value,
            "candidates": list(self.candidates),
            "notes": list(self.notes),
        }


def family_quotient_root(spec, quotient=None):
    """Largest eigenvalue of a family's quotient over its nonempty cells,
    through the characteristic cubic when there are three cells."""
    if quotient is None:
        quotient = family_quotient(spec)
    if quotient.order == 3:
        return cubic_largest_root(characteristic_cubic(quotient.q), *default_bracket(spec.n))
    return quotient.eigenvalues()[0]


def _family_candidate(spec, cubic=None):
    rho = matrix_spectral_radius(family_adjacency(spec))
    if cubic is None:
        root = family_quotient_root(spec)
    else:
        root = cubic_largest_root(cubic, *default_bracket(spec.n))
    return {"family": spec.to_dict(), "rho": rho, "quotient_root": root,
            "agreement": abs(rho - root)}


def threshold_tree(n, d):
    """rho(K_{ceil(d/2)-1} ∨ (K_{n-ceil(d/2)} ∪ K_1))."""
    if not 16 <= d * d <= n:
        warn(f"threshold_tree(n={n}, d={d}) lies outside 16 <= d^2 <= n")
    spec = FamilySpec("tree-extremal", n, d=d).validate()
    candidate = _family_candidate(spec)
    return ThresholdResult(candidate["rho"], spec, candidate["agreement"],
                           candidate["quotient_root"], (candidate,))


def threshold_fke(n, k, delta):
    """max of rho(K_{2k} ∨ (K_{n-2k-1} ∪ K_1)) and
    rho(K_delta ∨ (K_{n-2delta+2k-1} ∪ (delta-2k+1)K_1)).

    The second family needs delta >= 2k-1 and is K_n when
    delta = 2k-1; for smaller delta only the first is used.
    """
    if k < 1 or delta < 1:
        raise ValueError(f"k and delta must be >= 1, got k={k}, delta={delta}")
    if n < max(2 * k + 9, 5 * delta + 1):
        warn(f"threshold_fke(n={n}, k={k}, delta={delta}) lies outside "
             f"n >= max(2k+9, 5delta+1)")
    notes = []
    spec_a = FamilySpec("fke-extremal-a", n, k=k).validate()
    candidates = [(spec_a, _family_candidate(spec_a, phi_b2(n, k)))]
    if delta < 2 * k - 1:
        notes.append("fke-extremal-b is undefined for delta < 2k-1")
    else:
        spec_b = FamilySpec("fke-extremal-b", n, k=k, delta=delta).validate()
        candidates.append((spec_b, _family_candidate(spec_b, phi_b3(n, k, delta))))
        if delta == 2 * k - 1:
            notes.append("fke-extremal-b is K_n when delta = 2k-1 (degenerate)")
        elif delta == 2 * k:
            notes.append("fke-extremal-b coincides with fke-extremal-a when delta = 2k")
    spec, best = max(candidates, key=lambda pair: pair[1]["rho"])
    agreement = max(candidate["agreement"] for _, candidate in candidates)
    return ThresholdResult(best["rho"], spec, agreement, best["quotient_root"],
                           tuple(candidate for _, candidate in candidates), tuple(notes))


# --- Verifiers ------------------------------------------------------------

def _collect(report, outcomes, quarantine=None):
    for index, (graph6, verdict, reason, detail) in enumerate(outcomes):
        report.tally(verdict)
        report.grid.append({"index": index, "graph6": graph6,
                            "verdict": verdict, "reason": reason})
        if verdict == "fail":
            report.counterexamples.append({"graph6": graph6, "witness": detail})
            if quarantine is not None:
                quarantine.write(report.task, graph6, detail)


def _thm1_check(args):
    g, n, d, threshold, spec, hypothesis_tol, options = args
    graph6 = _graph6(g)
    if g.n != n:
        return graph6, "skipped", "order", None
    if not is_connected(g):
        return graph6, "skipped", "disconnected", None
    if independence_number(g) > 5:
        return graph6, "skipped", "alpha", None
    if spectral_radius(g) < threshold - hypothesis_tol:
        return graph6, "skipped", "below-threshold", None
    if is_extremal_graph(g, spec):
        return graph6, "exception", "extremal", None
    result = spanning_tree_leafdist(g, d, **options)
    if result.status == "found":
        certificate = tree_from_edges(g, result.certificate.edges)
        if not meets(certificate.leaf_distance, d):
            return graph6, "fail", "certificate", result.to_dict()
        return graph6, "pass", None, None
    if result.status == "absent":
        return graph6, "fail", "absent", result.to_dict()
    return graph6, "unknown", "search", result.to_dict()


def _sampler_base(sampler, spec):
    return build_family(spec) if sampler.base == "extremal" else None


def _require_order(exploratory, holds, message):
    if holds:
        return
    if not exploratory:
        raise ValueError(f"{message}; pass --exploratory to run anyway")
    print(f"  Exploratory: {message}", file=sys.stderr)


def verify_thm1(n, d, sampler=None, tolerances=None, jobs=1, quarantine=None,
                exploratory=False, mode="construct", budget=DEFAULT_TREE_BUDGET,
                restarts=DEFAULT_RESTARTS, quiet=False):
    """Connected G with alpha(G) <= 5 and rho(G) at least the threshold
    has a spanning tree with leaf distance >= d, unless G is the
    extremal graph."""
    sampler = sampler or SamplerConfig()
    tolerances = tolerances or resolve_tolerances()
    _require_order(exploratory, 16 <= d * d <= n, f"16 <= d^2 <= n fails for n={n}, d={d}")
    started = time.perf_counter()
    threshold = threshold_tree(n, d)
    spec = threshold.family
    report = VerificationReport(
        "verify-thm1",
        {"n": n, "d": d, "sampler": sampler.to_dict(), "mode": mode,
         "budget": budget, "restarts": restarts},
        sampler.seed, tolerances, exploratory=exploratory)
    report.extra["threshold"] = threshold.to_dict()

    options = {"mode": mode, "budget": budget, "restarts": restarts, "seed": sampler.seed}
    items = ((g, n, d, threshold.value, spec, tolerances["hypothesis"], options)
             for g in iter_instances(sampler, n, _sampler_base(sampler, spec)))
    progress(f"verify-thm1 n={n} d={d} sampler={sampler.kind}", quiet)
    _collect(report, parallel_map(_thm1_check, items, jobs), quarantine)

    probe = spanning_tree_leafdist(build_family(spec), d, "construct",
                                   restarts=restarts, seed=sampler.seed)
    report.extra["extremal_probe"] = {"family": spec.to_dict(),
                                      "result": probe.to_dict(),
                                      "informational": True}
    report.timing_ms = _elapsed_ms(started)
    progress(f"verify-thm1: {report.instances} instances, "
             f"{report.counts['fail']} counterexamples", quiet)
    return report


def _thm2_check(args):
    g, n, k, delta, threshold, specs, hypothesis_tol, budget = args
    graph6 = _graph6(g)
    if g.n != n or n < 2 * k + 2:
        return graph6, "skipped", "order", None
    if not is_connected(g):
        return graph6, "skipped", "disconnected", None
    if min_degree(g) != delta:
        return graph6, "skipped", "min-degree", None
    if spectral_radius(g) < threshold - hypothesis_tol:
        return graph6, "skipped", "below-threshold", None
    if any(is_extremal_graph(g, spec) for spec in specs):
        return graph6, "exception", "extremal", None
    try:
        result = is_fractional_k_extendable(g, k, "both", budget=budget)
    except NoKMatchingError:
        return graph6, "skipped", "no-k-matching", None
    if result.verdict is None:
        return graph6, "unknown", "matching-budget", result.to_dict()
    if result.verdict:
        return graph6, "pass", None, None
    return graph6, "fail", "not-extendable", result.to_dict()


def extremal_fke_specs(n, k, delta):
    specs = [FamilySpec("fke-extremal-a", n, k=k).validate()]
    if delta >= 2 * k - 1:
        specs.append(FamilySpec("fke-extremal-b", n, k=k, delta=delta).validate())
    return specs


def verify_thm2(n, k, delta, sampler=None, tolerances=None, jobs=1, quarantine=None,
                exploratory=False, budget=DEFAULT_MATCHING_BUDGET, quiet=False):
    """Connected G with minimum degree delta and rho(G) at least the
    threshold is fractional k-extendable, unless G is an extremal graph.

    Also checks that every extremal graph with a nonempty isolated part
    is not fractional k-extendable.
    """
    sampler = sampler or SamplerConfig()
    tolerances = tolerances or resolve_tolerances()
    _require_order(exploratory, n >= max(2 * k + 9, 5 * delta + 1),
                   f"n >= max(2k+9, 5delta+1) fails for n={n}, k={k}, delta={delta}")
    started = time.perf_counter()
    threshold = threshold_fke(n, k, delta)
    specs = extremal_fke_specs(n, k, delta)
    report = VerificationReport(
        "verify-thm2",
        {"n": n, "k": k, "delta": delta, "sampler": sampler.to_dict(), "budget": budget},
        sampler.seed, tolerances, exploratory=exploratory)
    report.extra["threshold"] = threshold.to_dict()

    checks = []
    for spec in specs:
        entry = {"family": spec.to_dict()}
        if spec.parts()[2] == 0:
            entry.update(degenerate=True, ok=True)
            checks.append(entry)
            continue
        result = is_fractional_k_extendable(build_family(spec), k, "both", budget=budget)
        entry.update(degenerate=False, result=result.to_dict(), ok=result.verdict is False)
        if not entry["ok"]:
            report.ok = False
        checks.append(entry)
    report.extra["extremal_checks"] = checks

    items = ((g, n, k, delta, threshold.value, specs, tolerances["hypothesis"], budget)
             for g in iter_instances(sampler, n, _sampler_base(sampler, specs[0])))
    progress(f"verify-thm2 n={n} k={k} delta={delta} sampler={sampler.kind}", quiet)
    _collect(report, parallel_map(_thm2_check, items, jobs), quarantine)
    report.timing_ms = _elapsed_ms(started)
    progress(f"verify-thm2: {report.instances} instances, "
             f"{report.counts['fail']} counterexamples", quiet)
    return report


# --- Audits ---------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    lhs: object
    rhs: object
    relation: str
    passed: bool

    def to_dict(self):
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "relation": self.relation, "passed": self.passed}


def compare(name, lhs, relation, rhs, tol=0.0):
    """Check `lhs relation rhs`; `tol` loosens the non-strict relations
    only."""
    if relation == "<":
        passed = lhs < rhs
    elif relation == "<=":
        passed = lhs <= rhs + tol
    elif relation == ">":
        passed = lhs > rhs
    elif relation == ">=":
        passed = lhs >= rhs - tol
    elif relation == "==":
        passed = lhs == rhs if not tol else abs(lhs - rhs) <= tol
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return Check(name, lhs, rhs, relation, bool(passed))


@dataclass(frozen=True)
class AuditResult:
    name: str
    params: dict
    checks: tuple

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failed(self):
        return [check for check in self.checks if not check.passed]

    def to_dict(self):
        return {"name": self.name, "params": self.params, "passed": self.passed,
                "checks": [check.to_dict() for check in self.checks]}


def psi1(n, d, q):
    """(d-1)q^2 - (2n-2)q + n^2 - 2n + 1."""
    return (d - 1) * q * q - (2 * n - 2) * q + n * n - 2 * n + 1


def claim1_f(x, n, k, s):
    return x * x - s * x + (s + 1) * n - 2 * s * s + 2 * k * s - 4 * s - 2 * k - 2


def case2_g(x, n, k, delta, s):
    return (x * x - (s + delta - 2 * k) * x - 2 * s * s + n * s + 6 * k * s
            - 2 * delta * s - 4 * s - 2 * k * n + delta * n + n - 2 * delta * delta
            + 6 * k * delta - 4 * delta - 4 * k * k + 6 * k - 2)


def case2_g_floor(n, k, delta, s):
    """g(n - delta + k - 2) in expanded form."""
    return (n * n - (2 * delta - 2 * k + 3) * n - 2 * s * s + (5 * k - delta - 2) * s
            + k * delta + 2 * delta - k * k - 2 * k + 2)


def case2_h(s, k, delta):
    return 2 * s * s - (5 * delta - k + 4) * s + 5 * k * delta - k * k + 2 * k


def claim1_boundaries(k):
    """f(n-2) at the boundary of each branch of the f(rho_2) > 0 argument.

    "s_eq_2k_1" is the exact value at s = 2k+1, n = 2k+9; the constant
    8k+52 quoted for that case is a weaker lower bound.
    """
    s_a = 2 * k + 4
    n_a = 2 * s_a - 2 * k + 1
    s_b = 2 * k + 2
    n_b = 2 * s_b - 2 * k + 2
    s_c = 2 * k + 1
    n_c = 2 * k + 9
    return {
        "n_eq_2s_2k_1": claim1_f(n_a - 2, n_a, k, s_a),
        "n_ge_2s_2k_2": claim1_f(n_b - 2, n_b, k, s_b),
        "s_eq_2k_1": claim1_f(n_c - 2, n_c, k, s_c),
        "s_eq_2k_1_printed": 8 * k + 52,
    }


def case2_constants(k):
    """Lower bounds reached at delta = 2k+1 in the two sub-ranges of s."""
    return {
        "h_floor": Fraction(5, 2) * k * (2 * k + 1) - k * k + 3 * k - 2,
        "h_floor_closed": 4 * k * k + Fraction(11, 2) * k - 2,
        "second_range_floor": (Fraction(47, 2) * k - 21) * (2 * k + 1) - k * k + 5 * k - 4,
        "second_range_floor_closed": 46 * k * k - Fraction(27, 2) * k - 25,
    }


def _tol(tolerances, key):
    return (tolerances or resolve_tolerances())[key]


def audit_psi1(n, d, tolerances=None):
    if d < 3 or n < d * d:
        raise ValueError(f"audit_psi1 needs n >= d^2 >= 9, got n={n}, d={d}")
    q_max = (2 * n) // d
    values = {q: psi1(n, d, q) for q in range(2, q_max + 1)}
    top = max(values.values())
    endpoint = psi1(n, d, Fraction(2 * n, d)) - psi1(n, d, 2)
    closed = -Fraction(4, d * d) * (n - d) * (n - d * d)
    checks = (
        compare("psi1 is maximal at q=2", top, "<=", values[2]),
        compare("psi1(2n/d) - psi1(2) closed form", endpoint, "==", closed),
        compare("psi1(2n/d) - psi1(2) <= 0", endpoint, "<=", 0),
        compare("psi1(2) < (n-2)^2", values[2], "<", (n - 2) ** 2),
        compare("sqrt(psi1(2)) < n-2", math.sqrt(values[2]), "<", n - 2),
    )
    return AuditResult("psi1", {"n": n, "d": d}, checks)


def audit_lemma31(n, d, q, tolerances=None):
    if d < 3 or n < d * d or q < 2 or q * d > 2 * n:
        raise ValueError(f"audit_lemma31 needs d >= 3, n >= d^2, 2 <= q <= 2n/d, "
                         f"got n={n}, d={d}, q={q}")
    tol = _tol(tolerances, "hypothesis")
    spec = FamilySpec("tree-proof-g1", n, d=d, q=q).validate()
    a1 = family_adjacency(spec)
    hub = spec.parts()[0]
    edges = int(a1.sum()) // 2
    rho_g1 = matrix_spectral_radius(a1)
    radicand = 2 * edges - n + 1
    rho_extremal = matrix_spectral_radius(
        family_adjacency(FamilySpec("tree-extremal", n, d=d)))
    checks = (
        compare("e(G1) closed form", edges, "==", (n - q) * (n - q - 1) // 2 + q * hub),
        compare("rho(G1) <= sqrt(2e(G1)-n+1)", rho_g1, "<=", math.sqrt(radicand), tol),
        compare("2e(G1)-n+1 <= psi1(q)", radicand, "<=", psi1(n, d, q)),
        compare("psi1(q) <= psi1(2)", psi1(n, d, q), "<=", psi1(n, d, 2)),
        compare("psi1(2) < (n-2)^2", psi1(n, d, 2), "<", (n - 2) ** 2),
        compare("rho(G1) < n-2", rho_g1, "<", n - 2),
        compare("n-2 < rho(extremal)", n - 2, "<", rho_extremal),
    )
    return AuditResult("lemma31", {"n": n, "d": d, "q": q}, checks)


def _coefficients(p):
    return [p.c2, p.c1, p.c0]


def audit_claim1(n, k, s, tolerances=None):
    if k < 1 or s < 2 * k + 1 or n < 2 * k + 9 or n < 2 * s - 2 * k + 1:
        raise ValueError(f"audit_claim1 needs s >= 2k+1, n >= 2k+9, n >= 2s-2k+1, "
                         f"got n={n}, k={k}, s={s}")
    tol = _tol(tolerances, "hypothesis")
    rho2 = cubic_largest_root(phi_b2(n, k), *default_bracket(n), tol=_tol(tolerances, "root"))
    difference = phi_b1(n, k, s) - phi_b2(n, k)
    f_const = (s + 1) * n - 2 * s * s + 2 * k * s - 4 * s - 2 * k - 2
    scaled_f = [(s - 2 * k), -(s - 2 * k) * s, (s - 2 * k) * f_const]
    f_floor = claim1_f(n - 2, n, k, s)
    boundaries = claim1_boundaries(k)
    checks = [
        compare("rho2 > n-2", rho2, ">", n - 2),
        compare("phi_B1 - phi_B2 = (s-2k) f", _coefficients(difference), "==", scaled_f),
        compare("f increasing beyond n-2", 2 * (n - 2) - s, ">", 0),
        compare("f(rho2) >= f(n-2)", claim1_f(rho2, n, k, s), ">=", f_floor, tol),
        compare("f(rho2) > 0", claim1_f(rho2, n, k, s), ">", 0),
    ]
    if n == 2 * s - 2 * k + 1:
        checks += [
            compare("boundary f(n-2) at s=2k+4, n=2s-2k+1", boundaries["n_eq_2s_2k_1"], "==", 16),
            compare("f(n-2) >= 16", f_floor, ">=", 16),
        ]
    elif s >= 2 * k + 2:
        checks += [
            compare("boundary f(n-2) at s=2k+2, n=2s-2k+2", boundaries["n_ge_2s_2k_2"], "==", 8),
            compare("f(n-2) >= 8", f_floor, ">=", 8),
        ]
    else:
        exact = boundaries["s_eq_2k_1"]
        checks += [
            compare("boundary f(n-2) at s=2k+1, n=2k+9", exact, "==", 18 * k + 52),
            compare("quoted constant 8k+52 is a lower bound", boundaries["s_eq_2k_1_printed"],
                    "<=", exact),
            compare("f(n-2) >= 18k+52", f_floor, ">=", exact),
        ]
    return AuditResult("claim1", {"n": n, "k": k, "s": s}, tuple(checks))


def audit_case2(n, k, delta, s, tolerances=None):
    if k < 1 or delta < 2 * k + 1 or s < delta + 1 or n < max(2 * s - 2 * k + 1, 5 * delta + 1):
        raise ValueError(f"audit_case2 needs delta >= 2k+1, s >= delta+1, "
                         f"n >= max(2s-2k+1, 5delta+1), got n={n}, k={k}, delta={delta}, s={s}")
    tol = _tol(tolerances, "hypothesis")
    rho3 = cubic_largest_root(phi_b3(n, k, delta), *default_bracket(n),
                              tol=_tol(tolerances, "root"))
    floor_point = n - delta + k - 2
    g_rho3 = case2_g(rho3, n, k, delta, s)
    g_floor = case2_g_floor(n, k, delta, s)
    difference = phi_b1(n, k, s) - phi_b3(n, k, delta)
    g_coefficients = [1, -(s + delta - 2 * k),
                      case2_g(0, n, k, delta, s)]
    scaled_g = [(s - delta) * c for c in g_coefficients]
    phi_b1_rho3 = phi_b1(n, k, s)(rho3)
    constants = case2_constants(k)
    checks = [
        compare("rho3 > n-delta+k-2", rho3, ">", floor_point),
        compare("(s+delta-2k)/2 < n-delta+k-2", Fraction(s + delta - 2 * k, 2), "<", floor_point),
        compare("g(n-delta+k-2) closed form", case2_g(floor_point, n, k, delta, s), "==", g_floor),
        compare("g(rho3) >= g(n-delta+k-2)", g_rho3, ">=", g_floor, tol),
        compare("g(rho3) > 0", g_rho3, ">", 0),
        compare("phi_B1 - phi_B3 = (s-delta) g", _coefficients(difference), "==", scaled_g),
        compare("phi_B1(rho3) = (s-delta) g(rho3)", phi_b1_rho3, "==", (s - delta) * g_rho3,
                tol * max(1.0, abs(phi_b1_rho3))),
        compare("phi_B1'(rho3) > 0 via 2rho3-s-delta+2k", 2 * rho3 - s - delta + 2 * k, ">", 0),
    ]
    if 2 * s >= 5 * delta + 2:
        h_at_top = case2_h(Fraction(5 * delta + 2, 2), k, delta)
        checks += [
            compare("g(n-delta+k-2) >= h(s)", g_floor, ">=", case2_h(s, k, delta)),
            compare("h(s) >= h(5delta/2+1)", case2_h(s, k, delta), ">=", h_at_top),
            compare("h(5delta/2+1) closed form", h_at_top, "==",
                    (Fraction(15, 2) * k - 5) * delta - k * k + 3 * k - 2),
            compare("h(5delta/2+1) >= 4k^2+11k/2-2", h_at_top, ">=",
                    constants["h_floor_closed"]),
            compare("4k^2+11k/2-2 > 0", constants["h_floor_closed"], ">", 0),
            compare("3s-3delta-2 > 0", 3 * s - 3 * delta - 2, ">", 0),
        ]
    else:
        top = Fraction(5 * delta + 2, 2)
        at_top = (n * n - (2 * delta - 2 * k + 3) * n - 2 * top * top
                  + (5 * k - delta - 2) * top + k * delta + 2 * delta - k * k - 2 * k + 2)
        at_corner = (Fraction(47, 2) * k - 21) * delta - k * k + 5 * k - 4
        checks += [
            compare("g(n-delta+k-2) > value at s=5delta/2+1", g_floor, ">", at_top),
            compare("value at s=5delta/2+1 >= value at n=5delta+1", at_top, ">=", at_corner),
            compare("value at n=5delta+1 >= 46k^2-27k/2-25", at_corner, ">=",
                    constants["second_range_floor_closed"]),
            compare("46k^2-27k/2-25 > 0", constants["second_range_floor_closed"], ">", 0),
            compare("7delta-s+4k-2 > 0", 7 * delta - s + 4 * k - 2, ">", 0),
        ]
    return AuditResult("case2", {"n": n, "k": k, "delta": delta, "s": s}, tuple(checks))


def audit_gamma2(n, k, s, tolerances=None):
    if k < 1 or s < 2 * k + 1 or n < 2 * s - 2 * k + 1:
        raise ValueError(f"audit_gamma2 needs s >= 2k+1, n >= 2s-2k+1, "
                         f"got n={n}, k={k}, s={s}")
    tol = _tol(tolerances, "interlace")
    b1 = b1_matrix(n, k, s)
    gamma = eigenvalues_sym(symmetrize(b1))
    bound = n - 2 * s + 2 * k - 2
    root = cubic_largest_root(phi_b1(n, k, s), *default_bracket(n))
    checks = (
        compare("char poly of B1 = phi_B1", _coefficients(characteristic_cubic(b1)), "==",
                _coefficients(phi_b1(n, k, s))),
        compare("gamma1 = largest root of phi_B1", gamma[0], "==", root,
                _tol(tolerances, "agreement")),
        compare("gamma2 <= n-2s+2k-2", gamma[1], "<=", bound, tol),
        compare("n-2s+2k-2 < n-2", bound, "<", n - 2),
    )
    return AuditResult("gamma2", {"n": n, "k": k, "s": s}, checks)


AUDITS = {
    "psi1": audit_psi1,
    "lemma31": audit_lemma31,
    "claim1": audit_claim1,
    "case2": audit_case2,
    "gamma2": audit_gamma2,
}


def _span(bounds):
    low, high = bounds
    return range(low, high + 1)


def audit_grid(name, grids=None):
    """Parameter points of an audit's default grid."""
    grids = load_grids() if grids is None else grids
    grid = grids.get(name, {})
    if name == "psi1":
        for d in _span(grid["d"]):
            for n in range(d * d, d * d + grid["n_above_d_squared"] + 1):
                yield {"n": n, "d": d}
    elif name == "lemma31":
        for d in _span(grid["d"]):
            for n in range(d * d, d * d + grid["n_above_d_squared"] + 1):
                for q in range(2, 2 * n // d + 1):
                    yield {"n": n, "d": d, "q": q}
    elif name == "claim1":
        for k in _span(grid["k"]):
            for s in range(2 * k + 1, (grid["n_max"] + 2 * k - 1) // 2 + 1):
                for n in range(max(2 * k + 9, 2 * s - 2 * k + 1), grid["n_max"] + 1):
                    yield {"n": n, "k": k, "s": s}
    elif name == "case2":
        low, high = grid["delta_above_2k"]
        for k in _span(grid["k"]):
            for delta in range(2 * k + low, 2 * k + high + 1):
                for s in range(delta + 1, (grid["n_max"] + 2 * k - 1) // 2 + 1):
                    for n in range(max(2 * s - 2 * k + 1, 5 * delta + 1), grid["n_max"] + 1):
                        yield {"n": n, "k": k, "delta": delta, "s": s}
    elif name == "gamma2":
        for k in _span(grid["k"]):
            for s in range(2 * k + 1, (grid["n_max"] + 2 * k - 1) // 2 + 1):
                for n in range(2 * s - 2 * k + 1, grid["n_max"] + 1):
                    yield {"n": n, "k": k, "s": s}
    else:
        raise ValueError(f"no audit grid named {name!r}")


def _audit_point(args):
    name, point, tolerances = args
    return AUDITS[name](**point, tolerances=tolerances)


def run_audit(name, points=None, tolerances=None, jobs=1, seed=DEFAULT_SEED, quiet=False):
    """Run an audit on `points` (default: its grid) and collect a report."""
    if name not in AUDITS:
        raise ValueError(f"audit must be one of {sorted(AUDITS)}, got {name!r}")
    tolerances = tolerances or resolve_tolerances()
    points = list(points) if points is not None else list(audit_grid(name))
    started = time.perf_counter()
    report = VerificationReport(f"audit-{name}", {"points": len(points)}, seed, tolerances)
    if name == "claim1":
        report.extra["boundaries"] = {k: claim1_boundaries(k) for k in range(1, 6)}
    elif name == "case2":
        report.extra["constants"] = {k: case2_constants(k) for k in range(1, 6)}
    progress(f"audit-{name}: {len(points)} points", quiet)
    items = ((name, point, tolerances) for point in points)
    for result in parallel_map(_audit_point, items, jobs, chunksize=64):
        verdict = "pass" if result.passed else "fail"
        report.tally(verdict)
        report.grid.append({**result.params, "verdict": verdict,
                            "failed": [check.name for check in result.failed]})
        if not result.passed:
            report.counterexamples.append({
                "graph6": None,
                "witness": {"params": result.params,
                            "checks": [check.to_dict() for check in result.failed]},
            })
    if len(points) == 1:
        report.extra["checks"] = [check.to_dict() for check in result.checks]
    report.timing_ms = _elapsed_ms(started)
    return report


# --- Lemma suites ---------------------------------------------------------

def _suite_report(name, params, seed, tolerances):
    return VerificationReport(f"sweep-{name}", params, seed,
                              tolerances or resolve_tolerances())


def _hong_instance(args):
    g, tol = args
    bound = hong_bound(g)
    rho = spectral_radius(g)
    detail = {"rho": rho, "bound": bound.to_dict()}
    if bound.value is None:
        return _graph6(g), "fail", "radicand", detail
    if rho > bound.value + tol:
        return _graph6(g), "fail", "bound", detail
    if (abs(rho - bound.value) <= tol) != bound.equality:
        return _graph6(g), "fail", "equality", detail
    return _graph6(g), "pass", None, None


def suite_hong(params, tolerances=None, jobs=1, seed=DEFAULT_SEED):
    """rho <= sqrt(2e-n+1) on every connected graph, with numeric
    equality exactly for stars and complete graphs."""
    report = _suite_report("hong", params, seed, tolerances)
    tol = report.tolerances["hypothesis"]
    items = ((g, tol) for g in graphs_up_to(params["n_max"], connected=True))
    _collect(report, parallel_map(_hong_instance, items, jobs))
    return report


def suite_interlace(params, tolerances=None, jobs=1, seed=DEFAULT_SEED):
    """Random symmetric matrices against random principal submatrices."""
    report = _suite_report("interlace", params, seed, tolerances)
    tol = report.tolerances["interlace"]
    rng = np.random.default_rng(seed)
    for index in range(params["samples"]):
        order = int(rng.integers(1, params["order_max"] + 1))
        m = rng.normal(size=(order, order))
        m = (m + m.T) / 2.0
        size = int(rng.integers(1, order + 1))
        keep = sorted(int(i) for i in rng.choice(order, size=size, replace=False))
        result = check_interlacing(m, keep, tol)
        verdict = "pass" if result.ok else "fail"
        report.tally(verdict)
        report.grid.append({"index": index, "order": order, "keep": keep, "verdict": verdict})
        if not result.ok:
            report.counterexamples.append({"graph6": None, "witness": result.to_dict()})
    return report


def _lemma21_instance(args):
    g, ds = args
    mismatches = []
    for d in ds:
        swept = isolated_sweep(g, kaneko(d)).passed
        condition = delta_condition(g, d).holds
        if swept != condition:
            mismatches.append({"d": d, "sweep": swept, "delta_condition": condition})
    if mismatches:
        return _graph6(g), "fail", "disagreement", mismatches
    return _graph6(g), "pass", None, None


def suite_lemma21(params, tolerances=None, jobs=1, seed=DEFAULT_SEED):
    """Kaneko sweep passes iff the delta_t condition holds, on every
    connected graph with 2 <= n <= n_max."""
    report = _suite_report("lemma21", params, seed, tolerances)
    items = ((g, tuple(params["d"])) for g in graphs_up_to(params["n_max"], n_min=2,
                                                           connected=True))
    _collect(report, parallel_map(_lemma21_instance, items, jobs))
    return report


def _lemma22_instance(args):
    g, d, budget = args
    if g.n <= d or independence_number(g) > 5:
        return _graph6(g), "skipped", "hypothesis", None
    if not delta_condition(g, d).even_holds:
        return _graph6(g), "skipped", "condition", None
    result = spanning_tree_leafdist(g, d, "exhaustive", budget=budget)
    if result.status == "found":
        return _graph6(g), "pass", None, None
    if result.status == "absent":
        return _graph6(g), "fail", "absent", result.to_dict()
    return _graph6(g), "unknown", "budget", result.to_dict()


def lemma22_graphs(params):
    """Connected graphs with n in params["n"]: the catalogue up to its
    top order, then an optional graph6 `corpus` for larger n."""
    low, high = params["n"]
    yield from graphs_up_to(min(high, GENERATED_MAX_ORDER), n_min=low, connected=True)
    if params.get("corpus"):
        for g in read_corpus(params["corpus"]):
            if GENERATED_MAX_ORDER < g.n <= high and is_connected(g):
                yield g


def suite_lemma22(params, tolerances=None, jobs=1, seed=DEFAULT_SEED,
                  budget=DEFAULT_TREE_BUDGET):
    """delta_{2t} > t(d-2) for t <= alpha/2 gives a spanning tree with
    leaf distance >= d (sufficiency only)."""
    report = _suite_report("lemma22", params, seed, tolerances)
    items = ((g, params["d"], budget) for g in lemma22_graphs(params))
    _collect(report, parallel_map(_lemma22_instance, items, jobs))
    return report


def _lemma23_instance(args):
    g, ks = args
    detail = {}
    for k in ks:
        if g.n < 2 * k + 2 or max_matching_size(g) < k:
            continue
        try:
            verdict = is_fractional_k_extendable(g, k, "both").verdict
        except ModeDisagreementError as e:
            return _graph6(g), "fail", "disagreement", {"k": k, "error": str(e)}
        detail[str(k)] = verdict
    if not detail:
        return _graph6(g), "skipped", "no-k-matching", None
    return _graph6(g), "pass", None, None


def suite_lemma23(params, tolerances=None, jobs=1, seed=DEFAULT_SEED):
    """Definition and subset characterisation of fractional
    k-extendability agree on every connected graph in range."""
    report = _suite_report("lemma23", params, seed, tolerances)
    low, high = params["n"]
    items = ((g, tuple(params["k"])) for g in graphs_up_to(high, n_min=low, connected=True))
    _collect(report, parallel_map(_lemma23_instance, items, jobs))
    return report


def suite_lemma24(params, tolerances=None, jobs=1, seed=DEFAULT_SEED):
    """Deleting edges from a connected graph strictly lowers rho."""
    report = _suite_report("lemma24", params, seed, tolerances)
    rng = np.random.default_rng(seed)
    low, high = params["n"]
    for index in range(params["samples"]):
        n = int(rng.integers(low, high + 1))
        g = random_connected_graph(rng, n, 0.5)
        edges = g.edges()
        removed = rng.choice(len(edges), size=int(rng.integers(1, min(3, len(edges)) + 1)),
                             replace=False)
        h = g
        for i in sorted(int(i) for i in removed):
            h = without_edge(h, *edges[i])
        rho_g, rho_h = spectral_radius(g), spectral_radius(h)
        verdict = "pass" if rho_g > rho_h else "fail"
        report.tally(verdict)
        report.grid.append({"index": index, "graph6": _graph6(g), "removed": len(removed),
                            "gap": rho_g - rho_h, "verdict": verdict})
        if verdict == "fail":
            report.counterexamples.append({
                "graph6": _graph6(g),
                "witness": {"subgraph": _graph6(h), "rho": rho_g, "rho_subgraph": rho_h}})
    return report


def lemma26_specs(params):
    low, high = params["d"]
    for d in range(low, high + 1):
        for n in range(d * d, d * d + params["n_above_d_squared"] + 1):
            yield FamilySpec("tree-extremal", n, d=d)
    for k in _span(params["k"]):
        for n in range(2 * k + 2, params["n_max"] + 1):
            yield FamilySpec("fke-extremal-a", n, k=k)
        for s in range(2 * k, (params["n_max"] + 2 * k - 1) // 2 + 1):
            for n in range(2 * s - 2 * k + 1, params["n_max"] + 1):
                yield FamilySpec("fke-proof-g1", n, k=k, s=s)
                yield FamilySpec("fke-extremal-b", n, k=k, delta=s)


def _closed_quotient(spec):
    if spec.kind == "fke-proof-g1":
        return b1_matrix(spec.n, spec.k, spec.s)
    if spec.kind == "fke-extremal-a":
        return b2_matrix(spec.n, spec.k)
    if spec.kind == "fke-extremal-b":
        return b3_matrix(spec.n, spec.k, spec.delta)
    return None


def _lemma26_instance(args):
    spec, tol = args
    a = family_adjacency(spec)
    quotient = dense_quotient_matrix(a, family_cells(spec))
    rho = matrix_spectral_radius(a)
    root = family_quotient_root(spec, quotient)
    graph6 = _graph6(build_family(spec)) if spec.n <= VERTEX_CAP else None
    detail = {"family": spec.to_dict(), "rho": rho, "quotient_root": root,
              "equitable": quotient.equitable}
    if not quotient.equitable or abs(rho - root) > tol:
        return graph6, "fail", "quotient", detail
    closed = _closed_quotient(spec) if quotient.order == 3 else None
    if closed is not None and [list(row) for row in quotient.q] != closed:
        return graph6, "fail", "closed-form", detail
    return graph6, "pass", None, None


def suite_lemma26(params, tolerances=None, jobs=1, seed=DEFAULT_SEED):
    """Family quotients are equitable and share rho with the family.
    Runs on dense block matrices, with no vertex cap."""
    report = _suite_report("lemma26", params, seed, tolerances)
    tol = report.tolerances["agreement"]
    items = ((spec, tol) for spec in lemma26_specs(params))
    _collect(report, parallel_map(_lemma26_instance, items, jobs))
    return report


def _fpm_instance(g):
    cover = has_fpm(g)
    swept = isolated_sweep(g, fpm())
    detail = {"has_fpm": cover.exists, "sweep": swept.to_dict()}
    if cover.exists != swept.passed:
        return _graph6(g), "fail", "disagreement", detail
    if cover.exists and not cover.certificate.verify(g):
        return _graph6(g), "fail", "certificate", detail
    return _graph6(g), "pass", None, None


def suite_fpm(params, tolerances=None, jobs=1, seed=DEFAULT_SEED):
    """Half-integral cover oracle agrees with i(G-S) <= |S| on every
    graph with 1 <= n <= n_max."""
    report = _suite_report("fpm", params, seed, tolerances)
    _collect(report, parallel_map(_fpm_instance, graphs_up_to(params["n_max"]), jobs))
    return report


def edge_addition_check(g, k, u, v, budget=DEFAULT_MATCHING_BUDGET):
    """Compare k-matchings of G + uv with G when G is fractional
    k-extendable.

    For a k-matching M of G + uv avoiding uv, G - V(M) is a spanning
    subgraph of (G + uv) - V(M), so the FPM must survive; `breaks` lists
    any M where it does not. Matchings through uv are new and may leave
    no FPM; they are counted in `through_edge_failures` only.
    """
    h = with_edge(g, u, v)
    added = (min(u, v), max(u, v))
    breaks = []
    through_edge_failures = 0
    for matching in enumerate_k_matchings(h, k, budget):
        rest = delete_vertices(h, [x for edge in matching for x in edge])
        if has_fpm(rest).exists:
            continue
        if added in matching:
            through_edge_failures += 1
        else:
            breaks.append([list(edge) for edge in matching])
    return {"added": list(added), "breaks": breaks,
            "through_edge_failures": through_edge_failures,
            "still_extendable": through_edge_failures == 0 and not breaks}


def suite_fke_monotone(params, tolerances=None, jobs=1, seed=DEFAULT_SEED):
    """Adding an edge to a fractional k-extendable graph keeps an FPM
    after removing any k-matching that avoids the new edge.

    Whole-graph extendability is not edge-monotone (C_4 plus a chord
    fails for k = 1), so its loss is reported, not failed.
    """
    report = _suite_report("fke-monotone", params, seed, tolerances)
    rng = np.random.default_rng(seed)
    low, high = params["n"]
    k_low, k_high = params["k"]
    lost = 0
    for index in range(params["samples"]):
        n = int(rng.integers(low, high + 1))
        k = int(rng.integers(k_low, k_high + 1))
        g = random_connected_graph(rng, n, 0.6)
        missing = [(u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)]
        row = {"index": index, "graph6": _graph6(g), "k": k}
        if n < 2 * k + 2 or max_matching_size(g) < k or not missing:
            report.tally("skipped")
            report.grid.append({**row, "verdict": "skipped"})
            continue
        u, v = missing[int(rng.integers(len(missing)))]
        if not is_fractional_k_extendable(g, k, "both").verdict:
            report.tally("skipped")
            report.grid.append({**row, "edge": [u, v], "verdict": "skipped"})
            continue
        check = edge_addition_check(g, k, u, v)
        lost += not check["still_extendable"]
        verdict = "fail" if check["breaks"] else "pass"
        report.tally(verdict)
        report.grid.append({**row, "edge": [u, v], "verdict": verdict,
                            "still_extendable": check["still_extendable"]})
        if verdict == "fail":
            report.counterexamples.append({"graph6": _graph6(g),
                                           "witness": {"k": k, **check}})
    report.extra["lost_through_new_edge"] = lost
    return report


SUITES = {
    "hong": suite_hong,
    "interlace": suite_interlace,
    "lemma21": suite_lemma21,
    "lemma22": suite_lemma22,
    "lemma23": suite_lemma23,
    "lemma24": suite_lemma24,
    "lemma26": suite_lemma26,
    "fpm": suite_fpm,
    "fke-monotone": suite_fke_monotone,
}


def run_suite(name, params=None, tolerances=None, jobs=1, seed=DEFAULT_SEED, quiet=False):
    if name not in SUITES:
        raise ValueError(f"suite must be one of {sorted(SUITES)}, got {name!r}")
    if params is None:
        params = load_grids().get(name.replace("-", "_"), {})
    started = time.perf_counter()
    progress(f"sweep-{name} {params}", quiet)
    report = SUITES[name](params, tolerances=tolerances, jobs=jobs, seed=seed)
    report.timing_ms = _elapsed_ms(started)
    return report
