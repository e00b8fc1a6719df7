"""spectral-certify: construct families, compute spectra, run the
oracles, verifiers, audits and lemma suites.

Exit codes: 0 all checks passed, 1 a verification failure or
counterexample, 2 usage error or malformed input, 3 a capability
refusal (vertex cap, subset-sweep cap, tree or matching budget).
"""

import argparse
import sys
from pathlib import Path

from .combinatorics import (
    ModeDisagreementError,
    NoKMatchingError,
    SweepCapError,
    delta_condition,
    has_fpm,
    is_fractional_k_extendable,
    isolated_sweep,
    kaneko,
)
from .config import (
    DEFAULT_MATCHING_BUDGET,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_TREE_BUDGET,
    RunConfig,
    default_jobs,
    load_grids,
    resolve_tolerances,
)
from .graph import (
    FAMILY_KINDS,
    FamilySpec,
    VertexCapError,
    build_family,
    edge_count,
    emit_edge_list,
    parse_edge_list,
)
from .graph6 import emit_graph6, parse_graph6
from .harness import AUDITS, SUITES, run_audit, run_suite, threshold_fke, threshold_tree
from .harness import verify_thm1, verify_thm2
from .report import FORMATS, Quarantine, render
from .spanning_trees import TREE_MODES, TreeBudgetError, spanning_tree_count
from .spanning_trees import spanning_tree_leafdist
from .spectral import (
    adjacency_matrix,
    eigenvalues_sym,
    equitable_refinement,
    hong_bound,
    power_iteration,
    quotient_matrix,
)
from .streams import SAMPLER_BASES, SAMPLER_KINDS, SamplerConfig

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_REFUSED = 3

RHO_METHODS = ("eig", "power", "quotient", "both")
CONSTRUCT_FORMATS = ("graph6", "edges")
AUDIT_SUITES = ("hong", "interlace", "lemma21", "lemma23")


def read_graph(source):
    """Read a graph from a graph6 file, an edge-list file (.edges,
    .txt), or "-" for graph6 on stdin. Only the first graph6 line is
    used."""
    if source == "-":
        data = sys.stdin.buffer.read()
    else:
        path = Path(source)
        if path.suffix in (".edges", ".txt"):
            return parse_edge_list(path.read_text())
        data = path.read_bytes()
    lines = [line.strip() for line in data.splitlines() if line.strip()]
    if not lines:
        raise ValueError(f"no graph in {source}")
    return parse_graph6(lines[0])


def write_output(text, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _emit(args, document, passed):
    document["config"] = RunConfig(
        command=args.command,
        flags={k: v for k, v in vars(args).items()
               if k not in ("command", "handler", "seed", "tol", "jobs", "output", "format")},
        seed=args.seed,
        tolerances=resolve_tolerances(args.tol),
        output=args.output,
        format=args.format,
    ).to_dict()
    write_output(render(document, args.format), args.output)
    return EXIT_OK if passed else EXIT_FAIL


def _family_spec(args):
    return FamilySpec(args.family, args.n, d=args.d, k=args.k, q=args.q,
                      s=args.s, delta=args.delta).validate()


def cmd_construct(args):
    g = build_family(_family_spec(args))
    if args.format == "edges":
        write_output(emit_edge_list(g), args.output)
    else:
        write_output(emit_graph6(g).decode("ascii") + "\n", args.output)
    return EXIT_OK


def cmd_rho(args):
    g = read_graph(args.graph)
    tolerances = resolve_tolerances(args.tol)
    document = {"task": "rho", "graph6": emit_graph6(g).decode("ascii"),
                "n": g.n, "edges": edge_count(g), "method": args.method,
                "hong": hong_bound(g).to_dict()}
    passed = True
    if args.method in ("eig", "both"):
        document["eig"] = eigenvalues_sym(adjacency_matrix(g), tolerances["eig"])[0] if g.n else None
    if args.method == "power":
        value, _, converged = power_iteration(adjacency_matrix(g), tolerances["eig"])
        document["power"] = {"value": value, "converged": converged}
    if args.method in ("quotient", "both"):
        quotient = quotient_matrix(g, equitable_refinement(g))
        document["quotient"] = {**quotient.to_dict(), "value": quotient.eigenvalues()[0]}
    if args.method == "both":
        document["difference"] = abs(document["eig"] - document["quotient"]["value"])
        passed = document["difference"] <= tolerances["agreement"]
    return _emit(args, document, passed)


def cmd_threshold(args):
    if args.theorem == "tree":
        _require(args, "n", "d")
        result = threshold_tree(args.n, args.d)
    else:
        _require(args, "n", "k", "delta")
        result = threshold_fke(args.n, args.k, args.delta)
    tolerances = resolve_tolerances(args.tol)
    document = {"task": f"threshold-{args.theorem}", **result.to_dict()}
    return _emit(args, document, result.method_agreement <= tolerances["agreement"])


def cmd_check(args):
    g = read_graph(args.graph)
    document = {"task": f"check-{args.property}", "graph6": emit_graph6(g).decode("ascii"),
                "n": g.n}
    if args.property == "tree-distance":
        _require(args, "d")
        result = spanning_tree_leafdist(g, args.d, args.mode or "construct", args.budget,
                                        args.restarts, args.seed)
        document.update(result=result.to_dict(), spanning_trees=spanning_tree_count(g))
        if result.status == "unknown" and result.mode == "exhaustive":
            raise TreeBudgetError(result.tree_count, args.budget)
        passed = result.status == "found"
    elif args.property == "fpm":
        result = has_fpm(g)
        document.update(result=result.to_dict())
        passed = result.exists
    elif args.property == "fke":
        _require(args, "k")
        result = is_fractional_k_extendable(g, args.k, args.mode or "both", args.jobs,
                                            args.matching_budget)
        document.update(result=result.to_dict())
        if result.verdict is None:
            print(f"error: k-matching budget {args.matching_budget} exhausted", file=sys.stderr)
            return EXIT_REFUSED
        passed = result.verdict
    elif args.property == "kaneko":
        _require(args, "d")
        result = isolated_sweep(g, kaneko(args.d), args.jobs)
        document.update(result=result.to_dict())
        passed = result.passed
    else:
        _require(args, "d")
        result = delta_condition(g, args.d)
        document.update(result=result.to_dict())
        passed = result.holds
    return _emit(args, document, passed)


def cmd_verify(args):
    kind = args.sampler or ("corpus" if args.corpus else "mutation")
    sampler = SamplerConfig(kind=kind, samples=args.samples, max_edits=args.max_edits,
                            p=args.p, corpus=args.corpus, seed=args.seed, base=args.base)
    quarantine = Quarantine(args.quarantine) if args.quarantine else None
    tolerances = resolve_tolerances(args.tol)
    if args.theorem == "thm1":
        _require(args, "n", "d")
        report = verify_thm1(args.n, args.d, sampler, tolerances, args.jobs, quarantine,
                             args.exploratory, args.mode or "construct", args.budget,
                             args.restarts, args.quiet)
    else:
        _require(args, "n", "k", "delta")
        report = verify_thm2(args.n, args.k, args.delta, sampler, tolerances, args.jobs,
                             quarantine, args.exploratory, args.matching_budget, args.quiet)
    return _emit(args, report.to_dict(), report.passed)


def cmd_audit(args):
    tolerances = resolve_tolerances(args.tol)
    if args.audit in AUDIT_SUITES:
        report = run_suite(args.audit, tolerances=tolerances, jobs=args.jobs, seed=args.seed,
                           quiet=args.quiet)
    else:
        point = {name: getattr(args, name) for name in ("n", "d", "k", "delta", "q", "s")
                 if getattr(args, name) is not None}
        points = [point] if point else None
        report = run_audit(args.audit, points, tolerances, args.jobs, args.seed, args.quiet)
    return _emit(args, report.to_dict(), report.passed)


def cmd_sweep(args):
    tolerances = resolve_tolerances(args.tol)
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    grids = load_grids(Path(args.grids) if args.grids else None)
    reports = [run_suite(name, grids.get(name.replace("-", "_"), {}), tolerances,
                         args.jobs, args.seed, args.quiet) for name in names]
    if len(reports) == 1:
        return _emit(args, reports[0].to_dict(), reports[0].passed)
    passed = all(report.passed for report in reports)
    document = {"task": "sweep-all", "passed": passed, "seed": args.seed,
                "suites": {report.task: report.to_dict() for report in reports}}
    return _emit(args, document, passed)


def _require(args, *names):
    missing = [f"--{name}" for name in names if getattr(args, name) is None]
    if missing:
        raise ValueError(f"{args.command} needs {', '.join(missing)}")


def _common_parser(formats=FORMATS, default_format="json"):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="random seed (default: %(default)s)")
    common.add_argument("--tol", type=float, default=None,
                        help="override the comparison tolerances (default: per-kind table)")
    common.add_argument("--jobs", type=int, default=default_jobs(),
                        help="worker processes (default: %(default)s)")
    common.add_argument("--format", choices=formats, default=default_format,
                        help="output format (default: %(default)s)")
    common.add_argument("-o", "--output", default=None,
                        help="output file (default: stdout)")
    common.add_argument("--quiet", action="store_true", help="suppress progress lines")
    return common


def _parameter_parser():
    params = argparse.ArgumentParser(add_help=False)
    for name, meaning in (("n", "vertex count"), ("d", "leaf distance"),
                          ("k", "matching size"), ("delta", "minimum degree"),
                          ("q", "isolated part size of the tree-proof family"),
                          ("s", "hub size of the fke-proof family")):
        params.add_argument(f"--{name}", type=int, default=None, help=meaning)
    return params


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spectral-certify",
        description="Spectral-radius certification of spanning-tree and "
                    "fractional-extendability theorems.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()
    params = _parameter_parser()

    construct = sub.add_parser("construct", help="build a named family",
                               parents=[_common_parser(CONSTRUCT_FORMATS, "graph6"), params])
    construct.add_argument("--family", choices=FAMILY_KINDS, required=True)
    construct.set_defaults(handler=cmd_construct)

    rho = sub.add_parser("rho", help="spectral radius of a graph", parents=[common])
    rho.add_argument("graph", help='graph6 or edge-list file, "-" for stdin')
    rho.add_argument("--method", choices=RHO_METHODS, default="both",
                     help="(default: %(default)s)")
    rho.set_defaults(handler=cmd_rho)

    threshold = sub.add_parser("threshold", help="spectral threshold of a theorem",
                               parents=[common, params])
    threshold.add_argument("theorem", choices=("tree", "fke"))
    threshold.set_defaults(handler=cmd_threshold)

    check = sub.add_parser("check", help="run an exact oracle on a graph",
                           parents=[common, params])
    check.add_argument("property", choices=("tree-distance", "fpm", "fke", "kaneko", "delta-t"))
    check.add_argument("graph", help='graph6 or edge-list file, "-" for stdin')
    check.add_argument("--mode", default=None,
                       help=f"tree-distance: {TREE_MODES}; fke: definition, lemma23, both")
    check.add_argument("--budget", type=int, default=DEFAULT_TREE_BUDGET,
                       help="spanning-tree count cap (default: %(default)s)")
    check.add_argument("--matching-budget", type=int, default=DEFAULT_MATCHING_BUDGET,
                       help="k-matching enumeration cap (default: %(default)s)")
    check.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS,
                       help="constructive search restarts (default: %(default)s)")
    check.set_defaults(handler=cmd_check)

    verify = sub.add_parser("verify", help="stream graphs through a theorem",
                            parents=[common, params])
    verify.add_argument("theorem", choices=("thm1", "thm2"))
    verify.add_argument("--sampler", choices=SAMPLER_KINDS, default=None,
                        help="(default: corpus with --corpus, else mutation)")
    verify.add_argument("--samples", type=int, default=100, help="(default: %(default)s)")
    verify.add_argument("--max-edits", type=int, default=3, help="(default: %(default)s)")
    verify.add_argument("--p", type=float, default=0.9,
                        help="edge probability of the random sampler (default: %(default)s)")
    verify.add_argument("--corpus", default=None, help='graph6 corpus file, "-" for stdin')
    verify.add_argument("--base", choices=SAMPLER_BASES, default="complete",
                        help="graph the mutation and deletion samplers start from; "
                             "extremal mutations also add edges (default: %(default)s)")
    verify.add_argument("--mode", choices=TREE_MODES, default=None,
                        help="thm1 tree search (default: construct)")
    verify.add_argument("--budget", type=int, default=DEFAULT_TREE_BUDGET,
                        help="spanning-tree count cap (default: %(default)s)")
    verify.add_argument("--matching-budget", type=int, default=DEFAULT_MATCHING_BUDGET,
                        help="k-matching enumeration cap (default: %(default)s)")
    verify.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS,
                        help="(default: %(default)s)")
    verify.add_argument("--quarantine", default=None,
                        help="append counterexamples to this JSON Lines file")
    verify.add_argument("--exploratory", action="store_true",
                        help="allow orders outside the theorem hypotheses")
    verify.set_defaults(handler=cmd_verify)

    audit = sub.add_parser("audit", help="audit a proof inequality chain",
                           parents=[common, params])
    audit.add_argument("audit", choices=sorted(AUDITS) + list(AUDIT_SUITES))
    audit.set_defaults(handler=cmd_audit)

    sweep = sub.add_parser("sweep", help="run small-n lemma suites", parents=[common])
    sweep.add_argument("suite", nargs="?", default="all", choices=["all"] + sorted(SUITES))
    sweep.add_argument("--grids", default=None,
                       help="JSON grids file replacing the packaged one; a lemma22 "
                            "\"corpus\" entry adds graphs above 8 vertices")
    sweep.set_defaults(handler=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (VertexCapError, SweepCapError, TreeBudgetError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except ModeDisagreementError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    except NoKMatchingError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
