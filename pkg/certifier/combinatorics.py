"""Exact combinatorial oracles on bit-vector graphs.

Everything here answers a yes/no question exactly and, where the answer
is "no" (or "yes" for existence questions), returns a certificate that
can be re-checked independently:

- independence number and the delta_t neighbourhood profile;
- isolated-vertex subset sweeps (Kaneko, fractional perfect matching,
  fractional k-extendability) with the lexicographically first
  violating subset as witness;
- maximum matching by subset dynamic programming and k-matching
  enumeration;
- fractional perfect matchings as half-integral covers by edges and odd
  cycles;
- fractional k-extendability by definition and by subset sweep.
"""

import multiprocessing as mp
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import networkx as nx

from .config import DEFAULT_MATCHING_BUDGET, SUBSET_SWEEP_CAP
from .graph import induced_subgraph, iter_bits


class SweepCapError(RuntimeError):
    """A subset sweep was asked for above the sweep cap."""

    def __init__(self, n, cap=SUBSET_SWEEP_CAP):
        self.n = n
        self.cap = cap
        super().__init__(f"subset sweep refused: n={n} exceeds the cap of {cap}")


class NoKMatchingError(ValueError):
    """The graph has no k-matching, so k-extendability is vacuous."""


class ModeDisagreementError(RuntimeError):
    """Definition and subset-sweep verdicts differ."""


def _fraction_dict(x):
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


# --- Independence ---------------------------------------------------------

def independence_number(g):
    """alpha(G) by branch and bound over candidate masks."""
    best = 0

    def extend(candidates, size):
        nonlocal best
        if not candidates:
            best = max(best, size)
            return
        if size + candidates.bit_count() <= best:
            return
        # Branch on the candidate with fewest candidate neighbours; a
        # vertex of candidate degree <= 1 is always safe to take.
        v = min(iter_bits(candidates), key=lambda u: (g.adj[u] & candidates).bit_count())
        extend(candidates & ~g.adj[v] & ~(1 << v), size + 1)
        if (g.adj[v] & candidates).bit_count() > 1:
            extend(candidates & ~(1 << v), size)

    extend(g.vertex_mask, 0)
    return best


def iter_independent_sets(g):
    """Yield (mask, size, neighbourhood mask) for every nonempty
    independent set, in lexicographic order of sorted vertex tuples."""

    def grow(mask, size, neighbourhood, start):
        for v in range(start, g.n):
            if (mask | neighbourhood) >> v & 1:
                continue
            grown = mask | 1 << v
            grown_nbhd = neighbourhood | g.adj[v]
            yield grown, size + 1, grown_nbhd
            yield from grow(grown, size + 1, grown_nbhd, v + 1)

    yield from grow(0, 0, 0, 0)


def delta_profile(g):
    """[delta_1, ..., delta_alpha]: delta_t is the least |N(I)| over
    independent sets I of size t."""
    best = {}
    for _, size, neighbourhood in iter_independent_sets(g):
        count = neighbourhood.bit_count()
        if size not in best or count < best[size]:
            best[size] = count
    return [best[t] for t in range(1, len(best) + 1)]


def delta_t(g, t):
    """delta_t(G), or None when t exceeds alpha(G)."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    profile = delta_profile(g)
    return profile[t - 1] if t <= len(profile) else None


@dataclass(frozen=True)
class DeltaCondition:
    """delta_t > t(d-2)/2 for all t <= alpha, and the even-index variant
    delta_{2t} > t(d-2) for all t <= alpha/2."""

    d: int
    holds: bool
    even_holds: bool
    profile: tuple
    failing_t: int | None = None

    def to_dict(self):
        return {"d": self.d, "holds": self.holds, "even_holds": self.even_holds,
                "profile": list(self.profile), "failing_t": self.failing_t}


def delta_condition(g, d):
    if d < 3:
        raise ValueError(f"d must be >= 3, got {d}")
    profile = delta_profile(g)
    failing_t = None
    for t, value in enumerate(profile, start=1):
        if 2 * value <= t * (d - 2):
            failing_t = t
            break
    even_holds = all(profile[2 * t - 1] > t * (d - 2)
                     for t in range(1, len(profile) // 2 + 1))
    return DeltaCondition(d, failing_t is None, even_holds, tuple(profile), failing_t)


# --- Subset sweeps --------------------------------------------------------

def isolated_count(g, subset_mask):
    """i(G - S): vertices outside S whose neighbourhood lies inside S."""
    outside = g.vertex_mask & ~subset_mask
    return sum(1 for v in iter_bits(outside) if not g.adj[v] & outside)


@dataclass(frozen=True)
class SubsetWitness:
    """A subset S on which `predicate` fails: lhs = i(G-S) against rhs."""

    subset: tuple
    lhs: Fraction
    rhs: Fraction
    predicate: str

    def to_dict(self):
        return {"S": list(self.subset), "lhs": _fraction_dict(self.lhs),
                "rhs": _fraction_dict(self.rhs), "predicate": self.predicate}


@dataclass(frozen=True)
class SweepPredicate:
    """One of kaneko(d), fpm, fke(k); `violation` returns (lhs, rhs) when
    the predicate fails on S, else None."""

    name: str
    param: int | None = None

    @property
    def label(self):
        return self.name if self.param is None else f"{self.name}({self.param})"

    @property
    def includes_empty(self):
        return self.name == "fpm"

    def violation(self, g, mask, size, nu=None):
        i = isolated_count(g, mask)
        if self.name == "kaneko":
            if (self.param - 2) * i >= 2 * size:
                return Fraction(i), Fraction(2 * size, self.param - 2)
            return None
        if self.name == "fpm":
            return (Fraction(i), Fraction(size)) if i > size else None
        if i <= size - 2 * self.param:
            return None
        if nu(mask) < self.param:
            return None
        return Fraction(i), Fraction(size - 2 * self.param)


def kaneko(d):
    if d < 3:
        raise ValueError(f"kaneko(d) needs d >= 3, got {d}")
    return SweepPredicate("kaneko", d)


def fpm():
    return SweepPredicate("fpm")


def fke(k):
    if k < 1:
        raise ValueError(f"fke(k) needs k >= 1, got {k}")
    return SweepPredicate("fke", k)


def _lex_subsets(n, first):
    """Yield (mask, size, tuple) for subsets with minimum `first`, in
    lexicographic order of sorted tuples."""
    combo = [first]
    mask = 1 << first
    while True:
        yield mask, len(combo), combo
        if combo[-1] < n - 1:
            combo.append(combo[-1] + 1)
            mask |= 1 << combo[-1]
        else:
            mask ^= 1 << combo.pop()
            if len(combo) <= 1:
                return
            mask ^= (1 << combo[-1]) | (1 << (combo[-1] + 1))
            combo[-1] += 1


def _sweep_block(args):
    g, predicate, first = args
    nu = matching_oracle(g) if predicate.name == "fke" else None
    for mask, size, combo in _lex_subsets(g.n, first):
        failed = predicate.violation(g, mask, size, nu)
        if failed:
            return SubsetWitness(tuple(combo), failed[0], failed[1], predicate.label)
    return None


@dataclass(frozen=True)
class SweepResult:
    passed: bool
    predicate: str
    witness: SubsetWitness | None = None

    def to_dict(self):
        return {"passed": self.passed, "predicate": self.predicate,
                "witness": self.witness.to_dict() if self.witness else None}


def isolated_sweep(g, predicate, jobs=1, cap=SUBSET_SWEEP_CAP):
    """Check `predicate` on every subset S (every nonempty S for kaneko
    and fke), returning the lexicographically first violation.

    With jobs > 1 the subsets are split into blocks by smallest vertex
    and the first block holding a witness wins.
    """
    if g.n > cap:
        raise SweepCapError(g.n, cap)
    if predicate.includes_empty:
        failed = predicate.violation(g, 0, 0)
        if failed:
            witness = SubsetWitness((), failed[0], failed[1], predicate.label)
            return SweepResult(False, predicate.label, witness)
    blocks = [(g, predicate, first) for first in range(g.n)]
    if jobs > 1 and g.n > 1:
        with mp.Pool(min(jobs, g.n)) as pool:
            witnesses = pool.map(_sweep_block, blocks)
    else:
        witnesses = []
        for block in blocks:
            witnesses.append(_sweep_block(block))
            if witnesses[-1]:
                break
    witness = next((w for w in witnesses if w), None)
    return SweepResult(witness is None, predicate.label, witness)


# --- Matchings ------------------------------------------------------------

def matching_oracle(g):
    """Return nu(mask), the matching number of G[mask], memoised per mask."""

    @lru_cache(maxsize=None)
    def nu(mask):
        if not mask:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << v)
        ceiling = mask.bit_count() // 2
        best = 0
        for u in iter_bits(g.adj[v] & rest):
            best = max(best, 1 + nu(rest ^ (1 << u)))
            if best == ceiling:
                return best
        return max(best, nu(rest))

    return nu


def max_matching_size(g):
    return matching_oracle(g)(g.vertex_mask)


class KMatchingStream:
    """Iterate the k-matchings of `g` once each, as tuples of sorted edge
    pairs, in lexicographic edge order.

    Iteration stops after `budget` matchings; `truncated` is then True
    if at least one more matching exists.
    """

    def __init__(self, g, k, budget=DEFAULT_MATCHING_BUDGET):
        if k < 0:
            raise ValueError(f"k must be >= 0, got {k}")
        self.g = g
        self.k = k
        self.budget = budget
        self.truncated = False
        self.emitted = 0

    def _matchings(self):
        edges = self.g.edges()

        def grow(start, used, chosen):
            if len(chosen) == self.k:
                yield tuple(chosen)
                return
            for index in range(start, len(edges)):
                u, v = edges[index]
                if used >> u & 1 or used >> v & 1:
                    continue
                chosen.append((u, v))
                yield from grow(index + 1, used | 1 << u | 1 << v, chosen)
                chosen.pop()

        yield from grow(0, 0, [])

    def __iter__(self):
        for matching in self._matchings():
            if self.emitted == self.budget:
                self.truncated = True
                return
            self.emitted += 1
            yield matching


def enumerate_k_matchings(g, k, budget=DEFAULT_MATCHING_BUDGET):
    return KMatchingStream(g, k, budget)


# --- Fractional perfect matchings -----------------------------------------

@dataclass(frozen=True)
class FractionalMatching:
    """Edge weights in [0, 1]; `weights` maps (u, v) with u < v to a
    Fraction."""

    weights: dict = field(default_factory=dict)
    perfect: bool = True

    def vertex_sums(self, n):
        sums = [Fraction(0)] * n
        for (u, v), weight in self.weights.items():
            sums[u] += weight
            sums[v] += weight
        return sums

    def verify(self, g):
        """Re-check the certificate exactly against `g`."""
        for (u, v), weight in self.weights.items():
            if not g.has_edge(u, v) or not 0 <= weight <= 1:
                return False
        target = (lambda total: total == 1) if self.perfect else (lambda total: total <= 1)
        return all(target(total) for total in self.vertex_sums(g.n))

    def to_dict(self):
        return {
            "perfect": self.perfect,
            "weights": [{"edge": [u, v], **_fraction_dict(w)}
                        for (u, v), w in sorted(self.weights.items())],
        }


@dataclass(frozen=True)
class FpmResult:
    exists: bool
    certificate: FractionalMatching | None = None

    def to_dict(self):
        return {"exists": self.exists,
                "certificate": self.certificate.to_dict() if self.certificate else None}


def _cover_permutation(g):
    """A permutation sigma with v ~ sigma(v) for every v, from a perfect
    matching of the bipartite double cover, or None."""
    cover = nx.Graph()
    left = [("L", v) for v in range(g.n)]
    cover.add_nodes_from(left)
    cover.add_nodes_from(("R", v) for v in range(g.n))
    for u, v in g.edges():
        cover.add_edge(("L", u), ("R", v))
        cover.add_edge(("L", v), ("R", u))
    matching = nx.bipartite.hopcroft_karp_matching(cover, top_nodes=left)
    sigma = {}
    for v in range(g.n):
        partner = matching.get(("L", v))
        if partner is None:
            return None
        sigma[v] = partner[1]
    return sigma


def has_fpm(g):
    """Fractional perfect matching as a half-integral cover.

    The cycles of a covering permutation become the certificate: 2-cycles
    are weight-1 edges, odd cycles carry 1/2 on every edge, and even
    cycles of length >= 4 are split into alternate weight-1 edges.
    """
    if g.n == 0:
        return FpmResult(True, FractionalMatching({}))
    sigma = _cover_permutation(g)
    if sigma is None:
        return FpmResult(False)
    weights = {}
    seen = set()
    for start in range(g.n):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        while sigma[cycle[-1]] != start:
            cycle.append(sigma[cycle[-1]])
            seen.add(cycle[-1])
        length = len(cycle)
        if length == 2:
            weights[tuple(sorted(cycle))] = Fraction(1)
        elif length % 2:
            for i in range(length):
                edge = tuple(sorted((cycle[i], cycle[(i + 1) % length])))
                weights[edge] = Fraction(1, 2)
        else:
            for i in range(0, length, 2):
                weights[tuple(sorted((cycle[i], cycle[i + 1])))] = Fraction(1)
    return FpmResult(True, FractionalMatching(weights))


# --- Fractional k-extendability -------------------------------------------

FKE_MODES = ("definition", "lemma23", "both")


@dataclass(frozen=True)
class FkeResult:
    """Verdict of a fractional k-extendability check.

    `verdict` is None only when the k-matching enumeration ran out of
    budget before a failing matching turned up.
    """

    k: int
    mode: str
    verdict: bool | None
    witness: SubsetWitness | None = None
    matching: tuple | None = None
    matchings_checked: int = 0
    truncated: bool = False

    def to_dict(self):
        return {
            "k": self.k,
            "mode": self.mode,
            "verdict": self.verdict,
            "witness": self.witness.to_dict() if self.witness else None,
            "matching": [list(e) for e in self.matching] if self.matching else None,
            "matchings_checked": self.matchings_checked,
            "truncated": self.truncated,
        }


def _fke_by_definition(g, k, budget):
    cache = {}
    stream = enumerate_k_matchings(g, k, budget)
    checked = 0
    for matching in stream:
        checked += 1
        covered = 0
        for u, v in matching:
            covered |= 1 << u | 1 << v
        rest = g.vertex_mask & ~covered
        if rest not in cache:
            cache[rest] = has_fpm(induced_subgraph(g, list(iter_bits(rest)))).exists
        if not cache[rest]:
            return False, matching, checked, False
    if stream.truncated:
        return None, None, checked, True
    return True, None, checked, False


def is_fractional_k_extendable(g, k, mode="both", jobs=1,
                               budget=DEFAULT_MATCHING_BUDGET):
    """Every k-matching M extends to a fractional perfect matching with
    weight 1 on M.

    "definition" checks that G - V(M) has a fractional perfect matching
    for every k-matching M. "lemma23" sweeps i(G-S) <= |S| - 2k over the
    subsets S whose induced subgraph has a k-matching. "both" runs the
    two and raises ModeDisagreementError when they differ.
    """
    if mode not in FKE_MODES:
        raise ValueError(f"mode must be one of {FKE_MODES}, got {mode!r}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if g.n < 2 * k + 2:
        raise ValueError(f"n >= 2k+2 required, got n={g.n}, k={k}")
    if max_matching_size(g) < k:
        raise NoKMatchingError(f"graph has no {k}-matching")

    verdict = witness = matching = None
    checked = 0
    truncated = False
    if mode in ("lemma23", "both"):
        sweep = isolated_sweep(g, fke(k), jobs=jobs)
        verdict = sweep.passed
        witness = sweep.witness
    if mode in ("definition", "both"):
        by_definition, matching, checked, truncated = _fke_by_definition(g, k, budget)
        if mode == "both" and by_definition is not None and by_definition != verdict:
            raise ModeDisagreementError(
                f"fractional {k}-extendability: definition says {by_definition}, "
                f"subset sweep says {verdict}")
        if mode == "definition":
            verdict = by_definition
    return FkeResult(k, mode, verdict, witness, matching, checked, truncated)
