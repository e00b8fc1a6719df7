"""Graph streams for the verifiers and lemma suites.

- `read_corpus`: a newline-delimited graph6 file, or "-" for stdin.
- `all_graphs`: every graph on n vertices up to isomorphism; the
  networkx atlas covers n <= 7, and n = 8 is generated by adding one
  vertex to every 7-vertex graph in all possible ways.
- `mutation_stream`: seeded random edge deletions and additions from a
  base graph; the hypotheses of both theorems need very dense graphs,
  which uniform sampling almost never produces.
- `edge_deletions`: every graph obtained from a base by deleting at
  most m edges, in a fixed order.
- `random_graphs`: seeded G(n, p) samples.
"""

import itertools
import sys
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path

import networkx as nx
import numpy as np

from .config import DEFAULT_SEED
from .graph import (Graph, from_networkx, graph_from_edges, is_connected,
                    make_complete, with_edge, without_edge)
from .graph6 import Graph6Error, parse_graph6
from .isomorphism import invariant_key, is_isomorphic

ATLAS_MAX_ORDER = 7
GENERATED_MAX_ORDER = 8


def read_corpus(path):
    """Yield the graphs of a graph6 corpus file ("-" reads stdin).

    Malformed lines raise Graph6Error naming the line number.
    """
    if str(path) == "-":
        data = sys.stdin.buffer.read()
    else:
        data = Path(path).read_bytes()
    for lineno, line in enumerate(data.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            yield parse_graph6(line)
        except Graph6Error as e:
            raise type(e)(f"line {lineno}: {e}") from e


@lru_cache(maxsize=None)
def _atlas_by_order():
    by_order = {}
    for nx_graph in nx.graph_atlas_g():
        by_order.setdefault(nx_graph.number_of_nodes(), []).append(from_networkx(nx_graph))
    return {n: tuple(graphs) for n, graphs in by_order.items()}


def _one_vertex_extensions(graphs, n):
    """Non-isomorphic graphs on n vertices that contain one of `graphs`
    (all on n-1 vertices) as the subgraph induced by vertices 0..n-2."""
    buckets = {}
    result = []
    for base in graphs:
        for neighbours in range(1 << base.n):
            rows = list(base.adj) + [neighbours]
            for v in range(base.n):
                if neighbours >> v & 1:
                    rows[v] |= 1 << base.n
            g = Graph(n, tuple(rows))
            bucket = buckets.setdefault(invariant_key(g), [])
            if any(is_isomorphic(g, seen) for seen in bucket):
                continue
            bucket.append(g)
            result.append(g)
    return result


@lru_cache(maxsize=None)
def all_graphs(n, connected=False):
    """Every graph on n vertices, up to isomorphism, as a tuple.

    Connected graphs on 8 vertices all arise from connected 7-vertex
    graphs, since deleting a non-cut vertex keeps a graph connected.
    """
    if n < 0 or n > GENERATED_MAX_ORDER:
        raise ValueError(f"all_graphs covers 0 <= n <= {GENERATED_MAX_ORDER}, got {n}")
    if n <= ATLAS_MAX_ORDER:
        graphs = _atlas_by_order().get(n, ())
    else:
        graphs = tuple(_one_vertex_extensions(all_graphs(n - 1, connected), n))
    if connected:
        graphs = tuple(g for g in graphs if g.n and is_connected(g))
    return graphs


def graphs_up_to(n_max, n_min=1, connected=False):
    for n in range(n_min, n_max + 1):
        yield from all_graphs(n, connected)


def edge_deletions(base, m):
    """Graphs obtained from `base` by deleting at most m of its edges,
    by number of deletions and then lexicographically by edge set."""
    edges = base.edges()
    for count in range(m + 1):
        for removed in itertools.combinations(edges, count):
            g = base
            for u, v in removed:
                g = without_edge(g, u, v)
            yield g


def mutation_stream(base, max_edits, samples, seed=DEFAULT_SEED, add=True):
    """`samples` graphs, each `base` with between 1 and `max_edits`
    random edge flips; flips only delete edges when `add` is False."""
    rng = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(base.n) for v in range(u + 1, base.n)]
    for _ in range(samples):
        g = base
        for _ in range(int(rng.integers(1, max_edits + 1))):
            candidates = pairs if add else [(u, v) for u, v in pairs if g.has_edge(u, v)]
            if not candidates:
                break
            u, v = candidates[int(rng.integers(len(candidates)))]
            g = without_edge(g, u, v) if g.has_edge(u, v) else with_edge(g, u, v)
        yield g


def random_graphs(n, p, samples, seed=DEFAULT_SEED):
    """Seeded G(n, p) graphs."""
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        coins = rng.random((n, n))
        yield graph_from_edges(
            n, [(u, v) for u in range(n) for v in range(u + 1, n) if coins[u, v] < p])


def random_connected_graph(rng, n, p):
    """Resample G(n, p) until connected."""
    while True:
        coins = rng.random((n, n))
        g = graph_from_edges(
            n, [(u, v) for u in range(n) for v in range(u + 1, n) if coins[u, v] < p])
        if is_connected(g):
            return g


SAMPLER_KINDS = ("mutation", "deletion", "random", "corpus")
SAMPLER_BASES = ("complete", "extremal")


@dataclass(frozen=True)
class SamplerConfig:
    """How a verifier draws its instances.

    "mutation" flips up to `max_edits` edges of the base graph,
    "deletion" deletes every set of at most `max_edits` edges from it,
    "random" draws G(n, p), and "corpus" reads a graph6 file. The base
    is K_n, whose mutations only delete edges, or the theorem's extremal
    graph, whose mutations also add them.
    """

    kind: str = "mutation"
    samples: int = 100
    max_edits: int = 3
    p: float = 0.9
    corpus: str | None = None
    seed: int = DEFAULT_SEED
    base: str = "complete"

    def to_dict(self):
        return asdict(self)


def iter_instances(config, n, extremal=None):
    """Instances on n vertices; `extremal` is the base graph when
    config.base is "extremal"."""
    if config.kind not in SAMPLER_KINDS:
        raise ValueError(f"sampler must be one of {SAMPLER_KINDS}, got {config.kind!r}")
    if config.base not in SAMPLER_BASES:
        raise ValueError(f"sampler base must be one of {SAMPLER_BASES}, got {config.base!r}")
    if config.kind == "corpus":
        if not config.corpus:
            raise ValueError("the corpus sampler needs a --corpus file")
        return read_corpus(config.corpus)
    if config.kind == "random":
        return random_graphs(n, config.p, config.samples, config.seed)
    if config.base == "extremal":
        if extremal is None:
            raise ValueError("the extremal base needs an extremal graph")
        base, add = extremal, True
    else:
        base, add = make_complete(n), False
    if config.kind == "deletion":
        return edge_deletions(base, config.max_edits)
    return mutation_stream(base, config.max_edits, config.samples, config.seed, add=add)
