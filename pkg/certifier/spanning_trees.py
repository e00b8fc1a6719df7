"""Spanning trees with large leaf distance.

Two oracles answer "does G have a spanning tree whose leaves are
pairwise at distance >= d":

- `exhaustive` enumerates every spanning tree (include/exclude on edges,
  where an edge may only be excluded if it is not a bridge of what is
  left) after a matrix-tree count shows the enumeration fits the budget.
  It returns Found or Absent; over budget it returns Unknown.
- `construct` grows spiders from high-degree roots, extends legs
  Warnsdorff-style (next vertex = fewest unvisited neighbours), attaches
  what is left, then improves the tree by random edge swaps. It returns
  Found or Unknown, never Absent.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_RESTARTS, DEFAULT_SEED, DEFAULT_TREE_BUDGET
from .graph import GraphError, is_connected, iter_bits


class TreeError(ValueError):
    """Edges that do not form a spanning tree of the host graph."""


class TreeBudgetError(RuntimeError):
    """The matrix-tree count exceeds the enumeration budget."""

    def __init__(self, count, budget):
        self.count = count
        self.budget = budget
        super().__init__(f"{count} spanning trees exceed the budget of {budget}")


def _tree_adjacency(n, edges):
    adjacency = [set() for _ in range(n)]
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    return adjacency


def _leaf_stats(adjacency):
    """(leaf distance, number of leaf pairs at that distance); the
    distance is None when the tree has fewer than two leaves."""
    leaves = [v for v, nbrs in enumerate(adjacency) if len(nbrs) == 1]
    if len(leaves) < 2:
        return None, 0
    leaf_set = set(leaves)
    best = None
    pairs = 0
    for source in leaves:
        distance = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for u in adjacency[v]:
                if u not in distance:
                    distance[u] = distance[v] + 1
                    queue.append(u)
        for other in leaf_set:
            if other <= source:
                continue
            dist = distance[other]
            if best is None or dist < best:
                best, pairs = dist, 1
            elif dist == best:
                pairs += 1
    return best, pairs


def _leaf_degree(adjacency):
    leaves = {v for v, nbrs in enumerate(adjacency) if len(nbrs) == 1}
    return max((len(nbrs & leaves) for nbrs in adjacency), default=0)


def meets(leaf_dist, d):
    """Leaf distance >= d, with None (fewer than two leaves) meeting any d."""
    return leaf_dist is None or leaf_dist >= d


@dataclass(frozen=True)
class TreeCertificate:
    edges: tuple
    leaf_distance: int | None
    leaf_degree: int

    def to_dict(self):
        return {"edges": [list(e) for e in self.edges],
                "leaf_distance": self.leaf_distance,
                "leaf_degree": self.leaf_degree}


def tree_from_edges(host, edges):
    """Validate `edges` as a spanning tree of `host` and measure it."""
    edges = tuple(sorted(tuple(sorted(e)) for e in edges))
    if len(edges) != host.n - 1:
        raise TreeError(f"a spanning tree of {host.n} vertices has {host.n - 1} "
                        f"edges, got {len(edges)}")
    if len(set(edges)) != len(edges):
        raise TreeError("repeated edge")
    for u, v in edges:
        if not (0 <= u < host.n and 0 <= v < host.n) or not host.has_edge(u, v):
            raise TreeError(f"({u}, {v}) is not an edge of the host graph")
    adjacency = _tree_adjacency(host.n, edges)
    if host.n:
        seen = {0}
        queue = deque([0])
        while queue:
            for u in adjacency[queue.popleft()]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        if len(seen) != host.n:
            raise TreeError("edges do not connect every vertex")
    distance, _ = _leaf_stats(adjacency)
    return TreeCertificate(edges, distance, _leaf_degree(adjacency))


def leaf_distance(tree, host):
    """Minimum tree distance between two leaves, None for < 2 leaves."""
    return tree_from_edges(host, tree.edges).leaf_distance


def leaf_degree(tree, host):
    """Largest number of leaves adjacent to one vertex."""
    return tree_from_edges(host, tree.edges).leaf_degree


# --- Counting and enumeration ---------------------------------------------

def _bareiss_determinant(matrix):
    m = [list(row) for row in matrix]
    size = len(m)
    if size == 0:
        return 1
    sign = 1
    previous = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, size) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // previous
        previous = m[k][k]
    return sign * m[-1][-1]


def spanning_tree_count(g):
    """Number of spanning trees by the matrix-tree theorem, computed
    with fraction-free integer elimination."""
    if g.n <= 1:
        return 1
    laplacian = [
        [g.degree(i) if i == j else -(g.adj[i] >> j & 1) for j in range(1, g.n)]
        for i in range(1, g.n)
    ]
    return _bareiss_determinant(laplacian)


def iter_spanning_trees(g, budget=DEFAULT_TREE_BUDGET):
    """Yield every spanning tree of a connected graph as a tuple of
    sorted edges.

    Raises TreeBudgetError up front when the tree count exceeds
    `budget`.
    """
    count = spanning_tree_count(g)
    if count > budget:
        raise TreeBudgetError(count, budget)
    if count == 0:
        return
    edges = g.edges()
    available = list(g.adj)
    chosen = [0] * g.n
    picked = []

    def spans(rows):
        seen = frontier = 1
        while frontier:
            grown = 0
            for v in iter_bits(frontier):
                grown |= rows[v]
            frontier = grown & ~seen
            seen |= frontier
        return seen == g.vertex_mask

    def joined(u, v):
        seen = frontier = 1 << u
        while frontier:
            grown = 0
            for w in iter_bits(frontier):
                grown |= chosen[w]
            frontier = grown & ~seen
            seen |= frontier
        return seen >> v & 1

    def rec(index):
        if len(picked) == g.n - 1:
            yield tuple(picked)
            return
        if index == len(edges):
            return
        u, v = edges[index]
        if not joined(u, v):
            chosen[u] |= 1 << v
            chosen[v] |= 1 << u
            picked.append((u, v))
            yield from rec(index + 1)
            picked.pop()
            chosen[u] ^= 1 << v
            chosen[v] ^= 1 << u
        available[u] ^= 1 << v
        available[v] ^= 1 << u
        if spans(available):
            yield from rec(index + 1)
        available[u] ^= 1 << v
        available[v] ^= 1 << u

    yield from rec(0)


# --- Constructive search --------------------------------------------------

def _pick(rng, candidates, key):
    """Smallest `key` among `candidates`, ties broken by `rng`."""
    candidates = list(candidates)
    scores = [key(c) for c in candidates]
    low = min(scores)
    ties = [c for c, s in zip(candidates, scores) if s == low]
    return ties[int(rng.integers(len(ties)))]


def _grow_spider(g, root, rng):
    visited = 1 << root
    edges = []
    onward = lambda w: (g.adj[w] & ~visited).bit_count()
    while g.adj[root] & ~visited:
        tip = root
        while g.adj[tip] & ~visited:
            nxt = _pick(rng, iter_bits(g.adj[tip] & ~visited), onward)
            edges.append((tip, nxt))
            visited |= 1 << nxt
            tip = nxt

    adjacency = _tree_adjacency(g.n, edges)
    while visited != g.vertex_mask:
        frontier = [w for w in iter_bits(g.vertex_mask & ~visited) if g.adj[w] & visited]
        w = _pick(rng, frontier, onward)
        # Hanging w off a current leaf pushes that leaf outward.
        anchor = _pick(rng, iter_bits(g.adj[w] & visited),
                       lambda x: (len(adjacency[x]) != 1, -len(adjacency[x])))
        edges.append((anchor, w))
        adjacency[anchor].add(w)
        adjacency[w].add(anchor)
        visited |= 1 << w
    return adjacency


def _score(adjacency):
    distance, pairs = _leaf_stats(adjacency)
    return (float("inf") if distance is None else distance, -pairs)


def _tree_path(adjacency, u, v):
    parent = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for y in adjacency[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    path = []
    while parent[v] is not None:
        path.append((parent[v], v))
        v = parent[v]
    return path


def _improve(g, adjacency, d, rng, moves):
    """Random edge swaps T - f + e keeping the score non-decreasing."""
    score = _score(adjacency)
    for _ in range(moves):
        if meets(None if score[0] == float("inf") else score[0], d):
            break
        spare = [(u, v) for u, v in g.edges() if v not in adjacency[u]]
        if not spare:
            break
        u, v = spare[int(rng.integers(len(spare)))]
        path = _tree_path(adjacency, u, v)
        a, b = path[int(rng.integers(len(path)))]
        adjacency[a].discard(b)
        adjacency[b].discard(a)
        adjacency[u].add(v)
        adjacency[v].add(u)
        candidate = _score(adjacency)
        if candidate >= score:
            score = candidate
        else:
            adjacency[u].discard(v)
            adjacency[v].discard(u)
            adjacency[a].add(b)
            adjacency[b].add(a)
    return adjacency


def _adjacency_edges(adjacency):
    return tuple(sorted((u, v) for u, nbrs in enumerate(adjacency) for v in nbrs if u < v))


def construct_tree(g, d, restarts=DEFAULT_RESTARTS, seed=DEFAULT_SEED):
    """Best-effort search; returns (certificate or None, restarts used)."""
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    for restart in range(restarts):
        rng = np.random.default_rng((seed, restart))
        root = order[restart % g.n]
        adjacency = _grow_spider(g, root, rng)
        adjacency = _improve(g, adjacency, d, rng, moves=20 * g.n)
        distance, _ = _leaf_stats(adjacency)
        if meets(distance, d):
            return tree_from_edges(g, _adjacency_edges(adjacency)), restart + 1
    return None, restarts


# --- Oracle ---------------------------------------------------------------

TREE_MODES = ("exhaustive", "construct")


@dataclass(frozen=True)
class TreeSearchResult:
    """status is "found", "absent" or "unknown"."""

    status: str
    mode: str
    d: int
    certificate: TreeCertificate | None = None
    tree_count: int | None = None
    trees_examined: int = 0
    restarts: int = 0

    def to_dict(self):
        return {
            "status": self.status,
            "mode": self.mode,
            "d": self.d,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "tree_count": self.tree_count,
            "trees_examined": self.trees_examined,
            "restarts": self.restarts,
        }


def spanning_tree_leafdist(g, d, mode="construct", budget=DEFAULT_TREE_BUDGET,
                           restarts=DEFAULT_RESTARTS, seed=DEFAULT_SEED):
    """Look for a spanning tree of `g` with leaf distance >= d."""
    if mode not in TREE_MODES:
        raise ValueError(f"mode must be one of {TREE_MODES}, got {mode!r}")
    if g.n == 0 or not is_connected(g):
        raise GraphError("spanning trees need a nonempty connected graph")

    if mode == "construct":
        certificate, used = construct_tree(g, d, restarts, seed)
        status = "found" if certificate else "unknown"
        return TreeSearchResult(status, mode, d, certificate, restarts=used)

    count = spanning_tree_count(g)
    if count > budget:
        return TreeSearchResult("unknown", mode, d, tree_count=count)
    certificate, used = construct_tree(g, d, min(restarts, 8), seed)
    if certificate:
        return TreeSearchResult("found", mode, d, certificate, count, restarts=used)
    examined = 0
    for edges in iter_spanning_trees(g, budget):
        examined += 1
        distance, _ = _leaf_stats(_tree_adjacency(g.n, edges))
        if meets(distance, d):
            certificate = tree_from_edges(g, edges)
            return TreeSearchResult("found", mode, d, certificate, count, examined, used)
    return TreeSearchResult("absent", mode, d, None, count, examined, used)
