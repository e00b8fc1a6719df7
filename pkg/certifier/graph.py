"""Simple undirected graphs stored as per-vertex bit vectors.

Row `adj[v]` is an int whose bit `u` is set iff `uv` is an edge. All the
exhaustive tooling works on these words directly: neighbourhood unions
are ORs, containment is `adj[v] & ~mask == 0`, and a vertex subset is a
mask.

Constructors are pure and return new `Graph` values; nothing mutates a
graph after construction, so graphs can be shared across worker
processes freely.
"""

import re
from dataclasses import dataclass

import networkx as nx

from .config import VERTEX_CAP


class GraphError(ValueError):
    """Malformed adjacency, out-of-range vertex, or a query that needs a
    nonempty graph."""


class VertexCapError(GraphError):
    """More vertices than one adjacency word holds."""


class FamilyError(ValueError):
    """A family parameter combination violates the family's invariants.

    `failed` holds the inequality that does not hold.
    """

    def __init__(self, spec, failed):
        self.spec = spec
        self.failed = failed
        super().__init__(f"{spec.describe()}: {failed} does not hold")


class EdgeListError(ValueError):
    """Malformed edge-list text."""


def iter_bits(mask):
    """Yield the indices of the set bits of `mask`, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices 0..n-1."""

    n: int
    adj: tuple

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        if self.n > VERTEX_CAP:
            raise VertexCapError(f"{self.n} vertices exceeds the {VERTEX_CAP}-vertex cap")
        if len(self.adj) != self.n:
            raise GraphError(f"{len(self.adj)} adjacency rows for {self.n} vertices")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise GraphError(f"row {v} has bits beyond vertex {self.n - 1}")
            if row >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency at ({v}, {u})")

    @property
    def vertex_mask(self):
        return (1 << self.n) - 1

    def degree(self, v):
        return self.adj[v].bit_count()

    def degrees(self):
        return [row.bit_count() for row in self.adj]

    def neighbors(self, v):
        return list(iter_bits(self.adj[v]))

    def has_edge(self, u, v):
        return bool(self.adj[u] >> v & 1)

    def edges(self):
        """Edges as (u, v) pairs with u < v, in lexicographic order."""
        return [(u, v) for u in range(self.n)
                for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]


def graph_from_edges(n, edges):
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def empty_graph(n):
    return Graph(n, (0,) * n)


def make_complete(n):
    """K_n."""
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << v) for v in range(n)))


def cycle_graph(n):
    return graph_from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def path_graph(n):
    return graph_from_edges(n, [(v, v + 1) for v in range(n - 1)])


def star_graph(leaves):
    """K_{1,leaves} with the centre at vertex 0."""
    return graph_from_edges(leaves + 1, [(0, v) for v in range(1, leaves + 1)])


def graph_union(g1, g2):
    """Disjoint union; g2's vertices are shifted up by g1.n."""
    shift = g1.n
    return Graph(g1.n + g2.n, g1.adj + tuple(row << shift for row in g2.adj))


def graph_join(g1, g2):
    """g1 ∪ g2 plus every edge between the two vertex sets."""
    shift = g1.n
    g1_mask = g1.vertex_mask
    g2_mask = g2.vertex_mask << shift
    rows = tuple(row | g2_mask for row in g1.adj)
    rows += tuple((row << shift) | g1_mask for row in g2.adj)
    return Graph(g1.n + g2.n, rows)


def delete_vertices(g, vertices):
    """G - S, survivors relabelled 0.. in their original order."""
    removed = set(vertices)
    for v in removed:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range for n={g.n}")
    keep = [v for v in range(g.n) if v not in removed]
    return induced_subgraph(g, keep)


def induced_subgraph(g, keep):
    """G[keep], vertices relabelled by their position in `keep`."""
    keep = list(keep)
    position = {v: i for i, v in enumerate(keep)}
    rows = []
    for v in keep:
        row = 0
        for u in iter_bits(g.adj[v]):
            if u in position:
                row |= 1 << position[u]
        rows.append(row)
    return Graph(len(keep), tuple(rows))


def relabel(g, perm):
    """Graph with vertex v renamed perm[v]."""
    rows = [0] * g.n
    for v in range(g.n):
        row = 0
        for u in iter_bits(g.adj[v]):
            row |= 1 << perm[u]
        rows[perm[v]] = row
    return Graph(g.n, tuple(rows))


def with_edge(g, u, v):
    rows = list(g.adj)
    rows[u] |= 1 << v
    rows[v] |= 1 << u
    return Graph(g.n, tuple(rows))


def without_edge(g, u, v):
    rows = list(g.adj)
    rows[u] &= ~(1 << v)
    rows[v] &= ~(1 << u)
    return Graph(g.n, tuple(rows))


def edge_count(g):
    return sum(row.bit_count() for row in g.adj) // 2


def min_degree(g):
    if g.n == 0:
        raise GraphError("minimum degree of the empty graph")
    return min(row.bit_count() for row in g.adj)


def reachable(g, start, within=None):
    """Mask of vertices reachable from `start` inside the mask `within`."""
    within = g.vertex_mask if within is None else within
    seen = 1 << start
    frontier = seen
    while frontier:
        grown = 0
        for v in iter_bits(frontier):
            grown |= g.adj[v]
        frontier = grown & within & ~seen
        seen |= frontier
    return seen


def is_connected(g):
    if g.n == 0:
        raise GraphError("connectivity of the empty graph")
    return reachable(g, 0) == g.vertex_mask


def is_complete(g):
    return edge_count(g) == g.n * (g.n - 1) // 2


def is_star(g):
    """True for K_{1,m}, m >= 1 (K_2 counts as a star)."""
    if g.n < 2 or edge_count(g) != g.n - 1:
        return False
    return any(row.bit_count() == g.n - 1 for row in g.adj)


def from_networkx(nx_graph):
    nodes = sorted(nx_graph.nodes())
    position = {v: i for i, v in enumerate(nodes)}
    return graph_from_edges(
        len(nodes), [(position[u], position[v]) for u, v in nx_graph.edges()])


def to_networkx(g):
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(g.n))
    nx_graph.add_edges_from(g.edges())
    return nx_graph


# --- Named families -------------------------------------------------------

FAMILY_KINDS = (
    "tree-extremal",
    "tree-proof-g1",
    "fke-proof-g1",
    "fke-extremal-a",
    "fke-extremal-b",
)

_FAMILY_PARAMS = {
    "tree-extremal": ("d",),
    "tree-proof-g1": ("d", "q"),
    "fke-proof-g1": ("k", "s"),
    "fke-extremal-a": ("k",),
    "fke-extremal-b": ("k", "delta"),
}


def ceil_half(x):
    return -(-x // 2)


@dataclass(frozen=True)
class FamilySpec:
    """Symbolic K_h ∨ (K_c ∪ iK_1) family.

    The five kinds are the tree theorem's extremal graph, the family G1
    of the tree-lemma proof (parameter q), the family G1 of the
    fractional-extendability proof (parameter s), and the two extremal
    graphs of the fractional-extendability theorem.
    """

    kind: str
    n: int
    d: int | None = None
    k: int | None = None
    q: int | None = None
    s: int | None = None
    delta: int | None = None

    def params(self):
        names = ("n",) + _FAMILY_PARAMS.get(self.kind, ())
        return {name: getattr(self, name) for name in names}

    def describe(self):
        args = ", ".join(f"{name}={value}" for name, value in self.params().items())
        return f"{self.kind}({args})"

    def parts(self):
        """(hub, clique, isolated) part sizes, before validation."""
        n, d, k = self.n, self.d, self.k
        if self.kind == "tree-extremal":
            return ceil_half(d) - 1, n - ceil_half(d), 1
        if self.kind == "tree-proof-g1":
            hub = ceil_half(self.q * (d - 2))
            return hub, n - hub - self.q, self.q
        if self.kind == "fke-proof-g1":
            s = self.s
            return s, n - 2 * s + 2 * k - 1, s - 2 * k + 1
        if self.kind == "fke-extremal-a":
            return 2 * k, n - 2 * k - 1, 1
        delta = self.delta
        return delta, n - 2 * delta + 2 * k - 1, delta - 2 * k + 1

    def validate(self):
        if self.kind not in FAMILY_KINDS:
            raise FamilyError(self, f"kind in {FAMILY_KINDS}")
        for name, value in self.params().items():
            if value is None:
                raise FamilyError(self, f"{name} is given")
            if value < 1:
                raise FamilyError(self, f"{name} >= 1 ({name}={value})")
        n, d, k = self.n, self.d, self.k
        hub, clique, isolated = self.parts()
        if self.kind == "tree-extremal":
            _require(self, hub >= 1, f"ceil(d/2)-1 >= 1 ({hub} < 1)")
            _require(self, n >= ceil_half(d) + 1,
                     f"n >= ceil(d/2)+1 ({n} < {ceil_half(d) + 1})")
        elif self.kind == "tree-proof-g1":
            _require(self, clique >= 0,
                     f"n - ceil(q(d-2)/2) - q >= 0 ({clique} < 0)")
        elif self.kind == "fke-proof-g1":
            _require(self, self.s >= 2 * k, f"s >= 2k ({self.s} < {2 * k})")
            _require(self, clique >= 0, f"n - 2s + 2k - 1 >= 0 ({clique} < 0)")
        elif self.kind == "fke-extremal-a":
            _require(self, n >= 2 * k + 2, f"n >= 2k+2 ({n} < {2 * k + 2})")
        else:
            _require(self, isolated >= 0,
                     f"delta - 2k + 1 >= 0 ({isolated} < 0)")
            _require(self, n >= 2 * self.delta - 2 * k + 1,
                     f"n >= 2*delta - 2k + 1 ({n} < {2 * self.delta - 2 * k + 1})")
        return self

    def label(self):
        hub, clique, isolated = self.parts()
        rest = f"K_{clique}"
        if isolated == 1:
            rest += " ∪ K_1"
        elif isolated > 1:
            rest += f" ∪ {isolated}K_1"
        return f"K_{hub} ∨ ({rest})"

    def to_dict(self):
        return {"kind": self.kind, **self.params(), "label": self.label()}


def _require(spec, holds, failed):
    if not holds:
        raise FamilyError(spec, failed)


def build_family(spec):
    """Build K_h ∨ (K_c ∪ iK_1): hub clique first, then the large
    clique, then the isolated part."""
    spec.validate()
    hub, clique, isolated = spec.parts()
    return graph_join(make_complete(hub),
                      graph_union(make_complete(clique), empty_graph(isolated)))


def family_cells(spec):
    """Vertex cells (hub, clique, isolated part) of a built family, in
    builder order, with empty cells dropped."""
    cells = []
    start = 0
    for size in spec.parts():
        if size > 0:
            cells.append(list(range(start, start + size)))
        start += size
    return cells


# --- Edge lists -----------------------------------------------------------

_HEADER_RE = re.compile(r"^n\s+(\d+)$")
_EDGE_RE = re.compile(r"^(\d+)\s+(\d+)$")


def parse_edge_list(text):
    """Parse "u v" lines (0-indexed), '#' comments, optional "n <count>"
    as the first non-comment line.

    Without a header the vertex count is one more than the largest
    index mentioned.
    """
    n = None
    edges = []
    seen_content = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER_RE.match(line)
        if m:
            if seen_content:
                raise EdgeListError(f"line {lineno}: header after edges")
            n = int(m.group(1))
            seen_content = True
            continue
        m = _EDGE_RE.match(line)
        if not m:
            raise EdgeListError(f"line {lineno}: expected 'u v', got {raw!r}")
        edges.append((int(m.group(1)), int(m.group(2))))
        seen_content = True
    if n is None:
        n = max((max(u, v) for u, v in edges), default=-1) + 1
    try:
        return graph_from_edges(n, edges)
    except GraphError as e:
        raise EdgeListError(str(e)) from e


def emit_edge_list(g):
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"
