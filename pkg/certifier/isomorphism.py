"""Isomorphism testing for the small dense graphs the harness meets.

A degree-sequence prefilter rejects most pairs. The survivors go through
backtracking that maps vertices in a fixed order (highest degree first)
and checks each new pair against the already-mapped neighbourhoods as a
single bit-vector comparison.
"""

from .graph import build_family, iter_bits


def vertex_invariant(g, v):
    """Degree of v and the sorted degrees of its neighbours."""
    return g.degree(v), tuple(sorted(g.degree(u) for u in iter_bits(g.adj[v])))


def invariant_key(g):
    """Isomorphism-invariant key: equal graphs give equal keys."""
    return g.n, tuple(sorted(vertex_invariant(g, v) for v in range(g.n)))


def is_isomorphic(g, h):
    if g.n != h.n or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    if invariant_key(g) != invariant_key(h):
        return False

    g_labels = [vertex_invariant(g, v) for v in range(g.n)]
    h_labels = [vertex_invariant(h, v) for v in range(h.n)]
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    image = [-1] * g.n

    def extend(position, mapped_g, used_h):
        if position == g.n:
            return True
        v = order[position]
        # Images of v's already-mapped neighbours.
        required = 0
        for u in iter_bits(g.adj[v] & mapped_g):
            required |= 1 << image[u]
        for w in range(h.n):
            if used_h >> w & 1 or h_labels[w] != g_labels[v]:
                continue
            if h.adj[w] & used_h != required:
                continue
            image[v] = w
            if extend(position + 1, mapped_g | 1 << v, used_h | 1 << w):
                return True
        image[v] = -1
        return False

    return extend(0, 0, 0)


def is_extremal_graph(g, spec):
    """True iff `g` is isomorphic to the graph `spec` describes."""
    if g.n != spec.n:
        return False
    return is_isomorphic(g, build_family(spec))
