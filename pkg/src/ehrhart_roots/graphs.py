"""Finite graphs with optional loops: named families, canonical labeling,
isomorphism-free enumeration, block decomposition and block-level equivalence.

Vertices are labeled 1..d.  Graphs are immutable values.  Isomorphism is
loop-preserving: a relabeling must carry looped vertices to looped vertices.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

__all__ = [
    "Graph",
    "Partition",
    "CanonicalKey",
    "GraphError",
    "GraphFormatError",
    "complete_graph",
    "complete_multipartite",
    "cycle_graph",
    "path_graph",
    "star_graph",
    "gamma_family",
    "beta_family",
    "relabel",
    "canonical_key",
    "automorphism_generators",
    "is_connected",
    "components",
    "biconnected_components",
    "unimodular_equivalent",
    "loop_pairs_closed",
    "loop_edge_closure",
    "multipartite_type",
    "is_tree",
    "enumerate_connected_simple",
    "parse_graph_line",
    "format_graph_line",
    "read_graph_file",
    "write_graph_file",
]


class GraphError(ValueError):
    """Invalid graph construction or operation input."""


class GraphFormatError(GraphError):
    """Malformed graph text; the message carries the offending line number."""


@dataclass(frozen=True, order=True)
class CanonicalKey:
    """Isomorphism invariant: upper-triangular row-major adjacency bits plus
    loop indicator bits, both under the canonical vertex ordering."""

    d: int
    adjacency: str
    loops: str

    def __str__(self) -> str:
        a = int(self.adjacency, 2) if self.adjacency else 0
        l = int(self.loops, 2) if self.loops else 0
        return f"g{self.d}-{a:x}-{l:x}"


@dataclass(frozen=True)
class Graph:
    """Undirected graph on vertices 1..d with simple edges and loops."""

    d: int
    edges: frozenset
    loops: frozenset = frozenset()

    def __post_init__(self):
        if self.d < 1:
            raise GraphError(f"graph needs at least one vertex, got d={self.d}")
        for e in self.edges:
            if len(e) != 2:
                raise GraphError(f"edge {e!r} is not a pair")
            i, j = e
            if not (1 <= i < j <= self.d):
                raise GraphError(f"edge {e!r} out of range or not sorted (want 1 <= i < j <= {self.d})")
        for v in self.loops:
            if not 1 <= v <= self.d:
                raise GraphError(f"loop at {v} out of range 1..{self.d}")

    @classmethod
    def from_edges(cls, d, edges, loops=()):
        """Build a graph, normalizing each edge pair to (min, max)."""
        norm = set()
        for e in edges:
            i, j = e
            if i == j:
                raise GraphError(f"edge {e!r} is a loop; pass it via loops=")
            norm.add((min(i, j), max(i, j)))
        return cls(d, frozenset(norm), frozenset(loops))

    @property
    def simple(self) -> bool:
        return not self.loops

    def neighbors(self, v):
        """Vertices adjacent to v through simple edges (loops excluded)."""
        out = set()
        for i, j in self.edges:
            if i == v:
                out.add(j)
            elif j == v:
                out.add(i)
        return out

    def degree(self, v) -> int:
        return len(self.neighbors(v))


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive integers q_1 >= ... >= q_t."""

    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise GraphError("empty partition")
        for q in self.parts:
            if not isinstance(q, int) or q < 1:
                raise GraphError(f"partition part {q!r} is not a positive integer")
        if any(self.parts[i] < self.parts[i + 1] for i in range(len(self.parts) - 1)):
            raise GraphError(f"parts {self.parts} are not weakly decreasing")

    @classmethod
    def of(cls, *parts):
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def d(self) -> int:
        return sum(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)


# ---------------------------------------------------------------------------
# named families


def complete_graph(d) -> Graph:
    """K_d: every pair of the d vertices joined by an edge."""
    if d < 1:
        raise GraphError(f"complete graph needs d >= 1, got {d}")
    return Graph.from_edges(d, itertools.combinations(range(1, d + 1), 2))


def complete_multipartite(partition) -> Graph:
    """Complete multipartite graph whose parts have the given sizes.

    Vertices are grouped consecutively: the first q_1 form part 1, and so on.
    A single part is rejected: with no edges there is nothing to build on.
    """
    if not isinstance(partition, Partition):
        partition = Partition(tuple(partition))
    if len(partition) < 2:
        raise GraphError("complete multipartite graph needs at least two parts")
    bounds = [0]
    for q in partition:
        bounds.append(bounds[-1] + q)
    part_of = {}
    for k in range(len(partition)):
        for v in range(bounds[k] + 1, bounds[k + 1] + 1):
            part_of[v] = k
    d = partition.d
    edges = [(i, j) for i, j in itertools.combinations(range(1, d + 1), 2) if part_of[i] != part_of[j]]
    return Graph.from_edges(d, edges)


def cycle_graph(d) -> Graph:
    """C_d: cycle 1-2-...-d-1."""
    if d < 3:
        raise GraphError(f"cycle needs d >= 3, got {d}")
    edges = [(i, i + 1) for i in range(1, d)] + [(1, d)]
    return Graph.from_edges(d, edges)


def path_graph(d) -> Graph:
    """Path 1-2-...-d."""
    if d < 1:
        raise GraphError(f"path needs d >= 1, got {d}")
    return Graph.from_edges(d, [(i, i + 1) for i in range(1, d)])


def star_graph(d) -> Graph:
    """Star with center 1 and d-1 leaves."""
    if d < 2:
        raise GraphError(f"star needs d >= 2, got {d}")
    return Graph.from_edges(d, [(1, j) for j in range(2, d + 1)])


def gamma_family(d, p) -> Graph:
    """Looped vertices 1..p forming a clique, loop-free vertices p+1..d joined
    to every looped vertex, no edges among the loop-free vertices."""
    if not 2 <= p < d:
        raise GraphError(f"gamma family needs 2 <= p < d, got p={p}, d={d}")
    edges = list(itertools.combinations(range(1, p + 1), 2))
    edges += [(i, j) for i in range(1, p + 1) for j in range(p + 1, d + 1)]
    return Graph.from_edges(d, edges, loops=range(1, p + 1))


def beta_family(p, q) -> Graph:
    """Complete bipartite graph on parts 1..p and p+1..p+q plus one extra
    looped vertex p+q+1 joined to everything else."""
    if p < 1 or q < 1:
        raise GraphError(f"beta family needs p, q >= 1, got p={p}, q={q}")
    w = p + q + 1
    edges = [(i, p + j) for i in range(1, p + 1) for j in range(1, q + 1)]
    edges += [(i, w) for i in range(1, p + q + 1)]
    return Graph.from_edges(w, edges, loops=[w])


# ---------------------------------------------------------------------------
# relabeling and canonical form

_AUTO_CAP = 120


def relabel(g, mapping) -> Graph:
    """Apply a bijection {1..d} -> {1..d} given as a dict or tuple (1-based)."""
    if isinstance(mapping, dict):
        perm = mapping
    else:
        perm = {i + 1: mapping[i] for i in range(len(mapping))}
    if sorted(perm) != list(range(1, g.d + 1)) or sorted(perm.values()) != list(range(1, g.d + 1)):
        raise GraphError("mapping is not a bijection on 1..d")
    edges = [(perm[i], perm[j]) for i, j in g.edges]
    loops = [perm[v] for v in g.loops]
    return Graph.from_edges(g.d, edges, loops)


def _to_masks(g):
    """0-based adjacency bitmasks and loop bitmask."""
    masks = [0] * g.d
    for i, j in g.edges:
        masks[i - 1] |= 1 << (j - 1)
        masks[j - 1] |= 1 << (i - 1)
    loopmask = 0
    for v in g.loops:
        loopmask |= 1 << (v - 1)
    return masks, loopmask


def _canonicalize(n, masks, loopmask=0):
    """Ordering of 0..n-1 maximizing the column-major adjacency bitstring
    (with a loop bit appended per placed vertex when loops are present).

    Returns (order, autos): order[pos] = original vertex, and a list of
    automorphisms discovered along the way, each a tuple sigma with
    sigma[v] = image of v.  The list is capped and need not generate the
    full automorphism group.
    """
    if n == 1:
        return (0,), []
    use_loops = loopmask != 0
    best_chunks = [0] * n
    best_order = [0] * n
    have_best = False
    autos = []
    placed = []
    chunks = []
    degs = [m.bit_count() for m in masks]

    def chunk_of(v):
        av = masks[v]
        c = 0
        for u in placed:
            c = (c << 1) | ((av >> u) & 1)
        if use_loops:
            c = (c << 1) | ((loopmask >> v) & 1)
        return c

    def orbit_hit(v, processed):
        stab = [s for s in autos if all(s[p] == p for p in placed)]
        if not stab:
            return False
        seen = {v}
        frontier = [v]
        procset = set(processed)
        while frontier:
            u = frontier.pop()
            for s in stab:
                w = s[u]
                if w in procset:
                    return True
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return False

    def dfs():
        nonlocal have_best
        k = len(placed)
        greater = not have_best
        if have_best:
            for i in range(k):
                a, b = chunks[i], best_chunks[i]
                if a != b:
                    if a < b:
                        return
                    greater = True
                    break
        if k == n:
            if greater:
                best_chunks[:] = chunks
                best_order[:] = placed
                have_best = True
            elif len(autos) < _AUTO_CAP:
                sigma = [0] * n
                for i, v in enumerate(placed):
                    sigma[v] = best_order[i]
                autos.append(tuple(sigma))
            return
        avail = [v for v in range(n) if v not in placed]
        scored = sorted(((chunk_of(v), degs[v], v) for v in avail), reverse=True)
        processed = []
        for c, _, v in scored:
            if have_best and not greater and c < best_chunks[k]:
                break
            if processed and autos and orbit_hit(v, processed):
                processed.append(v)
                continue
            placed.append(v)
            chunks.append(c)
            dfs()
            placed.pop()
            chunks.pop()
            processed.append(v)

    dfs()
    return tuple(best_order), autos


def _canonical_masks(n, masks, order):
    """Adjacency masks after relabeling original vertex order[pos] to pos."""
    pos = [0] * n
    for p, v in enumerate(order):
        pos[v] = p
    out = [0] * n
    for v in range(n):
        m = masks[v]
        acc = 0
        while m:
            u = (m & -m).bit_length() - 1
            acc |= 1 << pos[u]
            m &= m - 1
        out[pos[v]] = acc
    return out


def _key_from_masks(n, masks, loopbits):
    adj = []
    for i in range(n):
        for j in range(i + 1, n):
            adj.append("1" if (masks[i] >> j) & 1 else "0")
    return CanonicalKey(n, "".join(adj), "".join(loopbits))


def canonical_key(g) -> CanonicalKey:
    """Canonical form of g; equal keys exactly for isomorphic graphs."""
    masks, loopmask = _to_masks(g)
    order, _ = _canonicalize(g.d, masks, loopmask)
    canon = _canonical_masks(g.d, masks, order)
    loopbits = ["1" if (loopmask >> v) & 1 else "0" for v in order]
    return _key_from_masks(g.d, canon, loopbits)


def automorphism_generators(g):
    """Some loop-preserving automorphisms of g as 1-based permutation dicts.

    The returned set is a byproduct of canonical labeling; it need not
    generate the full automorphism group.
    """
    masks, loopmask = _to_masks(g)
    _, autos = _canonicalize(g.d, masks, loopmask)
    return [{v + 1: s[v] + 1 for v in range(g.d)} for s in autos]


# ---------------------------------------------------------------------------
# connectivity and blocks


def components(g):
    """Vertex sets of connected components, each a sorted tuple."""
    seen = set()
    out = []
    adj = {v: g.neighbors(v) for v in range(1, g.d + 1)}
    for s in range(1, g.d + 1):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(tuple(sorted(comp)))
    return out


def is_connected(g) -> bool:
    return len(components(g)) == 1


def biconnected_components(g):
    """Blocks (maximal 2-connected subgraphs; bridges give single edges) of a
    connected simple graph, each relabeled to vertices 1..k, sorted by key."""
    if not g.simple:
        raise GraphError("blocks are defined here for simple graphs only")
    if not is_connected(g):
        raise GraphError("graph must be connected")
    adj = {v: sorted(g.neighbors(v)) for v in range(1, g.d + 1)}
    disc = {}
    low = {}
    stack = []
    blocks = []
    counter = itertools.count(1)

    def collect(until_edge):
        comp = []
        while True:
            e = stack.pop()
            comp.append(e)
            if e == until_edge:
                break
        return comp

    def dfs(u, parent):
        disc[u] = low[u] = next(counter)
        for w in adj[u]:
            if w == parent:
                continue
            if w in disc:
                if disc[w] < disc[u]:
                    stack.append((u, w))
                    low[u] = min(low[u], disc[w])
                continue
            stack.append((u, w))
            dfs(w, u)
            low[u] = min(low[u], low[w])
            if low[w] >= disc[u]:
                blocks.append(collect((u, w)))

    if g.d >= 1:
        dfs(1, 0)

    out = []
    for comp in blocks:
        verts = sorted({v for e in comp for v in e})
        rename = {v: i + 1 for i, v in enumerate(verts)}
        out.append(Graph.from_edges(len(verts), [(rename[a], rename[b]) for a, b in comp]))
    return sorted(out, key=canonical_key)


def unimodular_equivalent(g1, g2) -> bool:
    """Whether two connected simple graphs have the same multiset of blocks
    up to isomorphism (their edge polytopes then agree up to a lattice
    transformation)."""
    for g in (g1, g2):
        if not g.simple or not is_connected(g):
            raise GraphError("block equivalence needs connected simple graphs")
    k1 = sorted(canonical_key(b) for b in biconnected_components(g1))
    k2 = sorted(canonical_key(b) for b in biconnected_components(g2))
    return k1 == k2


# ---------------------------------------------------------------------------
# loop closure


def loop_pairs_closed(g) -> bool:
    """Whether every two distinct looped vertices are joined by an edge."""
    for i, j in itertools.combinations(sorted(g.loops), 2):
        if (i, j) not in g.edges:
            return False
    return True


def loop_edge_closure(g) -> Graph:
    """Add the missing edges between looped vertices.

    Gives a graph with the same edge polytope whose looped pairs are all
    adjacent, which the polytope constructors require.
    """
    extra = [(i, j) for i, j in itertools.combinations(sorted(g.loops), 2) if (i, j) not in g.edges]
    if not extra:
        return g
    return Graph(g.d, g.edges | frozenset(extra), g.loops)


# ---------------------------------------------------------------------------
# structure detection


def multipartite_type(g):
    """Partition (q_1 >= ... >= q_t) if g is complete multipartite, else None.

    Detected through the complement being a disjoint union of cliques.
    """
    if not g.simple:
        return None
    comp_adj = {v: set() for v in range(1, g.d + 1)}
    for i, j in itertools.combinations(range(1, g.d + 1), 2):
        if (i, j) not in g.edges:
            comp_adj[i].add(j)
            comp_adj[j].add(i)
    seen = set()
    sizes = []
    for s in range(1, g.d + 1):
        if s in seen:
            continue
        part = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for w in comp_adj[u]:
                if w not in part:
                    part.add(w)
                    stack.append(w)
        for i, j in itertools.combinations(part, 2):
            if j not in comp_adj[i]:
                return None
        seen |= part
        sizes.append(len(part))
    if len(sizes) < 2:
        return None
    return Partition(tuple(sorted(sizes, reverse=True)))


def is_tree(g) -> bool:
    return g.simple and len(g.edges) == g.d - 1 and is_connected(g)


# ---------------------------------------------------------------------------
# enumeration of connected simple graphs up to isomorphism


def _subset_orbit_reps(k, autos):
    """One representative per orbit of the nonempty subsets of 0..k-1 under
    the group generated by the given vertex permutations."""
    total = 1 << k
    if not autos:
        return list(range(1, total))
    seen = bytearray(total)
    reps = []
    for s in range(1, total):
        if seen[s]:
            continue
        reps.append(s)
        frontier = [s]
        seen[s] = 1
        while frontier:
            t = frontier.pop()
            for sigma in autos:
                u = 0
                m = t
                while m:
                    b = (m & -m).bit_length() - 1
                    u |= 1 << sigma[b]
                    m &= m - 1
                if not seen[u]:
                    seen[u] = 1
                    frontier.append(u)
    return reps


@functools.lru_cache(maxsize=None)
def _connected_level(d):
    """Canonical adjacency masks and automorphisms of all connected simple
    graphs of order d, keyed and sorted by canonical adjacency bits."""
    if d == 1:
        return (((0,), ()),)
    out = {}
    for pmasks, pautos in _connected_level(d - 1):
        k = d - 1
        for s in _subset_orbit_reps(k, pautos):
            masks = [pmasks[i] | (((s >> i) & 1) << k) for i in range(k)]
            masks.append(s)
            order, autos = _canonicalize(d, masks)
            canon = tuple(_canonical_masks(d, masks, order))
            bits = 0
            for i in range(d):
                for j in range(i + 1, d):
                    bits = (bits << 1) | ((canon[i] >> j) & 1)
            if bits not in out:
                pos = [0] * d
                for p, v in enumerate(order):
                    pos[v] = p
                conj = tuple(
                    tuple(pos[sigma[order[p]]] for p in range(d)) for sigma in autos
                )
                out[bits] = (canon, conj)
    return tuple(v for _, v in sorted(out.items()))


def enumerate_connected_simple(d):
    """All connected simple graphs of order d up to isomorphism, canonically
    labeled and sorted by canonical key.  Supported for 2 <= d <= 8."""
    if not 2 <= d <= 8:
        raise GraphError(f"enumeration supports 2 <= d <= 8, got d={d}")
    out = []
    for masks, _ in _connected_level(d):
        edges = [(i + 1, j + 1) for i in range(d) for j in range(i + 1, d) if (masks[i] >> j) & 1]
        out.append(Graph.from_edges(d, edges))
    return out


# ---------------------------------------------------------------------------
# text format: d=<n>;E=<i-j,...>;L=<i,...>


def format_graph_line(g) -> str:
    es = ",".join(f"{i}-{j}" for i, j in sorted(g.edges))
    ls = ",".join(str(v) for v in sorted(g.loops))
    return f"d={g.d};E={es};L={ls}"


def parse_graph_line(line, lineno=1) -> Graph:
    def fail(msg):
        raise GraphFormatError(f"line {lineno}: {msg}")

    parts = line.strip().split(";")
    if len(parts) != 3:
        fail(f"expected 3 ';'-separated fields, got {len(parts)}")
    head, es, ls = parts
    if not head.startswith("d="):
        fail("first field must be d=<order>")
    try:
        d = int(head[2:])
    except ValueError:
        fail(f"bad order {head[2:]!r}")
    if not es.startswith("E="):
        fail("second field must be E=<i-j,...>")
    edges = []
    body = es[2:]
    if body:
        for tok in body.split(","):
            pair = tok.split("-")
            if len(pair) != 2:
                fail(f"bad edge token {tok!r}")
            try:
                i, j = int(pair[0]), int(pair[1])
            except ValueError:
                fail(f"bad edge token {tok!r}")
            edges.append((i, j))
    if not ls.startswith("L="):
        fail("third field must be L=<i,...>")
    loops = []
    body = ls[2:]
    if body:
        for tok in body.split(","):
            try:
                loops.append(int(tok))
            except ValueError:
                fail(f"bad loop token {tok!r}")
    try:
        return Graph.from_edges(d, edges, loops)
    except GraphError as e:
        fail(str(e))


def read_graph_file(path):
    graphs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            graphs.append(parse_graph_line(line, lineno))
    return graphs


def write_graph_file(path, graphs):
    with open(path, "w", encoding="utf-8") as fh:
        for g in graphs:
            fh.write(format_graph_line(g) + "\n")
