"""Lattice polytopes given by their vertices, with exact membership tests
and lattice-point counts of integer dilations.

Two graph constructions are provided: the edge polytope (convex hull of the
columns of the vertex-edge incidence matrix, a loop at i contributing 2e_i)
and the symmetric edge polytope (hull of +-(e_i - e_j) over the edges).
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import GraphError, is_connected, loop_pairs_closed

__all__ = [
    "LatticePolytope",
    "Dilation",
    "PolytopeError",
    "edge_polytope",
    "symmetric_edge_polytope",
    "affine_dimension",
    "contains",
    "count_lattice_points",
]


class PolytopeError(ValueError):
    """Invalid polytope construction or query."""


class LatticePolytope:
    """Convex hull of finitely many integer points, stored as sorted vertex
    tuples.  `kind` tags the graph constructions so counting can pick a
    specialized routine; `graph` keeps the source graph for those."""

    __slots__ = ("d", "vertices", "kind", "graph", "_dim", "_symcache")

    def __init__(self, vertices, kind=None, graph=None):
        vs = sorted({tuple(int(c) for c in v) for v in vertices})
        if not vs:
            raise PolytopeError("a polytope needs at least one vertex")
        d = len(vs[0])
        if any(len(v) != d for v in vs):
            raise PolytopeError("vertices live in different ambient dimensions")
        self.d = d
        self.vertices = tuple(vs)
        self.kind = kind
        self.graph = graph
        self._dim = None
        self._symcache = None

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.d == other.d and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.d, self.vertices))

    def __repr__(self):
        return f"LatticePolytope(d={self.d}, n_vertices={len(self.vertices)}, kind={self.kind!r})"

    @property
    def dim(self) -> int:
        if self._dim is None:
            self._dim = affine_dimension(self)
        return self._dim

    def verify_vertices(self) -> bool:
        """Check each listed point is not in the hull of the others."""
        for i, v in enumerate(self.vertices):
            others = [w for j, w in enumerate(self.vertices) if j != i]
            if not others:
                continue
            if _in_hull(others, v, Fraction(1)):
                return False
        return True


def edge_polytope(g) -> LatticePolytope:
    """Edge polytope of g: hull of e_i + e_j over edges and 2e_i over loops.

    When loops are present every looped pair must already be adjacent (apply
    loop_edge_closure first); an edge between two looped vertices is then the
    midpoint of their loop vertices and is dropped from the vertex list.
    """
    if not g.edges and not g.loops:
        raise GraphError("edge polytope needs at least one edge or loop")
    if g.loops and not loop_pairs_closed(g):
        raise GraphError("looped vertices must pairwise share an edge; apply loop_edge_closure first")
    verts = []
    for v in sorted(g.loops):
        e = [0] * g.d
        e[v - 1] = 2
        verts.append(tuple(e))
    for i, j in sorted(g.edges):
        if i in g.loops and j in g.loops:
            continue
        e = [0] * g.d
        e[i - 1] = 1
        e[j - 1] = 1
        verts.append(tuple(e))
    return LatticePolytope(verts, kind="edge", graph=g)


def symmetric_edge_polytope(g) -> LatticePolytope:
    """Symmetric edge polytope of g: hull of +-(e_i - e_j) over the edges."""
    if not g.simple:
        raise GraphError("symmetric edge polytope is defined for simple graphs")
    if not g.edges:
        raise GraphError("symmetric edge polytope needs at least one edge")
    verts = []
    for i, j in sorted(g.edges):
        e = [0] * g.d
        e[i - 1] = 1
        e[j - 1] = -1
        verts.append(tuple(e))
        verts.append(tuple(-c for c in e))
    return LatticePolytope(verts, kind="symmetric", graph=g)


def affine_dimension(p) -> int:
    """Dimension of the affine hull, as the exact rank of vertex differences."""
    v0 = p.vertices[0]
    rows = [[Fraction(c - a) for c, a in zip(v, v0)] for v in p.vertices[1:]]
    rank = 0
    for col in range(p.d):
        if rank == len(rows):
            break
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / pv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class Dilation:
    """The m-fold dilation mP of a lattice polytope."""

    base: LatticePolytope
    m: int

    def __post_init__(self):
        if self.m < 0:
            raise PolytopeError(f"dilation factor must be >= 0, got {self.m}")


def _lp_feasible(columns, rhs):
    """Whether A c = b admits c >= 0, decided exactly.

    Phase-1 simplex over Fraction with Bland's rule; columns are the columns
    of A, rhs is b.
    """
    m = len(rhs)
    n = len(columns)
    rows = []
    for i in range(m):
        row = [Fraction(col[i]) for col in columns]
        b = Fraction(rhs[i])
        if b < 0:
            row = [-a for a in row]
            b = -b
        row.append(b)
        rows.append(row)
    # reduced costs for min sum of artificials with the artificial basis
    z = [sum(rows[i][j] for i in range(m)) for j in range(n + 1)]
    basis = [n + i for i in range(m)]  # artificial indices
    while True:
        enter = next((j for j in range(n) if z[j] > 0), None)
        if enter is None:
            return z[n] == 0
        ratio = None
        leave = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                r = rows[i][n] / a
                if ratio is None or r < ratio or (r == ratio and basis[i] < basis[leave]):
                    ratio = r
                    leave = i
        if leave is None:
            raise PolytopeError("phase-1 search became unbounded; inconsistent tableau")
        pv = rows[leave][enter]
        rows[leave] = [a / pv for a in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[leave])]
        f = z[enter]
        z = [a - f * b for a, b in zip(z, rows[leave])]
        basis[leave] = enter


def _in_hull(points, x, total):
    """Exactly decide whether x is a convex combination with coefficient sum
    `total` of the given points (total=m tests membership in the m-th
    dilation)."""
    columns = [tuple(pt) + (1,) for pt in points]
    rhs = tuple(x) + (total,)
    return _lp_feasible(columns, rhs)


def contains(dilation, x) -> bool:
    """Exact membership of the integer point x in the dilation m*base."""
    p = dilation.base
    m = dilation.m
    if len(x) != p.d:
        raise PolytopeError(f"point has {len(x)} coordinates, polytope is in dimension {p.d}")
    if m == 0:
        return all(c == 0 for c in x)
    if p.kind == "edge":
        if any(c < 0 for c in x) or sum(x) != 2 * m:
            return False
    if p.kind == "symmetric":
        if sum(x) != 0 or sum(abs(c) for c in x) > 2 * m:
            return False
    return _in_hull(p.vertices, x, Fraction(m))


# ---------------------------------------------------------------------------
# lattice-point counting


@functools.lru_cache(maxsize=64)
def _compositions(total, d):
    """All ways to write `total` as d ordered nonnegative parts, as an array."""
    if d == 1:
        return np.array([[total]], dtype=np.int32)
    bars = np.array(
        list(itertools.combinations(range(total + d - 1), d - 1)), dtype=np.int32
    )
    n = bars.shape[0]
    full = np.empty((n, d + 1), dtype=np.int32)
    full[:, 0] = -1
    full[:, 1:d] = bars
    full[:, d] = total + d - 1
    return np.diff(full, axis=1) - 1


@functools.lru_cache(maxsize=4096)
def _stable_ineq_matrix(g):
    """Rows chi_N(S) - chi_S over nonempty loop-free stable sets S.

    A nonnegative x with fixed coordinate sum lies in the cone spanned by the
    edge polytope's vertex rays exactly when x(S) <= x(N(S)) holds for every
    such S (checked against exact LP membership in the tests).
    """
    d = g.d
    masks = [0] * d
    for i, j in g.edges:
        masks[i - 1] |= 1 << (j - 1)
        masks[j - 1] |= 1 << (i - 1)
    loopmask = 0
    for v in g.loops:
        loopmask |= 1 << (v - 1)
    rows = []
    for s in range(1, 1 << d):
        if s & loopmask:
            continue
        nb = 0
        ok = True
        t = s
        while t:
            v = (t & -t).bit_length() - 1
            if masks[v] & s:
                ok = False
                break
            nb |= masks[v]
            t &= t - 1
        if not ok:
            continue
        row = [0] * d
        for v in range(d):
            if (s >> v) & 1:
                row[v] = -1
            elif (nb >> v) & 1:
                row[v] = 1
        rows.append(row)
    if not rows:
        return np.zeros((0, d), dtype=np.int32)
    return np.array(rows, dtype=np.int32)


def _count_edge_fast(g, m) -> int:
    W = _stable_ineq_matrix(g)
    X = _compositions(2 * m, g.d)
    if W.shape[0] == 0:
        return X.shape[0]
    ok = (X @ W.T >= 0).all(axis=1)
    return int(ok.sum())


def _count_symmetric_fast(p, m) -> int:
    """Lattice points of m-fold dilations via repeated 0/generator sumsets.

    The incidence structure is totally unimodular, so every lattice point of
    the m-th dilation is a sum of at most m vertex generators; levels are
    cached on the polytope with coordinates packed into int64 words.
    """
    cache = p._symcache
    if cache is None or m > cache["cap"]:
        cap = max(m, 4, 0 if cache is None else 2 * cache["cap"])
        bits = (2 * cap + 3).bit_length()
        if p.d * bits > 62:
            cap = m
            bits = (2 * cap + 3).bit_length()
        if p.d * bits > 62:
            return _count_generic(p, m)
        shifts = [bits * k for k in range(p.d)]
        deltas = []
        for v in p.vertices:
            acc = 0
            for k, c in enumerate(v):
                acc += c << shifts[k]
            deltas.append(acc)
        origin = sum((cap + 1) << s for s in shifts)
        cache = {
            "cap": cap,
            "deltas": np.array(sorted(set(deltas)), dtype=np.int64),
            "levels": [np.array([origin], dtype=np.int64)],
        }
        p._symcache = cache
    levels = cache["levels"]
    deltas = cache["deltas"]
    while len(levels) <= m:
        cur = levels[-1]
        nxt = np.unique(np.concatenate([cur, (cur[:, None] + deltas[None, :]).ravel()]))
        levels.append(nxt)
    return int(levels[m].shape[0])


def _count_generic(p, m) -> int:
    """Box scan with exact membership tests; for small hand-made polytopes."""
    los = [m * min(v[k] for v in p.vertices) for k in range(p.d)]
    his = [m * max(v[k] for v in p.vertices) for k in range(p.d)]
    cells = math.prod(h - l + 1 for l, h in zip(los, his))
    if cells > 2_000_000:
        raise PolytopeError(f"generic counting box of {cells} cells is too large")
    dil = Dilation(p, m)
    count = 0
    for x in itertools.product(*(range(l, h + 1) for l, h in zip(los, his))):
        if contains(dil, x):
            count += 1
    return count


def count_lattice_points(p, m) -> int:
    """Number of integer points in the m-fold dilation of p."""
    if m < 0:
        raise PolytopeError(f"dilation factor must be >= 0, got {m}")
    if m == 0:
        return 1
    if p.kind == "edge" and p.graph is not None:
        return _count_edge_fast(p.graph, m)
    if p.kind == "symmetric" and p.graph is not None and p.d * ((2 * m + 3).bit_length()) <= 62:
        return _count_symmetric_fast(p, m)
    return _count_generic(p, m)
