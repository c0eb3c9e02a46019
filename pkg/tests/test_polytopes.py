from fractions import Fraction

import pytest

from ehrhart_roots.graphs import (
    Graph,
    GraphError,
    Partition,
    beta_family,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    enumerate_connected_simple,
    gamma_family,
    loop_edge_closure,
    path_graph,
    star_graph,
)
from ehrhart_roots.polytopes import (
    Dilation,
    LatticePolytope,
    PolytopeError,
    _count_generic,
    affine_dimension,
    contains,
    count_lattice_points,
    edge_polytope,
    symmetric_edge_polytope,
)


def test_vertex_normalization():
    p = LatticePolytope([(1, 0), (0, 1), (1, 0)])
    assert p.vertices == ((0, 1), (1, 0))
    assert p.d == 2
    with pytest.raises(PolytopeError):
        LatticePolytope([])
    with pytest.raises(PolytopeError):
        LatticePolytope([(1, 0), (1, 0, 0)])


def test_edge_polytope_vertices():
    p = edge_polytope(complete_graph(3))
    assert p.vertices == ((0, 1, 1), (1, 0, 1), (1, 1, 0))
    assert p.verify_vertices()


def test_edge_polytope_with_loops():
    g = loop_edge_closure(Graph.from_edges(2, [(1, 2)], loops=[1, 2]))
    p = edge_polytope(g)
    # the 1-2 edge point is the midpoint of the two loop vertices
    assert p.vertices == ((0, 2), (2, 0))
    with pytest.raises(GraphError):
        edge_polytope(Graph.from_edges(3, [], loops=[1, 2]))  # loop pair not adjacent
    with pytest.raises(GraphError):
        edge_polytope(Graph.from_edges(2, []))


def test_symmetric_edge_polytope_vertices():
    p = symmetric_edge_polytope(path_graph(2))
    assert p.vertices == ((-1, 1), (1, -1))
    with pytest.raises(GraphError):
        symmetric_edge_polytope(gamma_family(3, 2))


@pytest.mark.parametrize(
    "g,expect",
    [
        (complete_graph(3), 2),  # odd cycle: not bipartite
        (cycle_graph(5), 4),
        (cycle_graph(6), 4),  # bipartite: d-2
        (path_graph(5), 3),
        (complete_multipartite(Partition.of(3, 2)), 3),
        (complete_graph(4), 3),
    ],
)
def test_edge_polytope_dimension(g, expect):
    assert edge_polytope(g).dim == expect


def test_symmetric_polytope_dimension(corpus5):
    for g in corpus5:
        assert symmetric_edge_polytope(g).dim == g.d - 1


def test_affine_dimension_degenerate():
    assert affine_dimension(LatticePolytope([(3, 1)])) == 0
    assert affine_dimension(LatticePolytope([(0, 0), (1, 1), (2, 2)])) == 1


def test_contains_triangle():
    p = edge_polytope(complete_graph(3))
    d1 = Dilation(p, 1)
    assert contains(d1, (1, 1, 0))
    assert contains(d1, (Fraction(2, 3), Fraction(2, 3), Fraction(2, 3)))  # barycenter
    assert not contains(d1, (1, 1, 1))
    assert not contains(d1, (2, 0, 0))
    d2 = Dilation(p, 2)
    assert contains(d2, (1, 1, 2))
    assert not contains(d2, (3, 1, 0))
    assert contains(Dilation(p, 0), (0, 0, 0))
    assert not contains(Dilation(p, 0), (1, 0, 0))
    with pytest.raises(PolytopeError):
        Dilation(p, -1)


def test_contains_symmetric_origin():
    for g in (path_graph(3), cycle_graph(4), complete_graph(4)):
        p = symmetric_edge_polytope(g)
        assert contains(Dilation(p, 1), (0,) * g.d)


def test_count_examples():
    # triangle: 3 vertices at m=1; square C_4 in dimension 4
    k3 = edge_polytope(complete_graph(3))
    assert [count_lattice_points(k3, m) for m in range(4)] == [1, 3, 6, 10]
    c4 = edge_polytope(cycle_graph(4))
    assert count_lattice_points(c4, 1) == 4
    sym = symmetric_edge_polytope(path_graph(2))
    assert [count_lattice_points(sym, m) for m in range(4)] == [1, 3, 5, 7]


def test_count_matches_generic_lp(corpus5):
    # the vectorized counters must agree with the exact-LP membership count
    for g in corpus5:
        if g.d > 4:
            continue
        for kind, build in (("edge", edge_polytope), ("symmetric", symmetric_edge_polytope)):
            p = build(g)
            for m in range(4):
                assert count_lattice_points(p, m) == _count_generic(p, m), (g, kind, m)


def test_count_matches_generic_lp_loops():
    for g in (gamma_family(4, 2), gamma_family(4, 3), beta_family(1, 1), beta_family(2, 1)):
        p = edge_polytope(g)
        for m in range(4):
            assert count_lattice_points(p, m) == _count_generic(p, m), (g, m)


def test_count_disconnected_graph():
    # two disjoint edges: product of two segments
    g = Graph.from_edges(4, [(1, 2), (3, 4)])
    p = edge_polytope(g)
    for m in range(4):
        assert count_lattice_points(p, m) == _count_generic(p, m)


def test_count_at_zero_is_one(corpus5):
    for g in corpus5[:10]:
        assert count_lattice_points(edge_polytope(g), 0) == 1


def test_vertices_are_extreme(corpus5):
    for g in corpus5:
        assert edge_polytope(g).verify_vertices()
        assert symmetric_edge_polytope(g).verify_vertices()


def test_star_polytope_is_simplex():
    # star edge vectors are linearly independent: a (d-2)-simplex
    p = edge_polytope(star_graph(5))
    assert len(p.vertices) == 4
    assert p.dim == 3
