"""Lattice polytopes built from finite graphs, their Ehrhart polynomials,
delta vectors, and the distribution of Ehrhart roots in the complex plane."""

__version__ = "0.1.0"

from .graphs import (
    CanonicalKey,
    Graph,
    GraphError,
    GraphFormatError,
    Partition,
    beta_family,
    biconnected_components,
    canonical_key,
    complete_graph,
    complete_multipartite,
    components,
    cycle_graph,
    enumerate_connected_simple,
    gamma_family,
    is_connected,
    loop_edge_closure,
    path_graph,
    unimodular_equivalent,
)
from .polytopes import (
    Dilation,
    LatticePolytope,
    affine_dimension,
    contains,
    count_lattice_points,
    edge_polytope,
    symmetric_edge_polytope,
)
from .ehrhart import (
    DeltaVector,
    RationalPolynomial,
    delta_vector,
    ehrhart_alpha,
    ehrhart_beta,
    ehrhart_bruteforce,
    ehrhart_complete,
    ehrhart_eq_sum,
    ehrhart_gamma,
    ehrhart_multipartite,
    f_func,
    g_func,
    interpolate,
    is_gorenstein,
    p_func,
)
from .roots import (
    ConjectureReport,
    Root,
    RootSet,
    Verdict,
    check_circle,
    check_halfinteger_floor,
    check_interlacing,
    check_narrow_strip,
    check_stability,
    check_strip,
    complex_roots,
    deviation_from_half_line,
    integer_roots,
)
