"""Exact Ehrhart polynomials: interpolation from lattice-point counts,
closed forms for complete multipartite graphs and the looped families, delta
vectors, and the Gorenstein symmetry test.

Polynomials are in the dilation variable m with Fraction coefficients,
constant term first.  Binomial coefficients binom(m+a, b) are understood as
polynomials (m+a)(m+a-1)...(m+a-b+1)/b!, valid at negative arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graphs import GraphError, Partition
from .polytopes import affine_dimension, count_lattice_points, edge_polytope, symmetric_edge_polytope

__all__ = [
    "RationalPolynomial",
    "DeltaVector",
    "EhrhartError",
    "binomial_poly",
    "interpolate",
    "ehrhart_complete",
    "p_func",
    "f_func",
    "ehrhart_multipartite",
    "ehrhart_eq_sum",
    "ehrhart_alpha",
    "ehrhart_beta",
    "ehrhart_gamma",
    "g_func",
    "delta_vector",
    "ehrhart_from_delta",
    "is_gorenstein",
    "symmetric_tree_ehrhart",
    "symmetric_complete_ehrhart",
    "symmetric_bipartite2_ehrhart",
    "ehrhart_bruteforce",
    "counts_consistent",
]


class EhrhartError(ValueError):
    """Invalid polynomial or count data."""


@dataclass(frozen=True)
class RationalPolynomial:
    """Polynomial with Fraction coefficients, constant term first, trailing
    zeros trimmed."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coeffs)
        while len(cs) > 1 and cs[-1] == 0:
            cs = cs[:-1]
        if not cs:
            cs = (Fraction(0),)
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (Fraction(0),)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (int, Fraction)) else complex(c))
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return RationalPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(tuple(out))

    def __rmul__(self, other):
        return self.__mul__(other)

    def derivative(self):
        if self.degree == 0:
            return RationalPolynomial((Fraction(0),))
        return RationalPolynomial(tuple(c * i for i, c in enumerate(self.coeffs) if i > 0))

    def reversed_negated(self):
        """The polynomial m -> p(-m-1)."""
        out = RationalPolynomial((Fraction(0),))
        arg = RationalPolynomial((Fraction(-1), Fraction(-1)))
        power = RationalPolynomial((Fraction(1),))
        for c in self.coeffs:
            out = out + power * c
            power = power * arg
        return out

    def to_strings(self):
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    @classmethod
    def from_strings(cls, strings):
        return cls(tuple(Fraction(s) for s in strings))


def _as_poly(x):
    if isinstance(x, RationalPolynomial):
        return x
    return RationalPolynomial((Fraction(x),))


_M = RationalPolynomial((Fraction(0), Fraction(1)))


def binomial_poly(shift, bottom, scale=1) -> RationalPolynomial:
    """binom(scale*m + shift, bottom) as a polynomial in m."""
    if bottom < 0:
        raise EhrhartError(f"binomial bottom must be >= 0, got {bottom}")
    out = RationalPolynomial((Fraction(1),))
    arg = RationalPolynomial((Fraction(shift), Fraction(scale)))
    for i in range(bottom):
        out = out * (arg - i)
    return out * Fraction(1, math.factorial(bottom))


def interpolate(counts, D) -> RationalPolynomial:
    """Degree-D polynomial through the values counts[m] at m = 0..D, via
    Newton forward differences; counts[0] must be 1."""
    if len(counts) != D + 1:
        raise EhrhartError(f"need {D + 1} counts for degree {D}, got {len(counts)}")
    if counts[0] != 1:
        raise EhrhartError(f"count at dilation 0 must be 1, got {counts[0]}")
    diffs = [Fraction(c) for c in counts]
    poly = RationalPolynomial((Fraction(0),))
    basis = RationalPolynomial((Fraction(1),))
    for j in range(D + 1):
        poly = poly + basis * diffs[0]
        diffs = [(diffs[i + 1] - diffs[i]) / (j + 1) for i in range(len(diffs) - 1)]
        basis = basis * (_M - j)
    return poly


# ---------------------------------------------------------------------------
# closed forms for edge polytopes


def ehrhart_complete(d) -> RationalPolynomial:
    """Ehrhart polynomial of the edge polytope of the complete graph K_d."""
    if d < 2:
        raise GraphError(f"complete-graph closed form needs d >= 2, got {d}")
    return binomial_poly(d - 1, d - 1, scale=2) - d * binomial_poly(d - 2, d - 1)


def p_func(d, j) -> RationalPolynomial:
    """binom(j+m-1, j-1) * binom(d-j+m-1, d-j)."""
    if not 1 <= j <= d:
        raise EhrhartError(f"p needs 1 <= j <= d, got j={j}, d={d}")
    return binomial_poly(j - 1, j - 1) * binomial_poly(d - j - 1, d - j)


def f_func(d, j) -> RationalPolynomial:
    """Partial sum p(m; d, 1) + ... + p(m; d, j)."""
    if not 1 <= j <= d:
        raise EhrhartError(f"f needs 1 <= j <= d, got j={j}, d={d}")
    out = RationalPolynomial((Fraction(0),))
    for k in range(1, j + 1):
        out = out + p_func(d, k)
    return out


def ehrhart_multipartite(partition) -> RationalPolynomial:
    """Ehrhart polynomial of the edge polytope of a complete multipartite
    graph, as f(m; d, d) minus the sum of f(m; d, q_k) over the parts."""
    if not isinstance(partition, Partition):
        partition = Partition(tuple(partition))
    if len(partition) < 2:
        raise GraphError("complete multipartite closed form needs at least two parts")
    d = partition.d
    out = f_func(d, d)
    for q in partition:
        out = out - f_func(d, q)
    return out


def ehrhart_eq_sum(partition) -> RationalPolynomial:
    """Same Ehrhart polynomial via the double-sum form: binom(d+2m-1, d-1)
    minus sum over parts of sum_{1<=i<=j<=q_k} binom(j-i+m-1, j-i) *
    binom(d-j+m-1, d-j)."""
    if not isinstance(partition, Partition):
        partition = Partition(tuple(partition))
    if len(partition) < 2:
        raise GraphError("complete multipartite closed form needs at least two parts")
    d = partition.d
    out = binomial_poly(d - 1, d - 1, scale=2)
    for q in partition:
        for i in range(1, q + 1):
            for j in range(i, q + 1):
                out = out - binomial_poly(j - i - 1, j - i) * binomial_poly(d - j - 1, d - j)
    return out


def ehrhart_alpha(p, q) -> RationalPolynomial:
    """Complete bipartite case: binom(m+p-1, p-1) * binom(m+q-1, q-1)."""
    if p < 1 or q < 1:
        raise EhrhartError(f"need p, q >= 1, got p={p}, q={q}")
    return binomial_poly(p - 1, p - 1) * binomial_poly(q - 1, q - 1)


def ehrhart_beta(p, q) -> RationalPolynomial:
    """Complete bipartite plus one looped vertex joined to everything:
    binom(p+m, p) * binom(q+m, q)."""
    if p < 1 or q < 1:
        raise EhrhartError(f"need p, q >= 1, got p={p}, q={q}")
    return binomial_poly(p, p) * binomial_poly(q, q)


def ehrhart_gamma(d, p) -> RationalPolynomial:
    """Looped clique 1..p joined to an independent set p+1..d:
    sum_{j=1}^{p} binom(j+m-2, j-1) * binom(d-j+m, d-j)."""
    if not 2 <= p < d:
        raise EhrhartError(f"gamma closed form needs 2 <= p < d, got p={p}, d={d}")
    out = RationalPolynomial((Fraction(0),))
    for j in range(1, p + 1):
        out = out + binomial_poly(j - 2, j - 1) * binomial_poly(d - j, d - j)
    return out


def g_func(d, p, k) -> Fraction:
    """The gamma polynomial divided by binom(d-p+m, d-p), evaluated at k.

    The quotient is itself a polynomial of degree p-1: every summand of the
    gamma form carries the factor (m+1)...(m+d-p), so the division is exact
    and the value is defined at every integer, including -1..-(d-p) where
    numerator and denominator both vanish.
    """
    if not 2 <= p < d:
        raise EhrhartError(f"g needs 2 <= p < d, got p={p}, d={d}")
    total = Fraction(0)
    for j in range(1, p + 1):
        head = binomial_poly(j - 2, j - 1)(Fraction(k))
        tail = Fraction(math.factorial(d - p), math.factorial(d - j))
        for i in range(d - p + 1, d - j + 1):
            tail *= k + i
        total += head * tail
    return total


# ---------------------------------------------------------------------------
# delta vectors


@dataclass(frozen=True)
class DeltaVector:
    """Numerator coefficients delta_0..delta_D of the Ehrhart series
    sum_m i(m) t^m = (sum_j delta_j t^j) / (1-t)^(D+1)."""

    entries: tuple

    def __post_init__(self):
        if not self.entries:
            raise EhrhartError("empty delta vector")
        if self.entries[0] != 1:
            raise EhrhartError(f"delta_0 must be 1, got {self.entries[0]}")

    @property
    def D(self) -> int:
        return len(self.entries) - 1

    @property
    def is_symmetric(self) -> bool:
        return self.entries == self.entries[::-1]

    @property
    def nonnegative(self) -> bool:
        return all(e >= 0 for e in self.entries)

    @property
    def normalized_volume(self) -> int:
        return sum(self.entries)


def delta_vector(poly) -> DeltaVector:
    """Delta vector of a degree-D integer-valued polynomial with value 1 at 0:
    delta_j = sum_{k=0}^{j} (-1)^k binom(D+1, k) poly(j-k)."""
    D = poly.degree
    if poly(0) != 1:
        raise EhrhartError(f"polynomial value at 0 must be 1, got {poly(0)}")
    entries = []
    for j in range(D + 1):
        v = Fraction(0)
        for k in range(j + 1):
            v += (-1) ** k * math.comb(D + 1, k) * poly(j - k)
        if v.denominator != 1:
            raise EhrhartError(f"delta_{j} = {v} is not an integer; input is not a lattice count polynomial")
        entries.append(int(v))
    return DeltaVector(tuple(entries))


def ehrhart_from_delta(delta) -> RationalPolynomial:
    """Polynomial with the given delta vector: sum_j delta_j binom(m+D-j, D)."""
    D = delta.D
    out = RationalPolynomial((Fraction(0),))
    for j, dj in enumerate(delta.entries):
        out = out + binomial_poly(D - j, D) * dj
    return out


def is_gorenstein(poly) -> bool:
    """Whether the count polynomial satisfies p(m) = (-1)^D p(-m-1), i.e. its
    delta vector is palindromic."""
    D = poly.degree
    flipped = poly.reversed_negated()
    if D % 2 == 1:
        flipped = -flipped
    return flipped == poly


# ---------------------------------------------------------------------------
# closed forms for symmetric edge polytopes


def symmetric_tree_ehrhart(d) -> RationalPolynomial:
    """Any tree on d vertices: delta_i = binom(d-1, i) (the polytope is a
    unimodular image of the cross-polytope)."""
    if d < 2:
        raise EhrhartError(f"need d >= 2, got {d}")
    return ehrhart_from_delta(DeltaVector(tuple(math.comb(d - 1, i) for i in range(d))))


def symmetric_complete_ehrhart(d) -> RationalPolynomial:
    """Complete graph K_d: delta_i = binom(d-1, i)^2."""
    if d < 2:
        raise EhrhartError(f"need d >= 2, got {d}")
    return ehrhart_from_delta(DeltaVector(tuple(math.comb(d - 1, i) ** 2 for i in range(d))))


def symmetric_bipartite2_ehrhart(d) -> RationalPolynomial:
    """Complete bipartite graph K_{2,d-2}: delta polynomial
    (1+t)^(d-3) (1 + 2(d-2)t + t^2)."""
    if d < 4:
        raise EhrhartError(f"need d >= 4, got {d}")
    base = [math.comb(d - 3, i) for i in range(d - 2)]
    quad = [1, 2 * (d - 2), 1]
    entries = [0] * d
    for i, b in enumerate(base):
        for j, q in enumerate(quad):
            entries[i + j] += b * q
    return ehrhart_from_delta(DeltaVector(tuple(entries)))


# ---------------------------------------------------------------------------
# counting route


def ehrhart_bruteforce(g, kind="edge") -> RationalPolynomial:
    """Ehrhart polynomial from lattice-point counts of the first dim+1
    dilations of the chosen polytope of g."""
    if kind == "edge":
        p = edge_polytope(g)
    elif kind == "symmetric":
        p = symmetric_edge_polytope(g)
    else:
        raise EhrhartError(f"unknown polytope kind {kind!r}")
    D = affine_dimension(p)
    counts = [count_lattice_points(p, m) for m in range(D + 1)]
    return interpolate(counts, D)


def counts_consistent(g, poly, kind="edge", extra=2) -> bool:
    """Check poly against freshly counted dilations D+1..D+extra."""
    p = edge_polytope(g) if kind == "edge" else symmetric_edge_polytope(g)
    D = poly.degree
    for m in range(D + 1, D + extra + 1):
        if poly(m) != count_lattice_points(p, m):
            return False
    return True
