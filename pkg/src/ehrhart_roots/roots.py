"""Roots of exact rational polynomials and the location checks applied to
Ehrhart polynomials: the degree strip, negative-half-plane stability, the
circle-or-negative-integer region, the Gorenstein half-width strip, and the
real-root laddering of the looped-clique family.

Integer and rational roots are split off exactly; what remains is solved
numerically by simultaneous (Aberth) iteration at extended precision, and
every numeric root is certified by its residual.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
import numpy as np

from .ehrhart import RationalPolynomial

__all__ = [
    "Root",
    "RootSet",
    "Verdict",
    "ConjectureReport",
    "RootFindingError",
    "DEFAULT_TOL",
    "integer_roots",
    "complex_roots",
    "check_strip",
    "check_stability",
    "check_circle",
    "check_narrow_strip",
    "deviation_from_half_line",
    "check_interlacing",
    "check_halfinteger_floor",
]

DEFAULT_TOL = 1e-7
_RESIDUAL_FACTOR = 1e-10
_DPS = 45


class RootFindingError(RuntimeError):
    """Numeric root search failed to converge; carries partial values."""

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = tuple(partial)


@dataclass(frozen=True)
class Root:
    """One root: exact rational value or certified numeric approximation."""

    re: float
    im: float
    multiplicity: int = 1
    exact: Fraction | None = None
    residual: float = 0.0

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class RootSet:
    """All roots of a polynomial, multiplicities summing to the degree."""

    degree: int
    roots: tuple

    def __iter__(self):
        return iter(self.roots)

    def values(self):
        """Roots repeated by multiplicity."""
        out = []
        for r in self.roots:
            out.extend([r.value] * r.multiplicity)
        return out

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.roots), default=0.0)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one location check: pass/fail/n-a with the worst offender."""

    status: str
    worst: complex | None = None
    margin: float | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass(frozen=True)
class ConjectureReport:
    """Per-graph bundle of check verdicts."""

    graph_key: str
    kind: str
    degree: int
    verdicts: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# exact deflation


def _clear_denominators(poly):
    """Integer coefficient list (constant first) proportional to poly."""
    lcm = 1
    for c in poly.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return [int(c * lcm) for c in poly.coeffs]


def _deflate(coeffs, root):
    """Divide the Fraction coefficient list by (m - root); exact, remainder
    must be zero."""
    n = len(coeffs) - 1
    b = [Fraction(0)] * n
    b[n - 1] = coeffs[n]
    for i in range(n - 2, -1, -1):
        b[i] = coeffs[i + 1] + root * b[i + 1]
    rem = coeffs[0] + root * b[0]
    if rem != 0:
        raise ValueError(f"{root} is not a root (remainder {rem})")
    return b


def _divisors(n):
    n = abs(n)
    out = set()
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
    return sorted(out)


def _float_near_zero(coeffs, x):
    """Loose float screen for p(x) = 0; never rejects a true rational root."""
    acc = 0.0
    scale = 0.0
    ax = abs(x)
    for c in reversed(coeffs):
        fc = float(c)
        acc = acc * x + fc
        scale = scale * ax + abs(fc)
    return abs(acc) <= 1e-6 * max(scale, 1e-300)


def integer_roots(poly):
    """Exact integer roots with multiplicities, sorted ascending."""
    if poly.is_zero:
        raise ValueError("zero polynomial")
    coeffs = [Fraction(c) for c in poly.coeffs]
    found = {}
    while len(coeffs) > 1 and coeffs[0] == 0:
        found[0] = found.get(0, 0) + 1
        coeffs = coeffs[1:]
    if len(coeffs) > 1:
        ints = _clear_denominators(RationalPolynomial(tuple(coeffs)))
        bound = 1 + max(abs(c) for c in ints[:-1]) / abs(ints[-1])
        for cand in _divisors(ints[0]):
            if cand > bound or len(coeffs) == 1:
                break
            for r in (cand, -cand):
                if not _float_near_zero(coeffs, float(r)):
                    continue
                while len(coeffs) > 1:
                    try:
                        coeffs = _deflate(coeffs, Fraction(r))
                    except ValueError:
                        break
                    found[r] = found.get(r, 0) + 1
    return sorted(found.items())


def _rational_roots(coeffs):
    """Exact rational roots of a Fraction coefficient list (zero and integer
    roots included), plus the fully deflated remainder list."""
    found = {}
    while len(coeffs) > 1 and coeffs[0] == 0:
        found[Fraction(0)] = found.get(Fraction(0), 0) + 1
        coeffs = coeffs[1:]
    if len(coeffs) == 1:
        return found, coeffs
    ints = _clear_denominators(RationalPolynomial(tuple(coeffs)))
    bound = Fraction(1) + Fraction(max(abs(c) for c in ints[:-1]), abs(ints[-1]))
    for q in _divisors(ints[-1]):
        for p in _divisors(ints[0]):
            if Fraction(p, q) > bound:
                break
            if math.gcd(p, q) != 1:
                continue
            for r in (Fraction(p, q), Fraction(-p, q)):
                if len(coeffs) == 1 or not _float_near_zero(coeffs, float(r)):
                    continue
                while len(coeffs) > 1:
                    try:
                        coeffs = _deflate(coeffs, r)
                    except ValueError:
                        break
                    found[r] = found.get(r, 0) + 1
    return found, coeffs


def _poly_mod(a, b):
    """Remainder of a divided by b over Fraction coefficients."""
    r = list(a.coeffs)
    while len(r) >= len(b.coeffs) and not (len(r) == 1 and r[0] == 0):
        f = r[-1] / b.coeffs[-1]
        shift = len(r) - len(b.coeffs)
        for i, c in enumerate(b.coeffs):
            r[shift + i] -= f * c
        r.pop()
        while len(r) > 1 and r[-1] == 0:
            r.pop()
    return RationalPolynomial(tuple(r))


def _poly_gcd(a, b):
    """Monic gcd of two polynomials, at least one nonzero."""
    while not b.is_zero:
        a, b = b, _poly_mod(a, b)
    return a * (Fraction(1) / a.coeffs[-1])


def _poly_div_exact(a, b):
    """Exact polynomial quotient a/b; raises when the remainder is nonzero."""
    r = list(a.coeffs)
    q = [Fraction(0)] * max(1, len(r) - len(b.coeffs) + 1)
    while len(r) >= len(b.coeffs) and not (len(r) == 1 and r[0] == 0):
        f = r[-1] / b.coeffs[-1]
        q[len(r) - len(b.coeffs)] = f
        for i, c in enumerate(b.coeffs):
            r[len(r) - len(b.coeffs) + i] -= f * c
        r.pop()
        while len(r) > 1 and r[-1] == 0:
            r.pop()
    if not (len(r) == 1 and r[0] == 0):
        raise ValueError("polynomial division not exact")
    return RationalPolynomial(tuple(q))


# ---------------------------------------------------------------------------
# numeric solving


def _aberth(coeffs, seed=None, maxiter=300):
    """All roots of a squarefree Fraction coefficient list, as mpmath mpc."""
    deg = len(coeffs) - 1
    cs = [mp.mpf(c.numerator) / mp.mpf(c.denominator) for c in coeffs]
    dcs = [cs[i] * i for i in range(1, len(cs))]

    def ev(cl, z):
        acc = mp.mpc(0)
        for c in reversed(cl):
            acc = acc * z + c
        return acc

    guesses = np.roots(np.array([float(c) for c in reversed(coeffs)]))
    rng = random.Random(seed)
    z = []
    for w in guesses:
        dz = mp.mpc(w.real, w.imag)
        if seed is not None:
            dz = dz * (1 + 1e-4 * (rng.random() - 0.5)) + mp.mpc(0, 1e-4 * (rng.random() - 0.5))
        z.append(dz)
    # split coincident starting points
    for i in range(deg):
        for j in range(i):
            if abs(z[i] - z[j]) < mp.mpf("1e-12"):
                z[i] += mp.mpc(1e-6, 1e-6) * (i + 1)
    target = mp.mpf(10) ** (-(_DPS - 10))
    for _ in range(maxiter):
        moved = mp.mpf(0)
        for i in range(deg):
            pv = ev(cs, z[i])
            if pv == 0:
                continue
            dv = ev(dcs, z[i])
            if dv == 0:
                z[i] += mp.mpc(1e-6, 1e-6)
                continue
            w = pv / dv
            s = mp.mpc(0)
            for j in range(deg):
                if j != i:
                    diff = z[i] - z[j]
                    if diff == 0:
                        diff = mp.mpc(1e-20, 1e-20)
                    s += 1 / diff
            denom = 1 - w * s
            if denom == 0:
                step = w
            else:
                step = w / denom
            z[i] -= step
            rel = abs(step) / (1 + abs(z[i]))
            if rel > moved:
                moved = rel
        if moved < target:
            return z
    raise RootFindingError(f"no convergence after {maxiter} iterations", partial=z)


def _pair_conjugates(values, tol):
    """Snap tiny imaginary parts to zero and average conjugate pairs; error
    when a genuinely complex value has no conjugate partner."""
    reals = []
    upper = []
    lower = []
    for z in values:
        scale = 1 + abs(z)
        if abs(z.imag) <= 1e-12 * scale:
            reals.append(mp.mpc(z.real, 0))
        elif z.imag > 0:
            upper.append(z)
        else:
            lower.append(z)
    if len(upper) != len(lower):
        raise RootFindingError(f"unpaired complex roots: {len(upper)} up vs {len(lower)} down", partial=values)
    out = list(reals)
    lower = list(lower)
    for z in upper:
        best = min(range(len(lower)), key=lambda i: abs(mp.conj(lower[i]) - z))
        w = lower.pop(best)
        if abs(mp.conj(w) - z) > tol * (1 + abs(z)):
            raise RootFindingError(f"conjugate mismatch at {z}", partial=values)
        avg = (z + mp.conj(w)) / 2
        out.append(avg)
        out.append(mp.conj(avg))
    return out


def _numeric_roots_with_mult(p, seed):
    """Roots (as mpc) with multiplicities of a polynomial whose rational
    roots were already removed; multiple roots are peeled off through
    gcd(p, p') and matched to the squarefree solve by proximity."""
    g = _poly_gcd(p, p.derivative())
    if g.degree == 0:
        return [[z, 1] for z in _pair_conjugates(_aberth(p.coeffs, seed=seed), tol=mp.mpf("1e-8"))]
    s = _poly_div_exact(p, g)
    base = [[z, 1] for z in _pair_conjugates(_aberth(s.coeffs, seed=seed), tol=mp.mpf("1e-8"))]
    for w, mu in _numeric_roots_with_mult(g, seed):
        i = min(range(len(base)), key=lambda t: abs(base[t][0] - w))
        base[i][1] += mu
    return base


def complex_roots(poly, seed=None) -> RootSet:
    """All roots of poly: rational ones exactly, the rest via certified
    extended-precision iteration.  `seed` perturbs the numeric starting
    points (the result must not depend on it)."""
    if poly.is_zero:
        raise ValueError("zero polynomial")
    if poly.degree == 0:
        return RootSet(0, ())
    coeffs = [Fraction(c) for c in poly.coeffs]
    exact, rest = _rational_roots(coeffs)
    roots = [
        Root(re=float(r), im=0.0, multiplicity=k, exact=r, residual=0.0)
        for r, k in sorted(exact.items())
    ]
    with mp.workdps(_DPS):
        if len(rest) > 1:
            scale = float(max(abs(c) for c in poly.coeffs))
            numeric = _numeric_roots_with_mult(RationalPolynomial(tuple(rest)), seed)
            for z, mult in numeric:
                res = float(_residual(poly, z))
                limit = _RESIDUAL_FACTOR * scale * max(1.0, float(abs(z))) ** poly.degree
                if res > limit:
                    raise RootFindingError(f"residual {res:.3e} above bound {limit:.3e} at {z}")
                roots.append(
                    Root(re=float(z.real), im=float(z.imag), multiplicity=mult, exact=None, residual=res)
                )
    total = sum(r.multiplicity for r in roots)
    if total != poly.degree:
        raise RootFindingError(f"found {total} roots for degree {poly.degree}")
    return RootSet(poly.degree, tuple(sorted(roots, key=lambda r: (r.re, r.im))))


def _residual(poly, z):
    acc = mp.mpc(0)
    for c in reversed(poly.coeffs):
        acc = acc * z + mp.mpf(c.numerator) / mp.mpf(c.denominator)
    return abs(acc)


# ---------------------------------------------------------------------------
# location checks


def _fail_worst(offenders):
    worst, margin = max(offenders, key=lambda t: t[1])
    return Verdict("fail", worst=worst, margin=margin)


def check_strip(rs, tol=DEFAULT_TOL) -> Verdict:
    """All roots in -D <= Re z <= D - 1 for a degree-D polynomial."""
    D = rs.degree
    offenders = []
    best = None
    for z in rs.values():
        over = max(-D - z.real, z.real - (D - 1))
        if over > tol:
            offenders.append((z, over))
        best = over if best is None else max(best, over)
    if offenders:
        return _fail_worst(offenders)
    return Verdict("pass", margin=best)


def check_stability(rs, tol=DEFAULT_TOL) -> Verdict:
    """All roots with Re z < 0, asked with margin tol."""
    offenders = []
    best = None
    for z in rs.values():
        if z.real >= -tol:
            offenders.append((z, z.real))
        best = z.real if best is None else max(best, z.real)
    if offenders:
        return _fail_worst(offenders)
    return Verdict("pass", margin=best)


def check_circle(rs, d, tol=DEFAULT_TOL) -> Verdict:
    """Each root in the disk |z + d/4| <= d/4 or within tol of a negative
    integer in -(d-1)..-1."""
    offenders = []
    best = None
    for z in rs.values():
        disk = abs(z + d / 4) - d / 4
        near_int = min(
            (abs(z - k) for k in range(-(d - 1), 0)),
            default=float("inf"),
        )
        over = min(disk, near_int)
        if over > tol:
            offenders.append((z, over))
        best = over if best is None else max(best, over)
    if offenders:
        return _fail_worst(offenders)
    return Verdict("pass", margin=best)


def check_narrow_strip(rs, tol=DEFAULT_TOL) -> Verdict:
    """All roots in -D/2 <= Re z <= D/2 - 1 (for palindromic-delta inputs)."""
    D = rs.degree
    offenders = []
    best = None
    for z in rs.values():
        over = max(-D / 2 - z.real, z.real - (D / 2 - 1))
        if over > tol:
            offenders.append((z, over))
        best = over if best is None else max(best, over)
    if offenders:
        return _fail_worst(offenders)
    return Verdict("pass", margin=best)


def deviation_from_half_line(rs) -> float:
    """Largest |Re z + 1/2| over the roots (0.0 when there are none)."""
    return max((abs(z.real + 0.5) for z in rs.values()), default=0.0)


def check_interlacing(rs, d, p, tol=DEFAULT_TOL) -> Verdict:
    """Root ladder of the looped-clique family when d - 2p + 2 >= 0: exact
    integer roots -1..-(d-p), each simple, plus one noninteger real root in
    each interval (-k, -k+1) for k = 1..p-1."""
    if d - 2 * p + 2 < 0:
        return Verdict("n/a")
    want_ints = set(range(-(d - p), 0))
    got_ints = {}
    others = []
    for r in rs:
        if r.is_exact and r.exact.denominator == 1:
            got_ints[int(r.exact)] = r.multiplicity
        else:
            others.extend([r] * r.multiplicity)
    if set(got_ints) != want_ints or any(m != 1 for m in got_ints.values()):
        return Verdict("fail", worst=None, margin=None)
    intervals = [False] * (p - 1)
    for r in others:
        if abs(r.im) > tol:
            return Verdict("fail", worst=r.value, margin=abs(r.im))
        x = r.re
        k = None
        for i in range(1, p):
            if -i + tol < x < -i + 1 - tol:
                k = i
                break
        if k is None or intervals[k - 1]:
            return Verdict("fail", worst=r.value, margin=None)
        intervals[k - 1] = True
    if not all(intervals):
        return Verdict("fail")
    return Verdict("pass")


def check_halfinteger_floor(rs, d, tol=DEFAULT_TOL) -> Verdict:
    """Integers -1..-floor((d-1)/2) all appear among the exact roots."""
    want = set(range(-((d - 1) // 2), 0))
    got = {int(r.exact) for r in rs if r.is_exact and r.exact.denominator == 1}
    if want <= got:
        return Verdict("pass")
    missing = min(want - got)
    return Verdict("fail", worst=complex(missing, 0))
