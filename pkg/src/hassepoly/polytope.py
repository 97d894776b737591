"""Newton polyhedra, weights and Hodge-type polygons.

A polytope here is the convex hull of the origin and the exponent vectors of
a Laurent polynomial.  Facets are stored as inequalities <e, x> <= c with a
primitive integral normal e; since the origin lies in the polytope, c >= 0,
and the facets with c > 0 (those avoiding the origin) are the ones that
define the weight function

    w(u) = max(0, max_{c > 0} <e, u> / c),

with w(u) = inf when u is outside the cone, i.e. <e, u> > 0 for some facet
through the origin.

The generic hull is a brute-force hyperplane search and is limited to
dimension <= 4.  The family polytopes are also available in closed form for
every n.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
import sympy

from .config import check_budget, config
from .cyclo import INF
from .expsum import LaurentPoly
from .lfun import Polygon

Vec = tuple[int, ...]
MAX_GENERIC_DIM = 4


@dataclass(frozen=True)
class Facet:
    normal: Vec
    c: int

    @property
    def flagged(self) -> bool:
        """True when the facet avoids the origin."""
        return self.c > 0

    def value(self, u) -> int:
        return sum(e * x for e, x in zip(self.normal, u))

    def contains(self, u) -> bool:
        return self.value(u) == self.c


def _det(rows: list[list[int]]) -> int:
    """Integer determinant by Bareiss elimination."""
    M = [list(r) for r in rows]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1]


def _normal(diffs: list[Vec], m: int) -> Vec | None:
    """Primitive integer vector orthogonal to m-1 difference vectors."""
    comps = []
    for i in range(m):
        minor = [[d[j] for j in range(m) if j != i] for d in diffs]
        comps.append((-1) ** i * _det(minor))
    g = 0
    for c in comps:
        g = math.gcd(g, c)
    if g == 0:
        return None
    return tuple(c // g for c in comps)


def _hull_facets(points: list[Vec], m: int) -> list[Facet]:
    facets = set()
    for subset in itertools.combinations(points, m):
        base = subset[0]
        diffs = [tuple(x - y for x, y in zip(v, base)) for v in subset[1:]]
        e = _normal(diffs, m)
        if e is None:
            continue
        c = sum(a * b for a, b in zip(e, base))
        vals = [sum(a * b for a, b in zip(e, v)) for v in points]
        if all(v <= c for v in vals):
            facets.add(Facet(e, c))
        if all(v >= c for v in vals):
            facets.add(Facet(tuple(-x for x in e), -c))
    return sorted(facets, key=lambda f: (-f.c, f.normal))


@dataclass
class Polytope:
    """Convex hull of the origin and a set of lattice points."""

    dim: int
    points: tuple[Vec, ...]
    vertices: tuple[Vec, ...]
    facets: tuple[Facet, ...]
    family: tuple[int, str] | None = None
    _faces: list | None = field(default=None, repr=False)

    @property
    def flagged(self) -> list[Facet]:
        return [f for f in self.facets if f.flagged]

    @cached_property
    def D(self) -> int:
        """lcm of the flagged facet constants, so that w(Z^m) lies in (1/D) Z."""
        return math.lcm(*[f.c for f in self.flagged]) if self.flagged else 1

    def origin_interior(self) -> bool:
        return all(f.c > 0 for f in self.facets)

    def contains(self, u) -> bool:
        return all(f.value(u) <= f.c for f in self.facets)

    def weight(self, u):
        """w(u) as a Fraction, or INF outside the cone."""
        wd = self.weight_scaled(u)
        return INF if wd is None else Fraction(wd, self.D)

    def weight_scaled(self, u) -> int | None:
        """D * w(u), or None outside the cone."""
        best = 0
        for f in self.facets:
            v = f.value(u)
            if f.c == 0:
                if v > 0:
                    return None
            else:
                best = max(best, v * (self.D // f.c))
        return best

    def weights_scaled_arr(self, U: np.ndarray) -> np.ndarray:
        """Vectorised D*w over rows of U; -1 marks points outside the cone."""
        U = np.asarray(U, dtype=np.int64)
        best = np.zeros(U.shape[0], dtype=np.int64)
        outside = np.zeros(U.shape[0], dtype=bool)
        for f in self.facets:
            v = U @ np.array(f.normal, dtype=np.int64)
            if f.c == 0:
                outside |= v > 0
            else:
                np.maximum(best, v * (self.D // f.c), out=best)
        best[outside] = -1
        return best

    def facet_points(self, facet: Facet) -> frozenset:
        return frozenset(v for v in self.points if facet.contains(v))

    def origin_free_faces(self) -> list[frozenset]:
        """Point sets of every face avoiding the origin, any dimension.

        A face avoids the origin iff it lies in a flagged facet, and faces
        are intersections of facets, so closing the flagged facet point sets
        under intersection with all facets finds them all.
        """
        if self._faces is None:
            all_sets = [self.facet_points(f) for f in self.facets]
            faces = {self.facet_points(f) for f in self.flagged}
            frontier = set(faces)
            while frontier:
                new = set()
                for face in frontier:
                    for s in all_sets:
                        sub = face & s
                        if sub and sub != face and sub not in faces:
                            new.add(sub)
                faces |= new
                frontier = new
            self._faces = sorted(faces, key=lambda s: (-len(s), sorted(s)))
        return self._faces


def polytope_from_monomials(exponents, family: tuple[int, str] | None = None) -> Polytope:
    """Hull of the origin and the given exponent vectors.

    With ``family=(n, variant)`` the closed-form family polytope is returned
    instead of running the generic hull, which is limited to dimension 4.
    """
    if family is not None:
        return family_polytope(*family)
    exps = [tuple(int(x) for x in e) for e in exponents]
    if not exps:
        raise ValueError("no exponents")
    m = len(exps[0])
    if m > MAX_GENERIC_DIM:
        raise ValueError(f"generic hull limited to dimension {MAX_GENERIC_DIM}; got {m}")
    origin = (0,) * m
    points = sorted(set(exps) | {origin})
    rank = sympy.Matrix([list(v) for v in points]).rank()
    if rank < m:
        raise ValueError("polytope is not full-dimensional")
    facets = _hull_facets(points, m)
    vertices = _vertices(points, facets, m)
    return Polytope(m, tuple(points), tuple(vertices), tuple(facets))


def _vertices(points, facets, m) -> list[Vec]:
    out = []
    for v in points:
        normals = [list(f.normal) for f in facets if f.contains(v)]
        if normals and sympy.Matrix(normals).rank() == m:
            out.append(v)
    return out


# --- the family --------------------------------------------------------------

def family_exponents(n: int, variant: str = "full") -> list[Vec]:
    """Exponents of sum a_i x_{n+1}(x_i + 1/x_i) + a_{n+1} x_{n+1} (+ 1/x_{n+1})."""
    m = n + 1
    out = []
    for i in range(n):
        for s in (1, -1):
            e = [0] * m
            e[i], e[n] = s, 1
            out.append(tuple(e))
    out.append(tuple([0] * n + [1]))
    if variant == "full":
        out.append(tuple([0] * n + [-1]))
    elif variant != "face":
        raise ValueError(f"unknown variant {variant!r}")
    return out


def family_polytope(n: int, variant: str = "full") -> Polytope:
    """Delta_n ("full") or the pyramid over its top face ("face").

    Delta_n has the top facet x_{n+1} <= 1 and the 2^n facets
    <2 sigma, x'> - x_{n+1} <= 1.  The face polytope keeps the top facet and
    has the 2^n facets <sigma, x'> - x_{n+1} <= 0 through the origin.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    m = n + 1
    points = [tuple([0] * m)] + family_exponents(n, variant)
    top = Facet(tuple([0] * n + [1]), 1)
    scale, c = (2, 1) if variant == "full" else (1, 0)
    lower = [Facet(tuple(scale * s for s in sigma) + (-1,), c)
             for sigma in itertools.product((1, -1), repeat=n)]
    vertices = [e for e in family_exponents(n, variant) if any(e[:n])]
    if variant == "full":
        vertices.append(tuple([0] * n + [-1]))
    else:
        vertices.append(tuple([0] * m))
    facets = sorted([top] + lower, key=lambda f: (-f.c, f.normal))
    return Polytope(m, tuple(sorted(points)), tuple(sorted(vertices)), tuple(facets), (n, variant))


def family_hodge_numbers(n: int) -> list[int]:
    """H(m) = C(n+1, m), m = 0..n+1, for Delta_n (D = 1)."""
    return [math.comb(n + 1, k) for k in range(n + 2)]


def family_hodge_polygon(n: int) -> Polygon:
    return hodge_polygon(family_hodge_numbers(n), 1)


# --- lattice point counts ----------------------------------------------------

@dataclass
class WeightTable:
    D: int
    counts: list[int]
    points: dict[int, list[Vec]] | None = None

    def __post_init__(self):
        if self.counts and self.counts[0] != 1:
            raise ValueError("W(0) must be 1")

    @property
    def kmax(self) -> int:
        return len(self.counts) - 1


def _box(poly: Polytope, kmax: int) -> list[range]:
    V = np.array(poly.vertices, dtype=np.int64)
    t = Fraction(kmax, poly.D)
    lo = [math.floor(t * int(x)) for x in V.min(axis=0)]
    hi = [math.ceil(t * int(x)) for x in V.max(axis=0)]
    lo = [min(0, x) for x in lo]
    hi = [max(0, x) for x in hi]
    return [range(a, b + 1) for a, b in zip(lo, hi)]


def lattice_points(poly: Polytope, kmax: int) -> list[tuple[int, Vec]]:
    """All (D*w(u), u) with D*w(u) <= kmax, ordered by weight then lexicographically."""
    box = _box(poly, kmax)
    size = math.prod(len(r) for r in box)
    check_budget(size, config.box_budget, "lattice box")
    out = []
    head, tail = box[0], box[1:]
    tail_grid = np.array(list(itertools.product(*tail)), dtype=np.int64)
    tail_grid = tail_grid.reshape(len(tail_grid), len(tail))
    for x0 in head:
        U = np.column_stack([np.full(len(tail_grid), x0, dtype=np.int64), tail_grid])
        wd = poly.weights_scaled_arr(U)
        keep = (wd >= 0) & (wd <= kmax)
        for w, u in zip(wd[keep], U[keep]):
            out.append((int(w), tuple(int(x) for x in u)))
    out.sort()
    return out


def weight_counts(poly: Polytope, kmax: int | None = None, keep_points: bool = False) -> WeightTable:
    """W(k) = #{u : w(u) = k/D} for k = 0..kmax (default dim * D)."""
    kmax = poly.dim * poly.D if kmax is None else kmax
    counts = [0] * (kmax + 1)
    buckets: dict[int, list[Vec]] | None = {k: [] for k in range(kmax + 1)} if keep_points else None
    for w, u in lattice_points(poly, kmax):
        counts[w] += 1
        if buckets is not None:
            buckets[w].append(u)
    return WeightTable(poly.D, counts, buckets)


def hodge_numbers(table: WeightTable, m: int) -> list[int]:
    """H(k) = sum_i (-1)^i C(m, i) W(k - i D), k = 0..m D."""
    D = table.D
    if table.kmax < m * D:
        raise ValueError(f"weight table stops at {table.kmax}, need {m * D}")
    H = []
    for k in range(m * D + 1):
        h = sum((-1) ** i * math.comb(m, i) * table.counts[k - i * D]
                for i in range(m + 1) if k - i * D >= 0)
        if h < 0:
            raise ArithmeticError(f"negative Hodge number H({k}) = {h}")
        H.append(h)
    return H


def hodge_polygon(H, D: int = 1) -> Polygon:
    """Vertices (sum_{j<=k} H(j), (1/D) sum_{j<=k} j H(j)) and the origin."""
    pts = [(0, 0)]
    x, y = 0, Fraction(0)
    for j, h in enumerate(H):
        x += h
        y += Fraction(j * h, D)
        pts.append((x, y))
    return Polygon.from_points(pts)


def chain_polygon(table: WeightTable) -> Polygon:
    """P(Delta): the same construction with W in place of H, up to kmax."""
    return hodge_polygon(table.counts, table.D)


def face_restrict(f: LaurentPoly, face) -> LaurentPoly:
    """Terms of f whose exponents lie on the face (a Facet or a point set)."""
    if isinstance(face, Facet):
        keep = {e for e in f.exponents if face.contains(e)}
    else:
        keep = set(face) & set(f.exponents)
    if not keep:
        raise ValueError("empty face restriction")
    return f.restrict(keep)
