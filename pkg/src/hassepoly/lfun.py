"""From power sums to L-polynomials, Newton polygons and their symmetries.

For a family member in m = n+1 variables the L-function L*(f, T)^((-1)^n) is
a polynomial of degree d = 2^(n+1),

    L(T) = sum_i A_i T^i = prod_i (1 - alpha_i T),

and the power sums of the reciprocal roots are

    p_k = sum_i alpha_i^k = (-1)^(n+1) S*_k(f).

(Sanity check: f = x_1 has S*_k = -1 and L = 1 - T.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cyclo import INF, CycInt, CycRat, cyc_zeta_pow


class NonIntegralCoefficient(ArithmeticError):
    """Newton's identities produced a coefficient outside Z[zeta_p]."""


# --- polygons -------------------------------------------------------------

Point = tuple[Fraction, Fraction]


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points) -> list[Point]:
    """Lower convex hull, left to right, with collinear points dropped."""
    pts = sorted({(Fraction(x), Fraction(y)) for x, y in points})
    # keep the lowest point per abscissa
    lowest: dict[Fraction, Fraction] = {}
    for x, y in pts:
        if x not in lowest or y < lowest[x]:
            lowest[x] = y
    hull: list[Point] = []
    for pt in sorted(lowest.items()):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return hull


@dataclass(frozen=True)
class Polygon:
    """A convex lower polygon given by its vertices, left to right."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        vs = tuple((Fraction(x), Fraction(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if not vs:
            raise ValueError("empty polygon")
        for (x0, _), (x1, _) in zip(vs, vs[1:]):
            if x1 <= x0:
                raise ValueError("vertex abscissae must increase")
        slopes = self._raw_slopes()
        if any(s1 <= s0 for s0, s1 in zip(slopes, slopes[1:])):
            raise ValueError("polygon is not strictly convex")

    @classmethod
    def from_points(cls, points) -> "Polygon":
        return cls(tuple(lower_hull(points)))

    def _raw_slopes(self) -> list[Fraction]:
        vs = self.vertices
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(vs, vs[1:])]

    def sides(self) -> list[tuple[Fraction, Fraction]]:
        """(slope, horizontal length) per side.

        For a Newton polygon the length of the side of slope s is the number
        of reciprocal roots with ord_q equal to s.
        """
        vs = self.vertices
        return [((y1 - y0) / (x1 - x0), x1 - x0) for (x0, y0), (x1, y1) in zip(vs, vs[1:])]

    def break_points(self) -> list[Point]:
        """Vertices followed by a side, other than the starting vertex."""
        return list(self.vertices[1:-1])

    @property
    def width(self) -> Fraction:
        return self.vertices[-1][0] - self.vertices[0][0]

    def ordinate(self, x) -> Fraction:
        x = Fraction(x)
        vs = self.vertices
        if not vs[0][0] <= x <= vs[-1][0]:
            raise ValueError(f"{x} outside [{vs[0][0]}, {vs[-1][0]}]")
        for (x0, y0), (x1, y1) in zip(vs, vs[1:]):
            if x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return vs[-1][1]

    def int_vertices(self) -> list[tuple[int, int]] | None:
        if all(x.denominator == 1 and y.denominator == 1 for x, y in self.vertices):
            return [(int(x), int(y)) for x, y in self.vertices]
        return None

    def to_text(self) -> str:
        return "".join(f"{x} {y}\n" for x, y in self.vertices)

    def __str__(self) -> str:
        return " ".join(f"({x},{y})" for x, y in self.vertices)


# --- coefficients and profiles ----------------------------------------------

@dataclass
class LPolyCoeffs:
    """A_0, ..., A_m of the L-polynomial of a family member."""

    p: int
    a: int
    n: int
    coeffs: list[CycInt]
    complete: bool = False

    @property
    def degree(self) -> int:
        return 2 ** (self.n + 1)

    @property
    def q(self) -> int:
        return self.p**self.a

    def ord_q(self, i: int):
        return self.coeffs[i].ord_q(self.a)

    def profile(self) -> "ValuationProfile":
        return ValuationProfile({i: self.ord_q(i) for i in range(len(self.coeffs))})


@dataclass
class ValuationProfile:
    """Points (i, ord_q A_i) with a provenance tag per index."""

    values: dict[int, object]
    sources: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        for i in self.values:
            self.sources.setdefault(i, "direct")
        if 0 in self.values and self.values[0] != 0:
            raise ValueError("A_0 must have valuation 0")

    def items(self):
        return sorted(self.values.items())

    def points(self) -> list[Point]:
        return [(Fraction(i), Fraction(v)) for i, v in self.items() if v != INF]


def coeffs_from_power_sums(sums, n: int, p: int, a: int, nvars: int | None = None) -> LPolyCoeffs:
    """Newton's identities k A_k = -sum_{i=1}^k p_i A_{k-i}, divided exactly.

    ``sums`` are S*_1, ..., S*_m.  ``nvars`` defaults to n+1 (the family);
    the sign p_k = (-1)^nvars S*_k follows from L = L*^((-1)^(nvars-1)).
    """
    nvars = n + 1 if nvars is None else nvars
    sums = list(sums)
    if len(sums) > 2 ** (n + 1):
        raise ValueError(f"at most {2 ** (n + 1)} power sums are meaningful")
    sign = -1 if nvars % 2 else 1
    psums = [s * sign for s in sums]
    A = [CycInt.from_int(p, 1)]
    for k in range(1, len(psums) + 1):
        acc = CycInt.from_int(p, 0)
        for i in range(1, k + 1):
            acc = acc + psums[i - 1] * A[k - i]
        try:
            A.append((-acc).exact_div(k))
        except ArithmeticError as exc:
            raise NonIntegralCoefficient(
                f"A_{k} is not integral; input degenerate or degree model wrong") from exc
    return LPolyCoeffs(p, a, n, A, complete=len(A) == 2 ** (n + 1) + 1)


def power_sums_from_coeffs(coeffs: LPolyCoeffs, kmax: int | None = None) -> list[CycInt]:
    """Invert Newton's identities and undo the sign, giving S*_1..S*_kmax."""
    A = coeffs.coeffs
    kmax = len(A) - 1 if kmax is None else kmax
    zero = CycInt.from_int(coeffs.p, 0)
    psums: list[CycInt] = []
    for k in range(1, kmax + 1):
        acc = (A[k] if k < len(A) else zero) * (-k)
        for i in range(1, k):
            if k - i < len(A):
                acc = acc - psums[i - 1] * A[k - i]
        psums.append(acc)
    sign = -1 if (coeffs.n + 1) % 2 else 1
    return [s * sign for s in psums]


def newton_polygon(profile: ValuationProfile) -> Polygon:
    pts = profile.points()
    if not pts:
        raise ValueError("empty valuation profile")
    return Polygon.from_points(pts)


def symmetry_complete(partial: LPolyCoeffs) -> ValuationProfile:
    """Fill in ord_q A_{d-j} = ord_q A_j + (n+1)(d/2 - j) for the known j.

    Valid for pure L-polynomials of weight n+1; completed indices are tagged
    "symmetry".  Indices between the known range and its mirror stay absent.
    """
    d = partial.degree
    if d % 2:
        raise ValueError("odd degree")
    known = min(len(partial.coeffs) - 1, d)
    values = {i: partial.ord_q(i) for i in range(known + 1)}
    sources = {i: "direct" for i in values}
    w = partial.n + 1
    for j in range(known + 1):
        if d - j in values:
            continue
        v = values[j]
        values[d - j] = v if v == INF else v + w * (Fraction(d, 2) - j)
        sources[d - j] = "symmetry"
    return ValuationProfile(values, sources)


def fe_complete(partial: LPolyCoeffs) -> LPolyCoeffs:
    """Reconstruct A_{d/2+1}..A_d from the functional equation.

    conj(A_j) A_d = q^((n+1) j) A_{d-j}; taking j = d/2 gives A_d, which
    needs A_{d/2} != 0.  Every reconstructed coefficient is checked to be
    integral.
    """
    d = partial.degree
    half = d // 2
    A = partial.coeffs
    if len(A) < half + 1:
        raise ValueError(f"need A_0..A_{half}")
    if not A[half]:
        raise ArithmeticError(f"A_{half} vanishes; A_{d} not determined by the lower half")
    q = partial.q
    w = partial.n + 1
    top = CycRat(A[half] * q ** (w * half)) / CycRat(A[half].conj())
    if not top.is_integral():
        raise NonIntegralCoefficient(f"reconstructed A_{d} is not integral")
    a_d = top.to_int()
    out = list(A[:half + 1]) + [None] * half
    for j in range(half - 1, -1, -1):
        num = A[j].conj() * a_d
        scale = q ** (w * j)
        try:
            out[d - j] = num.exact_div(scale)
        except ArithmeticError as exc:
            raise NonIntegralCoefficient(f"reconstructed A_{d - j} is not integral") from exc
    return LPolyCoeffs(partial.p, partial.a, partial.n, out, complete=True)


def roots_of_unity(p: int) -> list[CycInt]:
    """The 2p roots of unity +-zeta^t of Z[zeta_p]."""
    out = []
    for t in range(p):
        z = cyc_zeta_pow(p, t)
        out += [z, -z]
    return out


def fe_complete_with_unit(partial: LPolyCoeffs, unit: CycInt) -> LPolyCoeffs:
    """Complete the upper half given A_d = unit * q^((n+1) d/2).

    Needed when A_{d/2} = 0: the functional equation then fixes A_d only up
    to a root of unity.  Reconstruction is automatically integral.
    """
    d = partial.degree
    half = d // 2
    A = partial.coeffs
    if len(A) < half + 1:
        raise ValueError(f"need A_0..A_{half}")
    q, w = partial.q, partial.n + 1
    out = list(A[:half + 1]) + [None] * half
    for j in range(half - 1, -1, -1):
        out[d - j] = A[j].conj() * unit * q ** (w * (half - j))
    full = LPolyCoeffs(partial.p, partial.a, partial.n, out, complete=True)
    if A[half].conj() * out[d] != A[half] * q ** (w * half):
        raise ValueError("unit inconsistent with A_{d/2}")
    return full


def fe_unit_candidates(partial: LPolyCoeffs, tol: float = 1e-6) -> list[LPolyCoeffs]:
    """Completions over all roots of unity that are pure in every complex embedding."""
    out = []
    for unit in roots_of_unity(partial.p):
        try:
            full = fe_complete_with_unit(partial, unit)
        except ValueError:
            continue
        if all(purity_deviation(full, j) < tol for j in range(1, partial.p)):
            out.append(full)
    return out


@dataclass
class FECheck:
    ok: bool
    first_bad: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def functional_equation_check(full: LPolyCoeffs) -> FECheck:
    """conj(A_j) A_d == q^((n+1) j) A_{d-j} for every j, exactly."""
    d = full.degree
    A = full.coeffs
    if len(A) != d + 1:
        raise ValueError(f"need all of A_0..A_{d}")
    q, w = full.q, full.n + 1
    for j in range(d + 1):
        if A[j].conj() * A[d] != A[d - j] * q ** (w * j):
            return FECheck(False, j)
    return FECheck(True)


def purity_deviation(full: LPolyCoeffs, embedding: int = 1) -> float:
    """max | |alpha| / q^((n+1)/2) - 1 | over the complex reciprocal roots.

    Double precision and advisory only.  Roots are taken after rescaling
    alpha = q^((n+1)/2) beta so that the polynomial in beta has coefficients
    of binomial size.
    """
    d = full.degree
    s = math.sqrt(full.q) ** (full.n + 1)
    # reciprocal roots are the roots of sum_i A_i T^(d-i)
    poly = [complex(c.embed(embedding)) / s**i for i, c in enumerate(full.coeffs)]
    if len(poly) != d + 1:
        raise ValueError("purity needs the full polynomial")
    roots = np.roots(poly)
    return float(np.max(np.abs(np.abs(roots) - 1.0)))


def end_valuation_ok(full: LPolyCoeffs) -> bool:
    return full.ord_q(full.degree) == (full.n + 1) * 2**full.n


# --- verdicts ---------------------------------------------------------------

@dataclass
class BreakVerdict:
    index: int
    hp: Fraction
    np: object
    source: str

    @property
    def ok(self) -> bool:
        return self.np != INF and self.np == self.hp


@dataclass
class Coincidence:
    verdicts: list[BreakVerdict]

    @property
    def np_eq_hp(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def failing(self) -> list[BreakVerdict]:
        return [v for v in self.verdicts if not v.ok]

    def __bool__(self) -> bool:
        return self.np_eq_hp


def vertex_coincidence(profile: ValuationProfile, hp: Polygon) -> Coincidence:
    """NP = HP iff ord_q A_i equals HP(i) at every break point of HP.

    Since NP >= HP with the same end points, touching at every vertex pins
    every side in between.
    """
    verdicts = []
    for x, y in hp.break_points():
        if x.denominator != 1:
            raise ValueError(f"non-integral break point {x}")
        i = int(x)
        if i not in profile.values:
            raise KeyError(f"profile lacks index {i}")
        verdicts.append(BreakVerdict(i, y, profile.values[i], profile.sources.get(i, "direct")))
    return Coincidence(verdicts)


def empirical_gnp(polygons) -> Polygon:
    """Lower hull of the pointwise minimum of observed Newton polygons.

    This is evidence only: it bounds GNP from above by what was sampled.
    """
    polygons = list(polygons)
    if not polygons:
        raise ValueError("no polygons")
    lo = min(int(pg.vertices[0][0]) for pg in polygons)
    hi = max(int(pg.vertices[-1][0]) for pg in polygons)
    pts = []
    for x in range(lo, hi + 1):
        ys = [pg.ordinate(x) for pg in polygons
              if pg.vertices[0][0] <= x <= pg.vertices[-1][0]]
        if ys:
            pts.append((x, min(ys)))
    return Polygon.from_points(pts)
