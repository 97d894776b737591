"""Hasse polynomials from the reduced Dwork Frobenius matrix.

Everything is reduced modulo the maximal ideal as soon as it is formed, so
no p-adic quantity is ever stored.  After normalising column block s by
xi^(D w(s)) with xi^D = pi^(p-1), the entry a_{r,s} becomes

    sum_u prod_j lambda_{u_j} a_j^{u_j} * pi^(sum u - (p w(s) - w(r))),

summed over u >= 0 with sum_j u_j V_j = p s - r.  Since sum u >= w(ps - r)
>= p w(s) - w(r), its residue keeps only the solutions with
sum u = p w(s) - w(r), and the Teichmuller lifts reduce to the coefficients
themselves.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .config import check_budget, config
from .expsum import FamilySpec, LaurentPoly
from .ff import FField, FFElem, embed, ff_make
from .polytope import Polytope, Vec, lattice_points, polytope_from_monomials


# --- Artin-Hasse coefficients -------------------------------------------------

@dataclass(frozen=True)
class AHCoeffs:
    p: int
    values: tuple[Fraction, ...]

    def __getitem__(self, m: int) -> Fraction:
        return self.values[m]

    def __len__(self) -> int:
        return len(self.values)

    def residue(self, m: int) -> int:
        v = self.values[m]
        return v.numerator * pow(v.denominator, -1, self.p) % self.p


@lru_cache(maxsize=None)
def artin_hasse(p: int, m_max: int) -> AHCoeffs:
    """lambda_0..lambda_{m_max} of E_p(t) = exp(sum_i t^(p^i) / p^i).

    Differentiating gives m lambda_m = sum_{p^i <= m} lambda_{m - p^i}.
    """
    lam = [Fraction(1)]
    for m in range(1, m_max + 1):
        acc = Fraction(0)
        pi = 1
        while pi <= m:
            acc += lam[m - pi]
            pi *= p
        lam.append(acc / m)
        if lam[-1].denominator % p == 0:
            raise ArithmeticError(f"lambda_{m} is not {p}-integral")
    return AHCoeffs(p, tuple(lam))


# --- Frobenius entries --------------------------------------------------------

@lru_cache(maxsize=200_000)
def _solutions(V: tuple[Vec, ...], target: Vec, total: int) -> tuple[tuple[int, ...], ...]:
    """All u >= 0 with sum u_j V_j = target and sum u_j = total."""
    J, m = len(V), len(target)
    # coordinate ranges reachable by the suffix V[j:]
    lo = [[min(V[i][c] for i in range(j, J)) for c in range(m)] for j in range(J)]
    hi = [[max(V[i][c] for i in range(j, J)) for c in range(m)] for j in range(J)]
    out: list[tuple[int, ...]] = []
    u = [0] * J
    steps = 0

    def dfs(j: int, rest: list[int], left: int):
        nonlocal steps
        steps += 1
        if steps > config.solution_budget:
            check_budget(steps, config.solution_budget, "Frobenius entry solutions")
        if j == J - 1:
            if all(r == left * v for r, v in zip(rest, V[j])):
                u[j] = left
                out.append(tuple(u))
            return
        for t in range(left, -1, -1):
            nxt = [r - t * v for r, v in zip(rest, V[j])]
            remain = left - t
            if all(remain * lo[j + 1][c] <= nxt[c] <= remain * hi[j + 1][c] for c in range(m)):
                u[j] = t
                dfs(j + 1, nxt, remain)
        u[j] = 0

    if total >= 0:
        dfs(0, list(target), total)
    return tuple(out)


def _entry_total(poly: Polytope, p: int, r: Vec, s: Vec) -> int | None:
    """p w(s) - w(r) when it is a non-negative integer, else None."""
    wr, ws = poly.weight_scaled(r), poly.weight_scaled(s)
    if wr is None or ws is None:
        raise ValueError("Frobenius entries need finite weights")
    num = p * ws - wr
    if num < 0 or num % poly.D:
        return None
    return num // poly.D


@lru_cache(maxsize=200_000)
def _entry_terms(V: tuple[Vec, ...], p: int, r: Vec, s: Vec, total: int):
    """(lambda-product residue, u) for every contributing solution."""
    ah = artin_hasse(p, total)
    target = tuple(p * a - b for a, b in zip(s, r))
    out = []
    for u in _solutions(V, target, total):
        c = 1
        for x in u:
            c = c * ah.residue(x) % p
            if not c:
                break
        if c:
            out.append((c, u))
    return tuple(out)


def frob_entry(poly: Polytope, f: LaurentPoly, r: Vec, s: Vec) -> FFElem:
    """Residue of the normalised Frobenius entry a_{r,s} in F_q."""
    field = f.field
    total = _entry_total(poly, field.p, tuple(r), tuple(s))
    if total is None:
        return field(0)
    V = tuple(f.exponents)
    coeffs = [c.index for _, c in f.terms]
    acc = 0
    for c, u in _entry_terms(V, field.p, tuple(r), tuple(s), total):
        term = c
        for x, a in zip(u, coeffs):
            if x:
                term = field.mul(term, field.pow(a, x))
        acc = field.add(acc, term)
    return field.elem(acc)


@dataclass
class FrobBlockMatrix:
    """Reduced Frobenius matrix on the points of weight <= k/D."""

    field: FField
    points: list[Vec]
    weights: list[int]  # D * w
    entries: list[list[int]]  # field indices, rows r, columns s

    def det(self) -> FFElem:
        return self.field.elem(det_fq(self.field, self.entries))


def frob_matrix(poly: Polytope, f: LaurentPoly, k: int) -> FrobBlockMatrix:
    pts = lattice_points(poly, k)
    points = [u for _, u in pts]
    rows = [[frob_entry(poly, f, r, s).index for s in points] for r in points]
    return FrobBlockMatrix(f.field, points, [w for w, _ in pts], rows)


def det_fq(field: FField, rows) -> int:
    """Determinant over F_q by Gaussian elimination on index matrices."""
    M = [list(r) for r in rows]
    n = len(M)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = field.neg(det)
        det = field.mul(det, M[c][c])
        inv = field.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c]:
                factor = field.mul(M[i][c], inv)
                row_i, row_c = M[i], M[c]
                for j in range(c, n):
                    if row_c[j]:
                        row_i[j] = field.sub(row_i[j], field.mul(factor, row_c[j]))
    return det


def hasse_minor(poly: Polytope, f: LaurentPoly, k: int) -> FFElem:
    """h_p(Delta, k): the reduced determinant on points of weight <= k/D."""
    return frob_matrix(poly, f, k).det()


def hasse_product(poly: Polytope, f: LaurentPoly) -> FFElem:
    """prod_{k=0}^{m D} h_p(Delta, k)."""
    field = f.field
    acc = field(1)
    for k in range(poly.dim * poly.D + 1):
        acc = acc * hasse_minor(poly, f, k)
        if not acc:
            break
    return acc


# --- closed forms for the family ----------------------------------------------

def _as_elems(p: int | None, coeffs) -> list[FFElem]:
    coeffs = list(coeffs)
    if not coeffs:
        raise ValueError("no coefficients")
    out = []
    for c in coeffs:
        if not isinstance(c, FFElem):
            if p is None:
                raise ValueError("plain integer coefficients need p")
            c = ff_make(p, 1)(c)
        if not c:
            raise ValueError("coefficients must be nonzero")
        out.append(c)
    field = out[0].field
    if any(c.field != field for c in out):
        raise ValueError("coefficients from different fields")
    return out


@lru_cache(maxsize=None)
def hasse_terms(n: int, p: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """(exponent vector, coefficient mod p) of h_p(Delta_n, <=1).

    Monomials a_1^(2v_1)...a_n^(2v_n) a_{n+1}^(p-1-2|v|) with coefficient
    1 / ((v_1! ... v_n!)^2 (p-1-2|v|)!), for |v| <= (p-1)/2.
    """
    if p == 2:
        raise ValueError("p must be odd")
    inv_fact = [pow(math.factorial(i), -1, p) for i in range(p)]
    half = (p - 1) // 2
    out = []
    for v in itertools.product(range(half + 1), repeat=n):
        sv = sum(v)
        if sv > half:
            continue
        c = inv_fact[p - 1 - 2 * sv]
        for x in v:
            c = c * inv_fact[x] * inv_fact[x] % p
        out.append((tuple(2 * x for x in v) + (p - 1 - 2 * sv,), c))
    return tuple(sorted(out))


def hasse_closed_le1(n: int, p: int, coeffs) -> FFElem:
    """h_p(Delta_n, <=1) evaluated at (a_1, ..., a_{n+1})."""
    a = _as_elems(p, coeffs)
    if len(a) != n + 1:
        raise ValueError(f"need {n + 1} coefficients")
    field = a[0].field
    if field.p != p:
        raise ValueError("coefficient field has the wrong characteristic")
    idx = [x.index for x in a]
    acc = 0
    for exps, c in hasse_terms(n, p):
        term = c
        for base, e in zip(idx, exps):
            if e:
                term = field.mul(term, field.pow(base, e))
        acc = field.add(acc, term)
    return field.elem(acc)


def hasse_closed_full(n: int, p: int, coeffs) -> FFElem:
    """Full Hasse polynomial h_p(Delta_n) for n = 2, 3, equal to the slope <= 1 form."""
    if n not in (2, 3):
        raise ValueError("closed form for the full Hasse polynomial only for n = 2, 3")
    return hasse_closed_le1(n, p, coeffs)


# --- non-degeneracy -----------------------------------------------------------

def nondegenerate(n: int, coeffs, p: int | None = None) -> bool:
    """True iff +-2a_1 +- ... +- 2a_n + a_{n+1} != 0 for every choice of signs."""
    a = _as_elems(p, coeffs)
    if len(a) != n + 1:
        raise ValueError(f"need {n + 1} coefficients")
    two = [x * 2 for x in a[:n]]
    for signs in itertools.product((1, -1), repeat=n):
        acc = a[n]
        for s, t in zip(signs, two):
            acc = acc + t if s > 0 else acc - t
        if not acc:
            return False
    return True


@dataclass
class Witness:
    face: tuple[Vec, ...]
    k: int
    point: tuple[FFElem, ...]


def _log_derivatives(g: LaurentPoly) -> list[list[tuple[Vec, FFElem]]]:
    """Terms of x_i d/dx_i g for each i, skipping those that vanish identically."""
    out = []
    for i in range(g.m):
        terms = []
        for e, c in g.terms:
            d = c * (e[i] % c.field.p)
            if d:
                terms.append((e, d))
        if terms:
            out.append(terms)
    return out


def _torus_common_zero(parts, big: FField, m: int) -> tuple[int, ...] | None:
    """First point of (F^*)^m (by logs, lexicographic) where every part vanishes."""
    n_units = big.q - 1
    check_budget(n_units**m, config.step_budget, "torus search")
    log = big.log_table
    exp = big.exp_table.astype(np.int64)
    compiled = []
    for terms in parts:
        V = np.array([e for e, _ in terms], dtype=np.int64)
        L = np.array([int(log[embed(c, big).index]) for _, c in terms], dtype=np.int64)
        compiled.append((V, L))
    inner = 1
    while inner < m and n_units ** (inner + 1) <= 1 << 20:
        inner += 1
    outer = m - inner
    grid = np.stack(np.meshgrid(*[np.arange(n_units, dtype=np.int64)] * inner,
                                indexing="ij"), axis=-1).reshape(-1, inner)
    for o in itertools.product(range(n_units), repeat=outer):
        alive = np.ones(len(grid), dtype=bool)
        for V, L in compiled:
            base = (L + V[:, :outer] @ np.array(o, dtype=np.int64)) % n_units
            val = np.zeros(int(alive.sum()), dtype=np.int64)
            sub = grid[alive]
            for t in range(len(L)):
                e = (sub @ V[t, outer:] + base[t]) % n_units
                val = big.add_arr(val, exp[e])
            idx = np.flatnonzero(alive)
            alive[idx[val != 0]] = False
            if not alive.any():
                break
        if alive.any():
            hit = grid[np.flatnonzero(alive)[0]]
            return tuple(int(x) for x in o) + tuple(int(x) for x in hit)
    return None


def _single_unit_monomial(terms) -> bool:
    return len(terms) == 1


def nondeg_witness_search(f: LaurentPoly, k_max: int = 2, poly: Polytope | None = None) -> Witness | None:
    """Look for a toric common zero of the partials of f on an origin-free face.

    A returned witness proves that f is degenerate; None proves nothing.
    """
    if not 1 <= k_max <= 3:
        raise ValueError("k_max must be 1, 2 or 3")
    poly = poly or polytope_from_monomials(f.exponents)
    base = f.field
    faces = []
    for face in poly.origin_free_faces():
        keep = face & set(f.exponents)
        if not keep:
            continue
        g = f.restrict(keep)
        parts = _log_derivatives(g)
        # a part that is a single monomial with a unit coefficient never vanishes
        if any(_single_unit_monomial(t) for t in parts):
            continue
        faces.append((tuple(sorted(keep)), parts))
    for k in range(1, k_max + 1):
        big = ff_make(base.p, base.k * k)
        for face, parts in faces:
            hit = _torus_common_zero(parts, big, f.m)
            if hit is not None:
                point = tuple(big.elem(int(big.exp_table[e])) for e in hit)
                return Witness(face, k, point)
    return None


def family_face_poly(spec: FamilySpec) -> LaurentPoly:
    """g = f restricted to the top face x_{n+1} = 1."""
    f = spec.to_laurent()
    return f.restrict({e for e in f.exponents if e[-1] == 1})
