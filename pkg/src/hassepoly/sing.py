"""The slope <= 1 Hasse polynomial as a polynomial over F_p, and its singular points.

Singular points of H = Z(h) in P^n are common zeros of h and all partials.
Searches run over F_{p^k} for small k only; they give pointwise evidence, not
the dimension of Sing(H) over the algebraic closure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import check_budget, config
from .dwork import hasse_terms
from .ff import FField, FFElem, ff_make

Mono = tuple[int, ...]
MAX_TABLE_FIELD = 1 << 10


@dataclass(frozen=True)
class MPolyFp:
    """sum c * x^e over F_p with distinct exponents and nonzero c in [1, p)."""

    p: int
    nvars: int
    terms: tuple[tuple[Mono, int], ...]

    def __post_init__(self):
        merged: dict[Mono, int] = {}
        for e, c in self.terms:
            if len(e) != self.nvars:
                raise ValueError(f"exponent {e} has the wrong length")
            merged[tuple(e)] = (merged.get(tuple(e), 0) + c) % self.p
        clean = tuple(sorted((e, c) for e, c in merged.items() if c))
        object.__setattr__(self, "terms", clean)

    def __len__(self) -> int:
        return len(self.terms)

    def degrees(self) -> set[int]:
        return {sum(e) for e, _ in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def partial(self, i: int) -> "MPolyFp":
        out = []
        for e, c in self.terms:
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out.append((tuple(e2), c * e[i] % self.p))
        return MPolyFp(self.p, self.nvars, tuple(out))

    def __call__(self, point) -> FFElem:
        """Evaluate at a point with coordinates in some F_{p^k}."""
        point = list(point)
        field = point[0].field
        acc = field(0)
        for e, c in self.terms:
            term = field(c)
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            acc = acc + term
        return acc

    def evaluate_arr(self, tabs: "_Tables", X: np.ndarray) -> np.ndarray:
        """Evaluate on rows of an index array X of shape (N, nvars)."""
        acc = np.zeros(X.shape[0], dtype=np.int64)
        for e, c in self.terms:
            term = np.full(X.shape[0], c, dtype=np.int64)
            for i, k in enumerate(e):
                if k:
                    term = tabs.mul[term, tabs.pow[k][X[:, i]]]
            acc = tabs.add[acc, term]
        return acc


@dataclass
class _Tables:
    """Full addition, multiplication and power tables of a small field."""

    add: np.ndarray
    mul: np.ndarray
    pow: dict[int, np.ndarray]


@lru_cache(maxsize=8)
def _tables(field: FField, max_deg: int) -> _Tables:
    Q = field.q
    if Q > MAX_TABLE_FIELD:
        raise ValueError(f"field of size {Q} too large for lookup tables")
    idx = np.arange(Q, dtype=np.int64)
    X, Y = np.meshgrid(idx, idx, indexing="ij")
    add = field.add_arr(X.ravel(), Y.ravel()).reshape(Q, Q)
    mul = field.mul_arr(X.ravel(), Y.ravel()).reshape(Q, Q)
    pw = {0: np.ones(Q, dtype=np.int64)}
    for k in range(1, max_deg + 1):
        pw[k] = mul[pw[k - 1], idx]
    pw[0][0] = 1
    return _Tables(add, mul, pw)


def hasse_symbolic(n: int, p: int) -> MPolyFp:
    """h_p(Delta_n, <=1) in the variables a_1, ..., a_{n+1}."""
    return MPolyFp(p, n + 1, hasse_terms(n, p))


def gradient(h: MPolyFp) -> list[MPolyFp]:
    return [h.partial(i) for i in range(h.nvars)]


def singular_search(h: MPolyFp, k: int = 1) -> list[tuple[FFElem, ...]]:
    """All points of P^{m-1}(F_{p^k}) where h and every partial vanish.

    Points are normalised so that the first nonzero coordinate is 1 and
    returned sorted by their coordinate indices.
    """
    if not 1 <= k <= 2:
        raise ValueError("extension degree must be 1 or 2")
    field = ff_make(h.p, k)
    Q, m = field.q, h.nvars
    total = sum(Q**j for j in range(m))
    check_budget(total, config.step_budget, "projective enumeration")
    polys = [h] + [g for g in gradient(h) if len(g)]
    max_deg = max((max(e) for g in polys for e, _ in g.terms), default=0)
    tabs = _tables(field, max(max_deg, 1))
    found = []
    for lead in range(m):
        # zeros, then a 1 at position lead, then free coordinates
        free = m - 1 - lead
        # chunk over the first free coordinate to bound memory
        head = max(0, free - 3)
        rest = free - head
        grid = np.array(list(itertools.product(range(Q), repeat=rest)), dtype=np.int64)
        grid = grid.reshape(len(grid), rest)
        for prefix in itertools.product(range(Q), repeat=head):
            X = np.zeros((len(grid), m), dtype=np.int64)
            X[:, lead] = 1
            X[:, lead + 1:lead + 1 + head] = prefix
            X[:, lead + 1 + head:] = grid
            alive = np.ones(len(X), dtype=bool)
            for g in polys:
                sub = X[alive]
                val = g.evaluate_arr(tabs, sub)
                alive[np.flatnonzero(alive)[val != 0]] = False
                if not alive.any():
                    break
            for row in X[alive]:
                found.append(tuple(int(x) for x in row))
    found.sort()
    return [tuple(field.elem(x) for x in pt) for pt in found]


def normalize(point) -> tuple[FFElem, ...]:
    """Scale a projective point so that its first nonzero coordinate is 1."""
    point = list(point)
    lead = next((x for x in point if x), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    inv = lead ** -1
    return tuple(x * inv for x in point)
