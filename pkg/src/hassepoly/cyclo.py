"""Exact arithmetic in Z[zeta_p] and Q(zeta_p).

Elements are stored in the power basis 1, z, ..., z^(p-2).  The only prime
that matters is the totally ramified one above p, generated by 1 - z; its
valuation is computed by exact repeated division.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

INF = float("inf")  # valuation of zero


def _reduce_group(p: int, c: list[int]) -> tuple[int, ...]:
    """Map group-ring coordinates (length p, z^p = 1) to the power basis."""
    top = c[p - 1]
    return tuple(c[i] - top for i in range(p - 1))


class CycInt:
    """An element sum c_i z^i of Z[zeta_p], 0 <= i <= p-2."""

    __slots__ = ("p", "coords")

    def __init__(self, p: int, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != p - 1:
            raise ValueError(f"expected {p - 1} coordinates, got {len(coords)}")
        self.p = p
        self.coords = coords

    @classmethod
    def from_int(cls, p: int, n: int) -> "CycInt":
        return cls(p, (n,) + (0,) * (p - 2))

    @classmethod
    def from_group(cls, p: int, counts) -> "CycInt":
        """sum_t counts[t] z^t for t = 0..p-1."""
        return cls(p, _reduce_group(p, [int(c) for c in counts]))

    def group(self) -> list[int]:
        return list(self.coords) + [0]

    def _lift(self, other) -> "CycInt":
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise ValueError("mixed cyclotomic fields")
            return other
        if isinstance(other, (int, np.integer)):
            return CycInt.from_int(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.p, [-a for a in self.coords])

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return CycInt(self.p, [a * int(other) for a in self.coords])
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.p
        acc = [0] * p
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        acc[(i + j) % p] += a * b
        return CycInt(p, _reduce_group(p, acc))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "CycInt":
        result = CycInt.from_int(self.p, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.p, self.coords))

    def __bool__(self) -> bool:
        return any(self.coords)

    def __repr__(self) -> str:
        return f"CycInt({self.p}, {list(self.coords)})"

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def exact_div(self, n: int) -> "CycInt":
        """Divide by the rational integer n; raises if not exact."""
        out = []
        for c in self.coords:
            d, r = divmod(c, n)
            if r:
                raise ArithmeticError(f"{self!r} not divisible by {n}")
            out.append(d)
        return CycInt(self.p, out)

    def galois(self, t: int) -> "CycInt":
        """Image under z -> z^t, t a unit mod p."""
        p = self.p
        acc = [0] * p
        for i, c in enumerate(self.coords):
            acc[(i * t) % p] += c
        return CycInt(p, _reduce_group(p, acc))

    def conj(self) -> "CycInt":
        return self.galois(self.p - 1)

    def norm(self) -> int:
        """Absolute norm to Q."""
        acc = CycInt.from_int(self.p, 1)
        for t in range(1, self.p):
            acc = acc * self.galois(t)
        assert acc.is_rational()
        return acc.coords[0]

    def residue(self) -> int:
        """Image in Z[z]/(1 - z) = F_p."""
        return sum(self.coords) % self.p

    def div_one_minus_zeta(self) -> "CycInt":
        """Exact quotient by (1 - z); requires residue() == 0."""
        if self.residue():
            raise ArithmeticError("not divisible by 1 - zeta")
        return (self * _cofactor(self.p)).exact_div(self.p)

    def lambda_val(self):
        """Valuation at the prime (1 - z); INF for zero."""
        if not self:
            return INF
        p = self.p
        v = 0
        x = self
        # p = unit * (1 - z)^(p-1): strip whole powers of p first
        g = 0
        for c in x.coords:
            g = math.gcd(g, c)
        while g % p == 0:
            g //= p
            v += p - 1
            x = x.exact_div(p)
        while x.residue() == 0:
            x = x.div_one_minus_zeta()
            v += 1
        return v

    def ord_p(self):
        v = self.lambda_val()
        return v if v == INF else Fraction(v, self.p - 1)

    def ord_q(self, a: int):
        v = self.lambda_val()
        return v if v == INF else Fraction(v, a * (self.p - 1))

    def embed(self, j: int = 1) -> complex:
        """Evaluate at z = exp(2 pi i j / p)."""
        if not 1 <= j <= self.p - 1:
            raise ValueError("embedding index must lie in 1..p-1")
        w = cmath.exp(2j * math.pi * j / self.p)
        return sum(c * w**i for i, c in enumerate(self.coords))

    def to_list(self) -> list[int]:
        return list(self.coords)


@lru_cache(maxsize=None)
def _cofactor(p: int) -> CycInt:
    """prod_{i=2}^{p-1} (1 - z^i), so that (1 - z) * cofactor = p."""
    acc = CycInt.from_int(p, 1)
    for i in range(2, p):
        acc = acc * (1 - cyc_zeta_pow(p, i))
    return acc


class CycRat:
    """An element of Q(zeta_p): CycInt numerator over a positive integer."""

    __slots__ = ("num", "den")

    def __init__(self, num: CycInt, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = den
        for c in num.coords:
            g = math.gcd(g, c)
        if g > 1:
            num, den = num.exact_div(g), den // g
        self.num = num
        self.den = den

    @property
    def p(self) -> int:
        return self.num.p

    def __add__(self, other: "CycRat") -> "CycRat":
        other = _as_rat(other, self.p)
        return CycRat(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "CycRat") -> "CycRat":
        other = _as_rat(other, self.p)
        return CycRat(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other) -> "CycRat":
        other = _as_rat(other, self.p)
        return CycRat(self.num * other.num, self.den * other.den)

    def __truediv__(self, other) -> "CycRat":
        other = _as_rat(other, self.p)
        if not other.num:
            raise ZeroDivisionError("division by zero in Q(zeta)")
        # 1/x = (prod of the other conjugates) / norm
        co = CycInt.from_int(self.p, 1)
        for t in range(2, self.p):
            co = co * other.num.galois(t)
        norm = (other.num * co)
        assert norm.is_rational()
        return CycRat(self.num * co * other.den, self.den * norm.coords[0])

    def __eq__(self, other) -> bool:
        other = _as_rat(other, self.p)
        return self.num == other.num and self.den == other.den

    def __repr__(self) -> str:
        return f"CycRat({self.num!r}, {self.den})"

    def is_integral(self) -> bool:
        return self.den == 1

    def to_int(self) -> CycInt:
        if self.den != 1:
            raise ArithmeticError(f"{self!r} is not in Z[zeta_p]")
        return self.num


def _as_rat(x, p: int) -> CycRat:
    if isinstance(x, CycRat):
        return x
    if isinstance(x, CycInt):
        return CycRat(x)
    if isinstance(x, (int, np.integer)):
        return CycRat(CycInt.from_int(p, int(x)))
    raise TypeError(f"cannot coerce {type(x).__name__}")


def cyc_zeta_pow(p: int, t: int) -> CycInt:
    counts = [0] * p
    counts[t % p] = 1
    return CycInt.from_group(p, counts)


def cyc_conj(x: CycInt) -> CycInt:
    return x.conj()


def cyc_lambda_val(x: CycInt):
    return x.lambda_val()


def cyc_embed(x: CycInt, j: int) -> tuple[float, float]:
    z = x.embed(j)
    return z.real, z.imag


# --- vectorised helpers over arrays of power-basis coordinates -------------

def mul_arrays(p: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise product of (N, p-1) coordinate arrays in Z[zeta_p]."""
    n = a.shape[0]
    acc = np.zeros((n, p), dtype=np.int64)
    for i in range(p - 1):
        ai = a[:, i].astype(np.int64)
        for j in range(p - 1):
            acc[:, (i + j) % p] += ai * b[:, j]
    return acc[:, :p - 1] - acc[:, p - 1:p]
