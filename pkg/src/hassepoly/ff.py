"""Finite fields F_{p^k} built directly over F_p.

Elements are identified with their canonical index: the coefficient vector
(c_0, ..., c_{k-1}) in the power basis of the modulus, read as the base-p
integer c_0 + c_1 p + ... + c_{k-1} p^{k-1}.  Index 0 is zero and the prime
subfield F_p is exactly the indices 0..p-1.

Scalar arithmetic works on plain Python ints.  The ``*_arr`` methods work on
numpy index arrays and back the enumeration-heavy code in ``expsum``,
``dwork`` and ``sing``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

import numpy as np
import sympy

from .config import check_budget, config

MAX_DEGREE = 24
_CHUNK = 1 << 18
SMALL_FIELD = 1 << 16


# --- polynomials over F_p, coefficient lists low degree first -------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(m: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    k = len(m) - 1
    if k == 1:
        return True
    if m[0] % p == 0:
        return False
    x = [0, 1]
    if _psub(_ppowmod(x, p**k, m, p), x, p):
        return False
    for r in sympy.primefactors(k):
        h = _psub(_ppowmod(x, p ** (k // r), m, p), x, p)
        if len(_pgcd(m, h, p)) != 1:
            return False
    return True


def canonical_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k.

    Candidates are compared on (c_0, c_1, ..., c_{k-1}), constant term first.
    """
    for low in itertools.product(range(p), repeat=k):
        m = list(low) + [1]
        if is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# --- fields ---------------------------------------------------------------

class FField:
    """The field F_{p^k} = F_p[x]/(modulus)."""

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self._powers = [p**i for i in range(k)]
        self._mod_list = list(modulus)

    def __repr__(self) -> str:
        return f"FField(p={self.p}, k={self.k})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FField) and (self.p, self.k, self.modulus) == (
            other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    # -- scalar arithmetic on indices --

    def digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def from_digits(self, d) -> int:
        return sum((c % self.p) * w for c, w in zip(d, self._powers))

    def add(self, x: int, y: int) -> int:
        return self.from_digits([a + b for a, b in zip(self.digits(x), self.digits(y))])

    def neg(self, x: int) -> int:
        return self.from_digits([-a for a in self.digits(x)])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def scale(self, c: int, x: int) -> int:
        """Multiply by the prime-field integer c."""
        return self.from_digits([c * a for a in self.digits(x)])

    def _mul_poly(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        prod = _pmul(_trim(self.digits(x)), _trim(self.digits(y)), self.p)
        return self.from_digits(_pmod(prod, self._mod_list, self.p))

    @cached_property
    def _small_tables(self) -> tuple[list[int], list[int]] | None:
        """Plain-list exp/log tables for fields small enough to tabulate eagerly."""
        if self.q > SMALL_FIELD:
            return None
        g = self.generator
        exp = [1]
        for _ in range(self.q - 2):
            exp.append(self._mul_poly(exp[-1], g))
        log = [-1] * self.q
        for e, x in enumerate(exp):
            log[x] = e
        return exp, log

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        tabs = self._small_tables
        if tabs is not None:
            exp, log = tabs
            return exp[(log[x] + log[y]) % (self.q - 1)]
        return self._mul_poly(x, y)

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            x, e = self.inv(x), -e
        if x == 0:
            return 1 if e == 0 else 0
        tabs = self.__dict__.get("_small_tables")
        if tabs is not None:
            exp, log = tabs
            return exp[(log[x] * e) % (self.q - 1)]
        r = _ppowmod(_trim(self.digits(x)), e, self._mod_list, self.p)
        return self.from_digits(r)

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self.pow(x, self.q - 2)

    def frobenius(self, x: int) -> int:
        return self.pow(x, self.p)

    @cached_property
    def basis_traces(self) -> tuple[int, ...]:
        """Tr(x^j) for the power basis, j = 0..k-1."""
        out = []
        for j in range(self.k):
            y = self.from_digits([1 if i == j else 0 for i in range(self.k)])
            acc = 0
            for _ in range(self.k):
                acc = self.add(acc, y)
                y = self.frobenius(y)
            assert acc < self.p
            out.append(acc)
        return tuple(out)

    def trace(self, x: int) -> int:
        """Absolute trace to F_p, returned as an integer in [0, p)."""
        return sum(d * t for d, t in zip(self.digits(x), self.basis_traces)) % self.p

    def order(self, x: int) -> int:
        n = self.q - 1
        order = n
        for r in sympy.primefactors(n):
            while order % r == 0 and self.pow(x, order // r) == 1:
                order //= r
        return order

    @cached_property
    def generator(self) -> int:
        """Smallest-index element of multiplicative order q - 1."""
        for x in range(1, self.q):
            if self.order(x) == self.q - 1:
                return x
        raise AssertionError("no generator")  # pragma: no cover

    # -- element wrappers --

    def __call__(self, x) -> "FFElem":
        if isinstance(x, FFElem):
            if x.field != self:
                raise ValueError("element belongs to another field")
            return x
        if isinstance(x, (list, tuple)):
            return FFElem(self, self.from_digits(x))
        return FFElem(self, int(x) % self.p)

    def elem(self, index: int) -> "FFElem":
        if not 0 <= index < self.q:
            raise ValueError(f"index {index} outside {self!r}")
        return FFElem(self, index)

    def units(self) -> Iterator["FFElem"]:
        for i in range(1, self.q):
            yield FFElem(self, i)

    def elements(self) -> Iterator["FFElem"]:
        for i in range(self.q):
            yield FFElem(self, i)

    # -- tables --

    def _check_table(self) -> None:
        check_budget(self.q, config.table_budget, f"table for F_{self.p}^{self.k}")

    @cached_property
    def index_dtype(self):
        return np.int32 if self.q < 2**31 else np.int64

    @cached_property
    def exp_table(self) -> np.ndarray:
        """exp_table[e] = index of g^e, e = 0..q-2."""
        self._check_table()
        n = self.q - 1
        exp = np.empty(n, dtype=self.index_dtype)
        exp[0] = 1
        filled = 1
        g = self.generator
        while filled < n:
            count = min(filled, n - filled)
            mat = self.mul_matrix(self.pow(g, filled))
            for start in range(0, count, 1 << 22):
                stop = min(start + (1 << 22), count)
                exp[filled + start:filled + stop] = self.linear_map_arr(mat, exp[start:stop])
            filled += count
        return exp

    @cached_property
    def log_table(self) -> np.ndarray:
        """log_table[x] = e with g^e = x; log_table[0] = -1."""
        exp = self.exp_table
        log = np.empty(self.q, dtype=self.index_dtype)
        log[0] = -1
        log[exp] = np.arange(self.q - 1, dtype=self.index_dtype)
        return log

    @cached_property
    def trace_table(self) -> np.ndarray:
        """trace_table[x] = Tr(x) for every index x."""
        self._check_table()
        tr = np.zeros(1, dtype=np.uint8)
        for t in self.basis_traces:
            tr = np.concatenate([(tr + d * t) % self.p for d in range(self.p)]).astype(np.uint8)
        return tr

    @cached_property
    def trace_by_log(self) -> np.ndarray:
        """Tr(g^e) for e = 0..q-2."""
        return self.trace_table[self.exp_table]

    # -- vectorised index arithmetic --

    def digits_arr(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64).copy()
        out = np.empty(x.shape + (self.k,), dtype=np.int64)
        for j in range(self.k):
            x, out[..., j] = np.divmod(x, self.p)
        return out

    @cached_property
    def _codec(self):
        """Half-word tables for carry-free digit arithmetic.

        An element is re-encoded in base 2p so that the digitwise sum of two
        encodings never carries; decoding reduces every digit mod p.
        """
        h = (self.k + 1) // 2
        base = 2 * self.p
        if base**h > 1 << 22:
            return None
        enc_w = base ** np.arange(self.k, dtype=np.int64)
        enc_lo = self.digits_arr(np.arange(self.p**h)) @ enc_w
        enc_hi = enc_lo * base**h
        raw = np.arange(base**h, dtype=np.int64)
        dec = np.zeros(base**h, dtype=np.int64)
        for j in range(h):
            raw, d = np.divmod(raw, base)
            dec += (d % self.p) * self.p**j
        return h, enc_lo, enc_hi, dec

    def _encode(self, x: np.ndarray) -> np.ndarray:
        h, enc_lo, enc_hi, _ = self._codec
        hi, lo = np.divmod(np.asarray(x, dtype=np.int64), self.p**h)
        return enc_lo[lo] + enc_hi[hi]

    def _decode(self, code: np.ndarray) -> np.ndarray:
        h, _, _, dec = self._codec
        hi, lo = np.divmod(code, (2 * self.p) ** h)
        return dec[lo] + dec[hi] * self.p**h

    def linear_map_arr(self, mat: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Apply an F_p-linear map given on digit row vectors (d -> d @ mat)."""
        mat = np.asarray(mat, dtype=np.int64) % self.p
        x = np.asarray(x, dtype=np.int64)
        codec = self._codec
        if codec is None:
            out = np.empty(x.shape, dtype=np.int64)
            flat, res = x.ravel(), out.ravel()
            for s in range(0, flat.size, _CHUNK):
                d = self.digits_arr(flat[s:s + _CHUNK])
                res[s:s + _CHUNK] = self.from_digits_arr(d @ mat)
            return out
        h = codec[0]
        small = self.digits_arr(np.arange(self.p**h))
        lo_img = self.from_digits_arr(small[:, :h] @ mat[:h])
        nhi = self.p ** (self.k - h)
        hi_img = self.from_digits_arr(small[:nhi, :self.k - h] @ mat[h:])
        lo_code = self._encode(lo_img)
        hi_code = self._encode(hi_img)
        hi, lo = np.divmod(x, self.p**h)
        return self._decode(lo_code[lo] + hi_code[hi])

    def mul_matrix(self, c: int) -> np.ndarray:
        """Matrix of x -> c*x acting on digit row vectors."""
        rows = []
        for j in range(self.k):
            basis = self.from_digits([1 if i == j else 0 for i in range(self.k)])
            rows.append(self.digits(self.mul(c, basis)))
        return np.array(rows, dtype=np.int64)

    def mul_const_arr(self, c: int, x: np.ndarray) -> np.ndarray:
        return self.linear_map_arr(self.mul_matrix(c), x)

    def from_digits_arr(self, d: np.ndarray) -> np.ndarray:
        w = np.array(self._powers, dtype=np.int64)
        return (np.asarray(d, dtype=np.int64) % self.p) @ w

    def add_arr(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (np.asarray(x, dtype=np.int64) + y) % self.p
        if self._codec is not None:
            return self._decode(self._encode(x) + self._encode(y))
        return self.from_digits_arr(self.digits_arr(x) + self.digits_arr(y))

    def neg_arr(self, x: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (-np.asarray(x, dtype=np.int64)) % self.p
        return self.from_digits_arr(-self.digits_arr(x))

    def mul_arr(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        log = self.log_table
        n = self.q - 1
        e = (log[x].astype(np.int64) + log[y]) % n
        out = self.exp_table[e].astype(np.int64)
        return np.where((x == 0) | (y == 0), 0, out)

    def exp_arr(self, e: np.ndarray) -> np.ndarray:
        return self.exp_table[np.asarray(e, dtype=np.int64) % (self.q - 1)].astype(np.int64)

    def trace_arr(self, x: np.ndarray) -> np.ndarray:
        return self.trace_table[np.asarray(x, dtype=np.int64)]


@dataclass(frozen=True)
class FFElem:
    field: FField
    index: int

    def _coerce(self, other) -> int:
        if isinstance(other, FFElem):
            if other.field != self.field:
                raise ValueError("mixed fields")
            return other.index
        return self.field(other).index

    def __add__(self, other):
        return FFElem(self.field, self.field.add(self.index, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FFElem(self.field, self.field.sub(self.index, self._coerce(other)))

    def __rsub__(self, other):
        return FFElem(self.field, self.field.sub(self._coerce(other), self.index))

    def __neg__(self):
        return FFElem(self.field, self.field.neg(self.index))

    def __mul__(self, other):
        return FFElem(self.field, self.field.mul(self.index, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * FFElem(self.field, self.field.inv(self._coerce(other)))

    def __pow__(self, e: int):
        return FFElem(self.field, self.field.pow(self.index, e))

    def __eq__(self, other) -> bool:
        if isinstance(other, FFElem):
            return self.field == other.field and self.index == other.index
        if isinstance(other, int):
            return self.index == self.field(other).index
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.index))

    def __bool__(self) -> bool:
        return self.index != 0

    def __int__(self) -> int:
        return self.index

    def __repr__(self) -> str:
        return f"{self.to_str()}@F{self.field.p}^{self.field.k}"

    @property
    def digits(self) -> list[int]:
        return self.field.digits(self.index)

    def to_str(self) -> str:
        """Base-p digit string of the index, most significant digit first."""
        return "".join(str(d) for d in reversed(self.digits)).lstrip("0") or "0"

    def trace(self) -> int:
        return self.field.trace(self.index)


@lru_cache(maxsize=None)
def ff_make(p: int, k: int = 1) -> FField:
    """Field with p^k elements and the canonical modulus."""
    if p < 2 or not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= k <= MAX_DEGREE:
        raise ValueError(f"extension degree {k} outside 1..{MAX_DEGREE}")
    return FField(p, k, canonical_modulus(p, k))


def ff_trace(x: FFElem) -> FFElem:
    return ff_make(x.field.p, 1).elem(x.trace())


def ff_units(field: FField) -> Iterator[FFElem]:
    return field.units()


def parse_elem(field: FField, text: str) -> FFElem:
    """Inverse of FFElem.to_str."""
    text = text.strip()
    if not text or any(not c.isdigit() or int(c) >= field.p for c in text):
        raise ValueError(f"{text!r} is not a base-{field.p} digit string")
    return field.elem(int(text, field.p))


# --- embeddings F_{p^a} -> F_{p^{ak}} --------------------------------------

@lru_cache(maxsize=None)
def embedding_root(small: FField, big: FField) -> int:
    """Index in ``big`` of the image of the generator x of ``small``.

    Identity when the fields coincide; otherwise the smallest-index root of
    the small modulus inside the big field.
    """
    if small.p != big.p or big.k % small.k:
        raise ValueError(f"{small!r} does not embed in {big!r}")
    if small == big:
        return small.p if small.k > 1 else 0
    if small.k == 1:
        # root of the linear modulus x + c_0
        return (-small.modulus[0]) % small.p
    # the subfield of order p^a is generated by g^((Q-1)/(q-1))
    h = big.pow(big.generator, (big.q - 1) // (small.q - 1))
    roots = []
    y = 1
    for _ in range(small.q - 1):
        acc = 0
        for c in reversed(small.modulus):
            acc = big.add(big.mul(acc, y), c)
        if acc == 0:
            roots.append(y)
        y = big.mul(y, h)
    return min(roots)


def embed(x: FFElem, big: FField) -> FFElem:
    """Image of x under the fixed embedding of its field into ``big``."""
    small = x.field
    if small == big:
        return x
    if small.k == 1:
        return big.elem(x.index)
    theta = embedding_root(small, big)
    acc = 0
    for c in reversed(x.digits):
        acc = big.add(big.mul(acc, theta), c)
    return big.elem(acc)
