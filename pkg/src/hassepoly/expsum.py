"""Exponential sums S*_k(f) over the torus, computed exactly in Z[zeta_p].

Two independent routes:

* ``expsum_direct`` enumerates every unit tuple of F_{q^k}^m.  Monomials are
  evaluated through discrete logs and the trace is taken term by term.
* ``expsum_family`` handles the family
      f = sum_i a_i x_{n+1} (x_i + 1/x_i) + a_{n+1} x_{n+1} + 1/x_{n+1}
  by summing over x_{n+1} = y first; each inner sum over x_i is the
  Kloosterman-type value K(a_i y) read from a precomputed table.
"""

from __future__ import annotations

import itertools
import struct
from dataclasses import dataclass
from dataclasses import field as dc_field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import cyclo
from .config import check_budget, config
from .cyclo import CycInt
from .ff import FField, FFElem, embed, ff_make

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class LaurentPoly:
    """f = sum of coeff * x^exponent over F_q, with distinct exponents."""

    m: int
    terms: tuple[tuple[Exponent, FFElem], ...]

    def __post_init__(self):
        seen = set()
        field = None
        for exps, c in self.terms:
            if len(exps) != self.m:
                raise ValueError(f"exponent {exps} is not in Z^{self.m}")
            if exps in seen:
                raise ValueError(f"repeated exponent {exps}")
            if not c:
                raise ValueError(f"zero coefficient at {exps}")
            if field is not None and c.field != field:
                raise ValueError("coefficients from different fields")
            seen.add(exps)
            field = c.field
        if not self.terms:
            raise ValueError("empty Laurent polynomial")

    @classmethod
    def from_dict(cls, terms: dict) -> "LaurentPoly":
        items = tuple((tuple(int(v) for v in e), c) for e, c in terms.items() if c)
        m = len(items[0][0]) if items else 0
        return cls(m, items)

    @property
    def field(self) -> FField:
        return self.terms[0][1].field

    @property
    def exponents(self) -> list[Exponent]:
        return [e for e, _ in self.terms]

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.m, tuple((e, -c) for e, c in self.terms))

    def frobenius(self) -> "LaurentPoly":
        """Raise every coefficient to the p-th power."""
        return LaurentPoly(self.m, tuple((e, c ** c.field.p) for e, c in self.terms))

    def restrict(self, keep) -> "LaurentPoly":
        return LaurentPoly(self.m, tuple((e, c) for e, c in self.terms if e in keep))

    def partial(self, i: int) -> "LaurentPoly | None":
        """Formal derivative in x_i; None when it vanishes identically."""
        out = []
        for e, c in self.terms:
            d = c * (e[i] % c.field.p)
            if d:
                e2 = list(e)
                e2[i] -= 1
                out.append((tuple(e2), d))
        return LaurentPoly(self.m, tuple(out)) if out else None


@dataclass(frozen=True)
class FamilySpec:
    """Coefficients (a_1, ..., a_{n+1}) of one member of the family over F_{p^a}."""

    p: int
    a: int
    n: int
    coeffs: tuple[FFElem, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if len(self.coeffs) != self.n + 1:
            raise ValueError(f"need {self.n + 1} coefficients")
        field = ff_make(self.p, self.a)
        for c in self.coeffs:
            if c.field != field:
                raise ValueError(f"coefficient {c!r} not in {field!r}")
            if not c:
                raise ValueError("family coefficients must be nonzero")

    @classmethod
    def make(cls, p: int, a: int, n: int, coeffs) -> "FamilySpec":
        field = ff_make(p, a)
        return cls(p, a, n, tuple(field(c) if not isinstance(c, FFElem) else c for c in coeffs))

    @property
    def q(self) -> int:
        return self.p**self.a

    def to_laurent(self) -> LaurentPoly:
        n = self.n
        m = n + 1
        terms = []
        for i in range(n):
            for sign in (1, -1):
                e = [0] * m
                e[i] = sign
                e[n] = 1
                terms.append((tuple(e), self.coeffs[i]))
        top = [0] * m
        top[n] = 1
        terms.append((tuple(top), self.coeffs[n]))
        bottom = [0] * m
        bottom[n] = -1
        terms.append((tuple(bottom), ff_make(self.p, self.a)(1)))
        return LaurentPoly(m, tuple(terms))


def _sum_from_counts(p: int, counts) -> CycInt:
    return CycInt.from_group(p, [int(c) for c in counts])


def expsum_direct(f: LaurentPoly, k: int) -> CycInt:
    """S*_k(f) by enumerating all of (F_{q^k}^*)^m."""
    base = f.field
    p = base.p
    big = ff_make(p, base.k * k)
    n_units = big.q - 1
    check_budget(n_units**f.m, config.step_budget, "direct enumeration")
    tr = big.trace_by_log.astype(np.int64)
    log = big.log_table
    V = np.array(f.exponents, dtype=np.int64)
    L = np.array([int(log[embed(c, big).index]) for _, c in f.terms], dtype=np.int64)

    m = f.m
    inner = 1
    while inner < m and n_units ** (inner + 1) <= 1 << 20:
        inner += 1
    outer = m - inner
    # exponent contribution of the inner coordinates, one flat grid per term
    grids = np.meshgrid(*[np.arange(n_units, dtype=np.int64)] * inner, indexing="ij")
    inner_part = [sum(V[j, outer + i] * grids[i] for i in range(inner)).ravel() % n_units
                  for j in range(len(L))]
    del grids
    counts = np.zeros(p, dtype=np.int64)
    for o in itertools.product(range(n_units), repeat=outer):
        total = np.zeros(inner_part[0].shape, dtype=np.int64)
        for j in range(len(L)):
            shift = (L[j] + sum(V[j, i] * o[i] for i in range(outer))) % n_units
            total += tr[(inner_part[j] + shift) % n_units]
        counts += np.bincount(total % p, minlength=p)
    return _sum_from_counts(p, counts)


# --- Kloosterman-type tables ----------------------------------------------

MAGIC = b"KLTB"


@dataclass
class KloTable:
    """K(b) = sum over units x of zeta^Tr(b (x + 1/x)) for every b in F_{q^k}."""

    p: int
    a: int
    k: int
    values: np.ndarray  # shape (q^k, p-1), power-basis coordinates
    _by_log: np.ndarray | None = dc_field(default=None, repr=False, compare=False)

    @property
    def field(self) -> FField:
        return ff_make(self.p, self.a * self.k)

    @property
    def width(self) -> int:
        return self.values.dtype.itemsize

    @property
    def max_abs(self) -> int:
        """Largest coordinate over b != 0 (K(0) = q^k - 1 is never multiplied)."""
        if len(self) == 1:
            return 0
        return int(np.abs(self.values[1:]).max())

    @property
    def by_log(self) -> np.ndarray:
        """Rows reordered so that row e holds K(g^e)."""
        if self._by_log is None:
            self._by_log = self.values[self.field.exp_table]
        return self._by_log

    def __getitem__(self, b: int) -> CycInt:
        return CycInt(self.p, self.values[int(b)].tolist())

    def __len__(self) -> int:
        return self.values.shape[0]

    def filename(self) -> str:
        return f"klo_p{self.p}_a{self.a}_k{self.k}.tbl"

    def save(self, directory) -> Path:
        path = Path(directory) / self.filename()
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(MAGIC + struct.pack("<4I", self.p, self.a, self.k, self.width))
            self.values.astype(f"<i{self.width}").tofile(fh)
        return path

    @classmethod
    def load(cls, path) -> "KloTable":
        with open(path, "rb") as fh:
            head = fh.read(20)
            if head[:4] != MAGIC:
                raise ValueError(f"{path}: bad magic {head[:4]!r}")
            p, a, k, width = struct.unpack("<4I", head[4:])
            if width not in (4, 8):
                raise ValueError(f"{path}: bad width {width}")
            values = np.fromfile(fh, dtype=f"<i{width}")
        q = p ** (a * k)
        if values.size != q * (p - 1):
            raise ValueError(f"{path}: truncated table")
        return cls(p, a, k, values.reshape(q, p - 1))


def _x_plus_inverse_counts(field: FField) -> np.ndarray:
    """c(t) = #{x unit : x + 1/x = t}."""
    n = field.q - 1
    exp = field.exp_table
    counts = np.zeros(field.q, dtype=np.int32 if field.q < 2**31 else np.int64)
    step = 1 << 21
    for start in range(0, n, step):
        e = np.arange(start, min(start + step, n), dtype=np.int64)
        t = field.add_arr(exp[e], exp[(-e) % n])
        counts += np.bincount(t, minlength=field.q).astype(counts.dtype)
    return counts


def x_plus_inverse_counts(field: FField) -> np.ndarray:
    return _x_plus_inverse_counts(field)


def _character_transform(values: np.ndarray, p: int, ndigits: int) -> np.ndarray:
    """sum_s values[s] zeta^<b, s> for all b, digits dotted coordinatewise.

    Works in group-ring coordinates (length p, zeta^p = 1).  The input is
    non-negative and the output entries stay bounded by sum(values).
    """
    q = values.size
    dtype = np.int32 if int(values.sum()) < 2**31 else np.int64
    A = np.zeros((q, p), dtype=dtype)
    A[:, 0] = values
    block = max(1, (1 << 22) // p)
    for j in range(ndigits):
        pre, post = p ** (ndigits - 1 - j), p**j
        V = A.reshape(pre, p, post, p)
        # transform one slab at a time so the scratch space stays small
        if pre >= post:
            for lo in range(0, pre, max(1, block // post)):
                slab = V[lo:lo + max(1, block // post)]
                slab[...] = _dft_axis(slab, p)
        else:
            for lo in range(0, post, block):
                slab = V[:, :, lo:lo + block]
                slab[...] = _dft_axis(slab, p)
    return A


def _dft_axis(V: np.ndarray, p: int) -> np.ndarray:
    """out[:, b, :, r + b*s] += V[:, s, :, r] for the digit axis 1."""
    out = np.zeros_like(V)
    for b in range(p):
        dst = out[:, b]
        for s in range(p):
            src = V[:, s]
            shift = (b * s) % p
            if shift == 0:
                dst += src
            else:
                dst[:, :, shift:] += src[:, :, :p - shift]
                dst[:, :, :shift] += src[:, :, p - shift:]
    return out


def _build_klo(p: int, a: int, k: int) -> KloTable:
    field = ff_make(p, a * k)
    check_budget(field.q, config.table_budget, f"Kloosterman table p={p} a={a} k={k}")
    counts = _x_plus_inverse_counts(field)
    # Tr(b t) = <digits(b), digits(G t)> with G the trace-form Gram matrix
    beta = field.p if field.k > 1 else 0
    gram = np.array([[field.trace(field.pow(beta, i + j)) for j in range(field.k)]
                     for i in range(field.k)], dtype=np.int64)
    permuted = np.zeros(field.q, dtype=counts.dtype)
    step = 1 << 22
    for start in range(0, field.q, step):
        idx = np.arange(start, min(start + step, field.q), dtype=np.int64)
        permuted[field.linear_map_arr(gram, idx)] = counts[start:start + step]
    del counts
    grp = _character_transform(permuted, p, field.k)
    del permuted
    width = np.int32 if field.q < 2**31 else np.int64
    values = grp[:, :p - 1].astype(width)
    values -= grp[:, p - 1:p]
    del grp
    return KloTable(p, a, k, values)


@lru_cache(maxsize=16)
def _klo_cached(p: int, a: int, k: int, cache_dir: str | None) -> KloTable:
    if cache_dir:
        path = Path(cache_dir) / f"klo_p{p}_a{a}_k{k}.tbl"
        if path.exists():
            return KloTable.load(path)
    table = _build_klo(p, a, k)
    if cache_dir:
        table.save(cache_dir)
    return table


def klo_table(p: int, a: int, k: int, cache_dir=None) -> KloTable:
    cache_dir = cache_dir or config.cache_dir
    return _klo_cached(p, a, k, str(cache_dir) if cache_dir else None)


def expsum_family(spec: FamilySpec, k: int, table: KloTable | None = None) -> CycInt:
    """S*_k of a family member through the Kloosterman factorization."""
    p, n = spec.p, spec.n
    field = ff_make(p, spec.a * k)
    table = table or klo_table(p, spec.a, k)
    if (table.p, table.a, table.k) != (p, spec.a, k):
        raise ValueError("Kloosterman table does not match the requested sum")
    n_units = field.q - 1
    log = field.log_table
    logs = [int(log[embed(c, field).index]) for c in spec.coeffs]
    tr = field.trace_by_log
    K = table.by_log

    bound = max(table.max_abs, 1)
    prod_bound = bound * (2 * (p - 1) * bound) ** (n - 1)
    exact = prod_bound < 2**62
    chunk = max(1, min(1 << 20, (2**62 // prod_bound) if exact else 1 << 16))

    acc = [[0] * (p - 1) for _ in range(p)]
    for start in range(0, n_units, chunk):
        size = min(chunk, n_units - start)
        # 1/y = g^(-e): walk the trace table backwards
        inv_tr = _cyclic(tr, -start - size + 1, size)[::-1]
        phase = (_cyclic(tr, start + logs[n], size).astype(np.int64) + inv_tr) % p
        dtype = np.int64 if exact else object
        prod = _cyclic(K, start + logs[0], size).astype(dtype)
        for i in range(1, n):
            factor = _cyclic(K, start + logs[i], size).astype(dtype)
            prod = cyclo.mul_arrays(p, prod, factor) if exact else _mul_object(p, prod, factor)
        for s in range(p):
            part = prod[phase == s].sum(axis=0)
            for i in range(p - 1):
                acc[s][i] += int(part[i])
    total = CycInt.from_int(p, 0)
    for s in range(p):
        total = total + cyclo.cyc_zeta_pow(p, s) * CycInt(p, acc[s])
    return total


def _cyclic(arr: np.ndarray, start: int, size: int) -> np.ndarray:
    """arr[(start + i) % len(arr)] for i < size, as slices where possible."""
    n = len(arr)
    start %= n
    stop = start + size
    if stop <= n:
        return arr[start:stop]
    return np.concatenate([arr[start:], arr[:stop - n]])


def _mul_object(p: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    acc = np.zeros((n, p), dtype=object)
    for i in range(p - 1):
        for j in range(p - 1):
            acc[:, (i + j) % p] += a[:, i] * b[:, j]
    return acc[:, :p - 1] - acc[:, p - 1:p]


def power_sums(spec: FamilySpec, kmax: int, direct: bool = False, cache_dir=None) -> list[CycInt]:
    """[S*_1, ..., S*_kmax] for a family member."""
    if direct:
        f = spec.to_laurent()
        return [expsum_direct(f, k) for k in range(1, kmax + 1)]
    return [expsum_family(spec, k, klo_table(spec.p, spec.a, k, cache_dir))
            for k in range(1, kmax + 1)]
