"""Single-case and sweep pipelines tying sums, polygons and Hasse values together."""

from __future__ import annotations

import csv
import itertools
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .config import BudgetExceeded
from .cyclo import INF
from .dwork import hasse_closed_full, hasse_closed_le1, nondegenerate
from .expsum import FamilySpec, klo_table, power_sums
from .ff import FFElem, ff_make, parse_elem
from .lfun import (LPolyCoeffs, NonIntegralCoefficient, Polygon, ValuationProfile,
                   coeffs_from_power_sums, empirical_gnp, end_valuation_ok, fe_complete,
                   fe_unit_candidates, functional_equation_check,
                   newton_polygon, purity_deviation, symmetry_complete, vertex_coincidence)
from .polytope import family_hodge_polygon


def default_kmax(n: int) -> int:
    """Largest break point of HP(Delta_n) in the lower half; the rest follows by symmetry."""
    d = 2 ** (n + 1)
    return max(int(x) for x, _ in family_hodge_polygon(n).break_points() if x <= d // 2)


@dataclass
class HasseReport:
    spec: FamilySpec
    nondegenerate: bool
    h_le1: FFElem
    h_full: FFElem | None
    profile: ValuationProfile | None = None
    np_eq_hp: bool | None = None
    newton: Polygon | None = None
    kmax: int = 0
    fe_ok: bool | None = None
    purity: float | None = None
    end_ok: bool | None = None
    coeffs: LPolyCoeffs | None = field(default=None, repr=False)
    full: LPolyCoeffs | None = field(default=None, repr=False)
    fe_unit_search: int | None = None
    ms: float = 0.0

    @property
    def ordinary(self) -> bool:
        return bool(self.np_eq_hp)

    @property
    def consistent(self) -> bool | None:
        """h != 0 iff NP = HP, on non-degenerate input (None otherwise)."""
        if not self.nondegenerate:
            return None
        h = self.h_full if self.h_full is not None else self.h_le1
        return bool(h) == bool(self.np_eq_hp)

    def breakpoints(self) -> list[dict]:
        if self.profile is None:
            return []
        out = []
        for x, _ in family_hodge_polygon(self.spec.n).break_points():
            i = int(x)
            v = self.profile.values.get(i)
            if v is None:
                continue
            num, den = (None, None) if v == INF else (Fraction(v).numerator, Fraction(v).denominator)
            out.append({"index": i, "ord_num": num, "ord_den": den,
                        "source": self.profile.sources.get(i, "direct")})
        return out

    def to_json(self) -> dict:
        s = self.spec
        obj = {
            "spec": {"p": s.p, "a": s.a, "n": s.n, "coeffs": [c.to_str() for c in s.coeffs]},
            "nondegenerate": self.nondegenerate,
            "h_le1": self.h_le1.to_str(),
            "h_full": None if self.h_full is None else self.h_full.to_str(),
            "breakpoints": self.breakpoints(),
            "np_eq_hp": self.np_eq_hp,
            "ms": round(self.ms, 3),
        }
        if self.newton is not None:
            obj["kmax"] = self.kmax
            obj["newton"] = [[str(x), str(y)] for x, y in self.newton.vertices]
        if self.fe_ok is not None:
            obj["functional_equation"] = self.fe_ok
            obj["end_valuation"] = self.end_ok
            obj["purity_deviation"] = self.purity
        if self.fe_unit_search is not None:
            obj["fe_unit_candidates"] = self.fe_unit_search
        return obj


def cmd_case(p: int, a: int, n: int, coeffs, kmax: int | None = None,
             full_degree: bool = False, cache_dir=None) -> HasseReport:
    """Non-degeneracy, power sums, coefficients, symmetry completion and verdict for one member."""
    t0 = time.perf_counter()
    field_ = ff_make(p, a)
    elems = [c if isinstance(c, FFElem) else
             (parse_elem(field_, c) if isinstance(c, str) else field_(c)) for c in coeffs]
    spec = FamilySpec.make(p, a, n, elems)
    nd = nondegenerate(n, spec.coeffs)
    h_le1 = hasse_closed_le1(n, p, spec.coeffs)
    h_full = hasse_closed_full(n, p, spec.coeffs) if n in (2, 3) else None
    report = HasseReport(spec, nd, h_le1, h_full)
    if nd:
        d = 2 ** (n + 1)
        k = d if full_degree else (kmax or default_kmax(n))
        k = min(k, d)
        sums = power_sums(spec, k, cache_dir=cache_dir)
        L = coeffs_from_power_sums(sums, n, p, a)
        report.kmax = k
        report.coeffs = L
        if k == d:
            profile = L.profile()
            full = L
        else:
            profile = symmetry_complete(L)
            full = None
            if k >= d // 2:
                try:
                    full = fe_complete(L)
                except NonIntegralCoefficient:
                    full = None
                except ArithmeticError:
                    # A_{d/2} = 0 fixes A_d only up to a root of unity; keep the
                    # completion only when purity singles out one unit
                    cands = fe_unit_candidates(L)
                    full = cands[0] if len(cands) == 1 else None
                    report.fe_unit_search = len(cands)
        report.full = full
        if full is not None:
            report.fe_ok = bool(functional_equation_check(full))
            report.end_ok = end_valuation_ok(full)
            report.purity = purity_deviation(full)
            if full is not L:
                # completed upper half: valuations from the reconstructed coefficients
                prof = full.profile()
                for i in range(k + 1, d + 1):
                    profile.values.setdefault(i, prof.values[i])
                    profile.sources.setdefault(i, "functional-equation")
        hp = family_hodge_polygon(n)
        report.profile = profile
        report.newton = newton_polygon(profile)
        report.np_eq_hp = vertex_coincidence(profile, hp).np_eq_hp
    report.ms = (time.perf_counter() - t0) * 1000
    return report


@dataclass
class SweepRecord:
    p: int
    a: int
    n: int
    reports: list[HasseReport]

    @property
    def ordinary(self) -> int:
        return sum(1 for r in self.reports if r.nondegenerate and r.np_eq_hp)

    @property
    def non_ordinary(self) -> int:
        return sum(1 for r in self.reports if r.nondegenerate and not r.np_eq_hp)

    @property
    def degenerate(self) -> int:
        return sum(1 for r in self.reports if not r.nondegenerate)

    def empirical_gnp(self) -> Polygon | None:
        """Pointwise minimum of the observed Newton polygons (evidence only)."""
        polys = [r.newton for r in self.reports if r.newton is not None]
        return empirical_gnp(polys) if polys else None

    def inconsistent(self) -> list[HasseReport]:
        return [r for r in self.reports if r.consistent is False]

    def summary(self) -> dict:
        gnp = self.empirical_gnp()
        return {
            "p": self.p, "a": self.a, "n": self.n, "size": len(self.reports),
            "ordinary": self.ordinary, "non_ordinary": self.non_ordinary,
            "degenerate": self.degenerate, "inconsistent": len(self.inconsistent()),
            "empirical_gnp": None if gnp is None else str(gnp),
            "gnp_eq_hp": None if gnp is None else gnp == family_hodge_polygon(self.n),
        }

    def write(self, out_dir) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"sweep_p{self.p}_a{self.a}_n{self.n}"
        with open(out / f"{stem}.jsonl", "w") as fh:
            for r in self.reports:
                fh.write(json.dumps(r.to_json()) + "\n")
        summary = self.summary()
        with open(out / f"{stem}_summary.csv", "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(summary))
            writer.writeheader()
            writer.writerow(summary)
        gnp = self.empirical_gnp()
        if gnp is not None:
            (out / f"{stem}_gnp.txt").write_text(gnp.to_text())
        return out


def sweep_vectors(p: int, a: int, n: int):
    """All coefficient vectors in (F_q^*)^(n+1), in canonical index order."""
    field_ = ff_make(p, a)
    units = [field_.elem(i) for i in range(1, field_.q)]
    return itertools.product(units, repeat=n + 1)


def cmd_sweep(p: int, a: int, n: int, kmax: int | None = None, out=None,
              jobs: int = 1, cache_dir=None, budget: int | None = None) -> SweepRecord:
    """Exhaustive sweep over (F_q^*)^(n+1); degenerate vectors are reported, not skipped."""
    q = p**a
    size = (q - 1) ** (n + 1)
    if budget is not None and size > budget:
        raise BudgetExceeded(f"sweep of {size} vectors exceeds budget {budget}")
    k = kmax or default_kmax(n)
    # build shared tables before any fan-out
    for j in range(1, k + 1):
        klo_table(p, a, j, cache_dir)
    vectors = list(sweep_vectors(p, a, n))

    def run(vec):
        return cmd_case(p, a, n, vec, kmax=k, cache_dir=cache_dir)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run, vectors))
    else:
        reports = [run(v) for v in vectors]
    record = SweepRecord(p, a, n, reports)
    if out is not None:
        record.write(out)
    return record
