"""Command-line entry point: case, sweep, verify, polygon, hasse, sing."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import BudgetExceeded, config
from .dwork import hasse_closed_le1
from .ff import ff_make, parse_elem
from .pipeline import cmd_case, cmd_sweep
from .polytope import chain_polygon, family_polytope, hodge_numbers, hodge_polygon, weight_counts
from .sing import hasse_symbolic, singular_search


def _coeff_list(text: str) -> list[str]:
    return [c.strip() for c in text.split(",") if c.strip()]


def _field_args(ap, need_n=True):
    ap.add_argument("--p", type=int, required=True, help="odd prime")
    ap.add_argument("--a", type=int, default=1, help="q = p^a")
    if need_n:
        ap.add_argument("--n", type=int, required=True, help="family parameter; n+1 variables")


def _common(ap):
    ap.add_argument("--cache-dir", default=None, help="Kloosterman table cache (default $DWORK_CACHE)")
    ap.add_argument("--budget-steps", type=int, default=None, help="enumeration step budget")
    ap.add_argument("--out", default=None, help="output file or directory")


def _emit(obj, out: str | None, name: str) -> None:
    text = json.dumps(obj, indent=2)
    print(text)
    if out:
        path = Path(out)
        if path.is_dir():
            path = path / name
        path.write_text(text + "\n")


def run_case(args) -> int:
    coeffs = _coeff_list(args.coeffs)
    if len(coeffs) != args.n + 1:
        raise ValueError(f"--coeffs needs {args.n + 1} entries, got {len(coeffs)}")
    report = cmd_case(args.p, args.a, args.n, coeffs, kmax=args.kmax,
                      full_degree=args.full_degree, cache_dir=args.cache_dir)
    _emit(report.to_json(), args.out, "case.json")
    return 0


def run_sweep(args) -> int:
    record = cmd_sweep(args.p, args.a, args.n, kmax=args.kmax, out=args.out, jobs=args.jobs,
                       cache_dir=args.cache_dir, budget=args.budget_steps)
    print(json.dumps(record.summary(), indent=2))
    return 1 if record.inconsistent() else 0


def run_verify(args) -> int:
    from .verify import TARGETS, run_target

    targets = list(TARGETS) if "all" in args.targets else args.targets
    for t in targets:
        if t not in TARGETS:
            raise ValueError(f"unknown target {t!r}; choose from {', '.join(TARGETS)}, all")
    ok = True
    for t in targets:
        for res in run_target(t):
            print(f"{t:<9} {res.line()}")
            for f in res.failures[:args.show]:
                print(f"          counterexample: {f}")
            if len(res.failures) > args.show:
                print(f"          ... {len(res.failures) - args.show} more")
            ok &= res.passed
            sys.stdout.flush()
    return 0 if ok else 1


def run_polygon(args) -> int:
    poly = family_polytope(args.n, args.variant)
    table = weight_counts(poly)
    if args.kind == "hodge":
        pg = hodge_polygon(hodge_numbers(table, poly.dim), poly.D)
    else:
        pg = chain_polygon(table)
    text = pg.to_text()
    print(text, end="" if text.endswith("\n") else "\n")
    if args.out:
        Path(args.out).write_text(text)
    return 0


def run_hasse(args) -> int:
    if args.coeffs:
        field_ = ff_make(args.p, args.a)
        coeffs = [parse_elem(field_, c) for c in _coeff_list(args.coeffs)]
        if len(coeffs) != args.n + 1:
            raise ValueError(f"--coeffs needs {args.n + 1} entries")
        print(hasse_closed_le1(args.n, args.p, coeffs).to_str())
        return 0
    h = hasse_symbolic(args.n, args.p)
    names = [f"a{i + 1}" for i in range(h.nvars)]
    for e, c in h.terms:
        mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(names, e) if k)
        print(f"{c} {mono or '1'}")
    return 0


def run_sing(args) -> int:
    pts = singular_search(hasse_symbolic(args.n, args.p), args.ext)
    lines = ["[" + ":".join(x.to_str() for x in pt) + "]" for pt in pts]
    print(f"{len(pts)} singular points over F_{args.p}^{args.ext}")
    for line in lines:
        print(line)
    if args.out:
        Path(args.out).write_text("\n".join(lines) + ("\n" if lines else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hassepoly", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("case", help="one family member: verdict, valuations, Hasse values")
    _field_args(c)
    c.add_argument("--coeffs", required=True, help="comma list of base-p digit strings")
    c.add_argument("--kmax", type=int, default=None)
    c.add_argument("--full-degree", action="store_true", help="compute all 2^(n+1) power sums")
    _common(c)
    c.set_defaults(func=run_case)

    s = sub.add_parser("sweep", help="exhaustive sweep over (F_q^*)^(n+1)")
    _field_args(s)
    s.add_argument("--kmax", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    _common(s)
    s.set_defaults(func=run_sweep)

    v = sub.add_parser("verify", help="run verification protocols")
    v.add_argument("targets", nargs="+", help="thm1.1 thm1.2 thm2.12 thm2.13 ex4.1 ex4.3 "
                                               "ex4.4 symmetry purity oracle, or all")
    v.add_argument("--show", type=int, default=5, help="counterexamples printed per check")
    _common(v)
    v.set_defaults(func=run_verify)

    g = sub.add_parser("polygon", help="Hodge or chain polygon vertices")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--variant", choices=("full", "face"), default="full")
    g.add_argument("--kind", choices=("hodge", "chain"), default="hodge")
    g.add_argument("--out", default=None)
    g.set_defaults(func=run_polygon)

    h = sub.add_parser("hasse", help="evaluate h_p(Delta_n, <=1) or dump its terms")
    _field_args(h)
    h.add_argument("--coeffs", default=None)
    h.set_defaults(func=run_hasse)

    x = sub.add_parser("sing", help="singular points of h_p(Delta_n, <=1) = 0")
    _field_args(x)
    x.add_argument("--ext", type=int, default=1, help="search over F_{p^ext}, ext <= 2")
    x.add_argument("--out", default=None)
    x.set_defaults(func=run_sing)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    saved = (config.step_budget, config.cache_dir)
    if getattr(args, "budget_steps", None):
        config.step_budget = args.budget_steps
    if getattr(args, "cache_dir", None):
        Path(args.cache_dir).mkdir(parents=True, exist_ok=True)
        config.cache_dir = Path(args.cache_dir)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        config.step_budget, config.cache_dir = saved


if __name__ == "__main__":
    sys.exit(main())
