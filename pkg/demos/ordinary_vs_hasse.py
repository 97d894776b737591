"""Walk through one n = 2 family member over F_7: power sums, the L-polynomial,
its Newton polygon against the Hodge polygon, and the Hasse polynomial value.

    python3 demos/ordinary_vs_hasse.py
"""

import itertools

from hassepoly import cmd_case, family_hodge_polygon, ff_make, hasse_closed_le1, nondegenerate

P, N = 7, 2
F = ff_make(P, 1)

print(f"Hodge polygon of the n={N} family:", family_hodge_polygon(N))

# find one ordinary and one non-ordinary non-degenerate vector
seen = {}
for coeffs in itertools.product(list(F.units()), repeat=N + 1):
    if not nondegenerate(N, coeffs):
        continue
    ordinary = hasse_closed_le1(N, P, coeffs) != F(0)
    seen.setdefault(ordinary, coeffs)
    if len(seen) == 2:
        break

for ordinary, coeffs in sorted(seen.items()):
    r = cmd_case(P, 1, N, list(coeffs), full_degree=True)
    label = "ordinary" if ordinary else "non-ordinary"
    print(f"\n{label}: a = {[c.to_str() for c in coeffs]}")
    print("  h_p(a)         =", r.h_le1.to_str())
    print("  Newton polygon =", r.newton)
    print("  NP == HP       =", r.np_eq_hp)
    print(f"  purity dev     = {r.purity:.2e}")
