"""Singular points of the Hasse hypersurface h_p(Delta_n, <=1) = 0 over small
fields, with a scalar re-check of h and its gradient at each point found.

    python3 demos/singular_points.py
"""

from hassepoly import gradient, hasse_symbolic, singular_search

for p, n, ext in ((3, 2, 2), (5, 2, 1), (7, 3, 1)):
    h = hasse_symbolic(n, p)
    pts = singular_search(h, ext)
    print(f"p={p} n={n} over F_{p}^{ext}: {len(h.terms)} terms, {len(pts)} singular points")
    for pt in pts[:5]:
        vals = [h(pt)] + [g(pt) for g in gradient(h)]
        print("   [" + ":".join(x.to_str() for x in pt) + "]",
              "all zero" if all(v == v.field(0) for v in vals) else "NOT singular")
