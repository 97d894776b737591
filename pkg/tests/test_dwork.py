import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from hassepoly.dwork import (artin_hasse, family_face_poly, frob_matrix, hasse_closed_full,
                             hasse_closed_le1, hasse_minor, hasse_product, hasse_terms,
                             nondeg_witness_search, nondegenerate)
from hassepoly.expsum import FamilySpec, LaurentPoly
from hassepoly.ff import ff_make
from hassepoly.pipeline import cmd_case
from hassepoly.polytope import family_polytope


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_artin_hasse_against_series(p):
    t = sympy.Symbol("t")
    m = 12
    expo = sum(t ** (p**i) / sympy.Integer(p**i) for i in range(4) if p**i <= m)
    series = sympy.series(sympy.exp(expo), t, 0, m + 1).removeO()
    ah = artin_hasse(p, m)
    for k in range(m + 1):
        c = sympy.Rational(series.coeff(t, k))
        assert ah[k] == Fraction(int(c.p), int(c.q))
        assert ah[k].denominator % p != 0


def test_artin_hasse_residues_below_p():
    # E_p(t) = exp(t) mod t^p, so lambda_m = 1/m! for m < p
    ah = artin_hasse(7, 6)
    for m in range(7):
        assert ah.residue(m) == pow(math.factorial(m), -1, 7)


@pytest.mark.parametrize("n,p", [(2, 3), (3, 5), (2, 7), (4, 5), (3, 7)])
def test_hasse_term_count(n, p):
    assert len(hasse_terms(n, p)) == math.comb(n + (p - 1) // 2, n)
    assert all(sum(e) == p - 1 for e, _ in hasse_terms(n, p))


def test_p3_is_a_diagonal_quadratic_form():
    # a_1^2 + ... + a_n^2 + a_{n+1}^2 / 2 over F_3
    terms = dict(hasse_terms(3, 3))
    assert terms == {(2, 0, 0, 0): 1, (0, 2, 0, 0): 1, (0, 0, 2, 0): 1, (0, 0, 0, 2): 2}


def test_closed_form_value():
    F = ff_make(7, 1)
    a = [F(4), F(2), F(1)]
    # direct evaluation of the sum over v1 + v2 <= 3
    acc = 0
    for v1, v2 in itertools.product(range(4), repeat=2):
        if v1 + v2 <= 3:
            num = 4 ** (2 * v1) * 2 ** (2 * v2)
            den = (math.factorial(v1) * math.factorial(v2)) ** 2 * math.factorial(6 - 2 * v1 - 2 * v2)
            acc += num * pow(den, -1, 7)
    assert hasse_closed_le1(2, 7, a) == F(acc % 7)
    assert hasse_closed_full(2, 7, a) == hasse_closed_le1(2, 7, a)
    with pytest.raises(ValueError):
        hasse_closed_full(4, 7, a + [F(1), F(1)])


@pytest.mark.parametrize("p,a,n", [(3, 1, 2), (5, 1, 3), (7, 1, 2), (3, 2, 2), (3, 2, 4)])
def test_wilson_diagonal_identity(p, a, n):
    F = ff_make(p, a)
    poly = family_polytope(n, "face")
    rng = random.Random(p * 100 + n)
    for _ in range(10):
        coeffs = [F.elem(rng.randrange(1, F.q)) for _ in range(n + 1)]
        g = family_face_poly(FamilySpec.make(p, a, n, coeffs))
        rhs = hasse_closed_le1(n, p, coeffs)
        for c in coeffs[:n]:
            rhs = rhs * c ** (2 * (p - 1))
        assert hasse_minor(poly, g, 1) == rhs


def test_minor_zero_is_one():
    F = ff_make(5, 1)
    f = FamilySpec.make(5, 1, 2, [F(1), F(2), F(3)]).to_laurent()
    assert hasse_minor(family_polytope(2), f, 0) == F(1)


def test_frobenius_matrix_is_block_triangular_by_weight():
    # entries with p w(s) < w(r) vanish, so the weight-0 column is (1, 0, ..., 0)
    F = ff_make(5, 1)
    f = FamilySpec.make(5, 1, 2, [F(1), F(2), F(3)]).to_laurent()
    M = frob_matrix(family_polytope(2), f, 1)
    assert M.weights[0] == 0 and M.points[0] == (0, 0, 0)
    assert [row[0] for row in M.entries] == [1] + [0] * (len(M.points) - 1)


@pytest.mark.parametrize("coeffs", [(4, 2, 1), (4, 4, 6), (1, 2, 3), (6, 3, 2)])
def test_full_minors_agree_with_the_l_function(coeffs):
    p = 7
    F = ff_make(p, 1)
    a = [F(c) for c in coeffs]
    if not nondegenerate(2, a):
        pytest.skip("degenerate")
    f = FamilySpec.make(p, 1, 2, a).to_laurent()
    report = cmd_case(p, 1, 2, a)
    assert bool(hasse_product(family_polytope(2), f)) == report.np_eq_hp


def test_nondegeneracy_sign_criterion():
    F = ff_make(5, 1)
    # 2 + 4 - 2 ... : (1, 2, 1) has -2*1 - 2*2 + 1 = -5 = 0
    assert not nondegenerate(2, [F(1), F(2), F(1)])
    assert nondegenerate(2, [F(1), F(1), F(2)])
    with pytest.raises(ValueError):
        nondegenerate(2, [F(1), F(0), F(2)])


@pytest.mark.parametrize("p", [3, 5])
def test_witness_search_is_one_sided(p):
    F = ff_make(p, 1)
    poly = family_polytope(2)
    for a in itertools.product(list(F.units()), repeat=3):
        f = FamilySpec.make(p, 1, 2, a).to_laurent()
        w = nondeg_witness_search(f, 2, poly)
        assert (w is None) == nondegenerate(2, a)


def test_witness_is_a_common_zero():
    F = ff_make(5, 1)
    a = [F(1), F(2), F(1)]
    f = FamilySpec.make(5, 1, 2, a).to_laurent()
    w = nondeg_witness_search(f)
    assert w is not None
    g = f.restrict(set(w.face))
    big = w.point[0].field
    from hassepoly.ff import embed
    for i in range(3):
        d = g.partial(i)
        if d is None:
            continue
        val = big(0)
        for e, c in d.terms:
            term = embed(c, big)
            for x, k in zip(w.point, e):
                term = term * x**k
            val = val + term
        assert not val


def test_witness_search_on_a_smooth_polynomial():
    # x + y + 1/(xy) is non-degenerate when 3 is invertible
    F = ff_make(5, 1)
    f = LaurentPoly.from_dict({(1, 0): F(1), (0, 1): F(1), (-1, -1): F(1)})
    assert nondeg_witness_search(f, 2) is None


@given(st.sampled_from([3, 5, 7]), st.integers(2, 4), st.data())
def test_closed_form_is_homogeneous(p, n, data):
    F = ff_make(p, 1)
    a = [F(data.draw(st.integers(1, p - 1))) for _ in range(n + 1)]
    lam = F(data.draw(st.integers(1, p - 1)))
    lhs = hasse_closed_le1(n, p, [lam * x for x in a])
    assert lhs == lam ** (p - 1) * hasse_closed_le1(n, p, a)
