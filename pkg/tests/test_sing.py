import itertools
import random

import pytest
from hypothesis import given, strategies as st

from hassepoly.dwork import hasse_closed_le1
from hassepoly.ff import ff_make
from hassepoly.sing import MPolyFp, gradient, hasse_symbolic, normalize, singular_search


def brute_singular(h: MPolyFp, k: int):
    """Scalar-path enumeration of projective points where h and its gradient vanish."""
    F = ff_make(h.p, k)
    grad = gradient(h)
    found = set()
    for pt in itertools.product(list(F.elements()), repeat=h.nvars):
        if not any(pt):
            continue
        if h(pt):
            continue
        if all(not len(g) or not g(pt) for g in grad):
            found.add(normalize(pt))
    return sorted(found, key=lambda pt: tuple(x.index for x in pt))


def test_symbolic_matches_closed_form():
    F = ff_make(7, 1)
    h = hasse_symbolic(3, 7)
    rng = random.Random(7)
    for _ in range(100):
        a = [F(rng.randrange(1, 7)) for _ in range(4)]
        assert h(a) == hasse_closed_le1(3, 7, a)


def test_symbolic_over_an_extension():
    F = ff_make(5, 2)
    h = hasse_symbolic(2, 5)
    for i in range(1, F.q, 5):
        a = [F.elem(i), F.elem((3 * i) % (F.q - 1) + 1), F.elem(2)]
        assert h(a) == hasse_closed_le1(2, 5, a)


def test_shape():
    h = hasse_symbolic(3, 5)
    assert len(h) == 10
    assert h.is_homogeneous() and h.degrees() == {4}
    q = hasse_symbolic(4, 3)
    assert q.terms == (((0, 0, 0, 0, 2), 2), ((0, 0, 0, 2, 0), 1), ((0, 0, 2, 0, 0), 1),
                       ((0, 2, 0, 0, 0), 1), ((2, 0, 0, 0, 0), 1))


def test_gradient_basics():
    h = hasse_symbolic(2, 3)
    grad = gradient(h)
    assert grad[0].terms == (((1, 0, 0), 2),)
    const = MPolyFp(5, 2, (((0, 0), 3),))
    assert all(len(g) == 0 for g in gradient(const))
    # terms cancel modulo p
    assert len(MPolyFp(3, 1, (((1,), 1), ((1,), 2)))) == 0


@given(st.data())
def test_euler_identity(data):
    p, n = 5, 2
    F = ff_make(p, 1)
    h = hasse_symbolic(n, p)
    x = [F(data.draw(st.integers(0, p - 1))) for _ in range(n + 1)]
    lhs = F(p - 1) * h(x)
    rhs = F(0)
    for xi, g in zip(x, gradient(h)):
        rhs = rhs + xi * g(x)
    assert lhs == rhs


@pytest.mark.parametrize("p,n,k", [(3, 2, 1), (3, 3, 2), (5, 2, 1), (5, 3, 1), (7, 2, 1), (5, 2, 2)])
def test_search_matches_brute_force(p, n, k):
    h = hasse_symbolic(n, p)
    assert singular_search(h, k) == brute_singular(h, k)


def test_p3_has_no_singular_points():
    for n in range(2, 7):
        for k in (1, 2):
            assert singular_search(hasse_symbolic(n, 3), k) == []


def test_returned_points_are_singular_and_normalised():
    h = hasse_symbolic(3, 7)
    pts = singular_search(h, 1)
    assert pts
    for pt in pts:
        first = next(x for x in pt if x)
        assert first == pt[0].field(1)
        assert not h(pt)
        assert all(not len(g) or not g(pt) for g in gradient(h))


def test_normalize():
    F = ff_make(5, 1)
    assert normalize([F(0), F(2), F(4)]) == (F(0), F(1), F(2))
    with pytest.raises(ValueError):
        normalize([F(0), F(0)])


def test_extension_cap():
    with pytest.raises(ValueError):
        singular_search(hasse_symbolic(2, 3), 3)
