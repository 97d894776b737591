import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hassepoly.ff import (canonical_modulus, embed, embedding_root, ff_make, ff_trace,
                          is_irreducible, parse_elem)

FIELDS = [(2, 1), (3, 1), (3, 2), (5, 2), (7, 2), (3, 4), (2, 8)]


def test_canonical_modulus_is_smallest_irreducible():
    # coefficients constant term first: x^2 + 1 over F_3, x^3 + x^2 + 1 over F_2
    assert canonical_modulus(3, 2) == (1, 0, 1)
    assert canonical_modulus(2, 3) == (1, 0, 1, 1)
    for p, k in [(3, 2), (5, 2), (2, 4)]:
        m = canonical_modulus(p, k)
        assert is_irreducible(list(m), p)
        smaller = [c for c in itertools.product(range(p), repeat=k) if tuple(c) < m[:k]]
        assert not any(is_irreducible(list(c) + [1], p) for c in smaller)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        ff_make(9, 1)
    with pytest.raises(ValueError):
        ff_make(3, 0)
    F = ff_make(3, 2)
    with pytest.raises(ValueError):
        parse_elem(F, "13")
    with pytest.raises(ZeroDivisionError):
        F(0) ** -1


@pytest.mark.parametrize("p,k", FIELDS)
def test_generator_has_full_order(p, k):
    F = ff_make(p, k)
    assert F.order(F.generator) == F.q - 1
    assert all(F.order(x) < F.q - 1 for x in range(1, F.generator))


@pytest.mark.parametrize("p,k", FIELDS)
def test_exp_log_tables_are_inverse(p, k):
    F = ff_make(p, k)
    exp, log = F.exp_table, F.log_table
    assert sorted(exp.tolist()) == list(range(1, F.q))
    assert (log[exp] == np.arange(F.q - 1)).all()


@pytest.mark.parametrize("p,k", [(3, 2), (5, 2), (2, 4)])
def test_trace_is_linear_and_surjective(p, k):
    F = ff_make(p, k)
    tr = F.trace_table
    for x, y in itertools.product(range(F.q), repeat=2):
        assert tr[F.add(x, y)] == (tr[x] + tr[y]) % p
    # each value of F_p is hit q/p times
    assert np.bincount(tr, minlength=p).tolist() == [F.q // p] * p


def test_trace_of_frobenius_sum():
    F = ff_make(5, 3)
    for x in range(0, F.q, 7):
        s, y = 0, x
        for _ in range(F.k):
            s = F.add(s, y)
            y = F.frobenius(y)
        assert s == F.trace(x)  # trace lands in F_p, i.e. index < p


@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(pk, data):
    F = ff_make(*pk)
    x, y, z = (F.elem(data.draw(st.integers(0, F.q - 1))) for _ in range(3))
    assert (x + y) * z == x * z + y * z
    assert x * (y * z) == (x * y) * z
    assert x - x == F(0)
    if x:
        assert x * x ** -1 == F(1)
        assert x ** (F.q - 1) == F(1)


@given(st.sampled_from(FIELDS), st.data())
def test_vectorised_ops_match_scalar(pk, data):
    F = ff_make(*pk)
    xs = np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=1, max_size=20)))
    ys = np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=len(xs), max_size=len(xs))))
    assert F.add_arr(xs, ys).tolist() == [F.add(int(a), int(b)) for a, b in zip(xs, ys)]
    assert F.mul_arr(xs, ys).tolist() == [F.mul(int(a), int(b)) for a, b in zip(xs, ys)]
    assert F.trace_arr(xs).tolist() == [F.trace(int(a)) for a in xs]


def test_string_round_trip(f9):
    for x in f9.elements():
        assert parse_elem(f9, x.to_str()) == x
    # most significant digit first: "12" = t + 2
    assert parse_elem(f9, "12").digits == [2, 1]


@pytest.mark.parametrize("small,big", [((3, 1), (3, 2)), ((3, 2), (3, 4)), ((5, 1), (5, 2)),
                                       ((2, 2), (2, 4))])
def test_embedding_is_a_ring_homomorphism(small, big):
    S, B = ff_make(*small), ff_make(*big)
    theta = B.elem(embedding_root(S, B))
    # theta is a root of the small modulus
    acc = B(0)
    for c in reversed(S.modulus):
        acc = acc * theta + c
    assert not acc
    for x, y in itertools.product(list(S.elements())[:12], repeat=2):
        assert embed(x + y, B) == embed(x, B) + embed(y, B)
        assert embed(x * y, B) == embed(x, B) * embed(y, B)


def test_trace_to_prime_field():
    F = ff_make(7, 2)
    x = F.elem(10)
    assert ff_trace(x) == ff_make(7, 1)(int(x.trace()))
    assert ff_trace(x).field == ff_make(7, 1)
