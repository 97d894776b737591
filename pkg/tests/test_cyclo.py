import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hassepoly.cyclo import INF, CycInt, CycRat, cyc_zeta_pow, mul_arrays

PRIMES = [3, 5, 7]


def cyc(p):
    return st.lists(st.integers(-50, 50), min_size=p - 1, max_size=p - 1).map(lambda c: CycInt(p, c))


def close(x: complex, y: complex) -> bool:
    return abs(x - y) < 1e-9 * max(1.0, abs(y))


@pytest.mark.parametrize("p", PRIMES)
def test_zeta_powers(p):
    z = cyc_zeta_pow(p, 1)
    assert z ** p == CycInt.from_int(p, 1)
    # 1 + z + ... + z^(p-1) = 0
    acc = CycInt.from_int(p, 0)
    for t in range(p):
        acc = acc + cyc_zeta_pow(p, t)
    assert not acc


@pytest.mark.parametrize("p", PRIMES)
def test_lambda_valuation_of_p_and_one_minus_zeta(p):
    one_minus = 1 - cyc_zeta_pow(p, 1)
    assert one_minus.lambda_val() == 1
    assert CycInt.from_int(p, p).lambda_val() == p - 1
    assert CycInt.from_int(p, p * p * 2).ord_p() == 2
    assert CycInt.from_int(p, 0).lambda_val() == INF
    # the norm of 1 - zeta is p
    assert one_minus.norm() == p


def test_ord_q_scales_with_field_degree():
    x = CycInt.from_int(3, 81)
    assert x.ord_q(1) == 4
    assert x.ord_q(2) == 2


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_ring_laws_and_embedding(p, data):
    x, y = data.draw(cyc(p)), data.draw(cyc(p))
    for j in range(1, p):
        assert close((x * y).embed(j), x.embed(j) * y.embed(j))
        assert close((x + y).embed(j), x.embed(j) + y.embed(j))
    assert close(x.conj().embed(1), x.embed(1).conjugate())


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_valuation_is_additive(p, data):
    x, y = data.draw(cyc(p)), data.draw(cyc(p))
    if x and y:
        assert (x * y).lambda_val() == x.lambda_val() + y.lambda_val()
        assert x.conj().lambda_val() == x.lambda_val()


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_norm_matches_embeddings(p, data):
    x = data.draw(cyc(p))
    prod = 1
    for j in range(1, p):
        prod *= x.embed(j)
    assert abs(prod.real - x.norm()) < 1e-6 * max(1, abs(x.norm()))


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_division_round_trip(p, data):
    x, y = data.draw(cyc(p)), data.draw(cyc(p))
    if y:
        q = CycRat(x) / CycRat(y)
        assert q * y == CycRat(x)
        assert (CycRat(x * y) / y).is_integral()


def test_exact_div_refuses_remainders():
    x = CycInt(5, [2, 4, 6, 8])
    assert x.exact_div(2) == CycInt(5, [1, 2, 3, 4])
    with pytest.raises(ArithmeticError):
        x.exact_div(4)
    with pytest.raises(ArithmeticError):
        CycRat(x, 3).to_int()


def test_from_group_reduces():
    # z^(p-1) = -(1 + z + ... + z^(p-2))
    assert CycInt.from_group(3, [0, 0, 1]) == CycInt(3, [-1, -1])
    assert CycInt.from_group(5, [1, 1, 1, 1, 1]) == CycInt(5, [0, 0, 0, 0])


def test_gauss_sum_modulus():
    # sum over F_p of zeta^(x^2) has absolute value sqrt(p)
    for p in PRIMES:
        counts = [0] * p
        for x in range(p):
            counts[x * x % p] += 1
        g = CycInt.from_group(p, counts)
        assert g * g.conj() == CycInt.from_int(p, p)
        assert abs(abs(g.embed(1)) - math.sqrt(p)) < 1e-12


@pytest.mark.parametrize("p", PRIMES)
def test_mul_arrays_matches_scalar(p):
    rng = np.random.default_rng(p)
    a = rng.integers(-20, 20, size=(30, p - 1))
    b = rng.integers(-20, 20, size=(30, p - 1))
    out = mul_arrays(p, a, b)
    for i in range(30):
        assert CycInt(p, out[i]) == CycInt(p, a[i]) * CycInt(p, b[i])
