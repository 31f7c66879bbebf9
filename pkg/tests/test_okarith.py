from math import gcd

import pytest
from hypothesis import given, strategies as st
from sympy import fibonacci, lucas as sym_lucas

from fibsift.errors import NotPrime
from fibsift.okarith import (
    DELTA, EPS, EPSBAR, MU, ONE, PHI1, PHI2, SQRT5, SQRT6, KPrimeElem, OKElem, divisor_filter, exact_root,
    fib, fib_lucas, fib_mod, gcd_fib3_lucas, index_filter, kappa, kprime_norm_to_K, lucas, ok_mul,
    ok_norm, ok_pow,
)

ints = st.integers(-10**6, 10**6)
elems = st.builds(OKElem, ints, ints)


def test_eps_powers():
    assert ok_pow(EPS, 12) == OKElem(89, 144)
    assert ok_pow(EPS, 9) == OKElem(21, 34)
    assert ok_pow(EPS, -2) == OKElem(2, -1)
    assert ok_pow(EPS, 0) == ONE


def test_norm_examples():
    assert ok_norm(OKElem(88, 144)) == -320
    assert EPS.norm() == -1
    assert SQRT5.norm() == -5
    assert EPS * EPSBAR == OKElem(-1)


def test_negative_power_of_non_unit():
    with pytest.raises(ValueError):
        ok_pow(OKElem(2, 0), -1)


def test_fib_lucas_examples():
    assert fib_lucas(9) == (34, 76)
    assert fib_lucas(-4) == (-3, 7)
    assert fib_lucas(0) == (0, 2)


def test_fib_matches_sympy():
    for k in range(0, 300):
        assert fib(k) == fibonacci(k)
        assert lucas(k) == sym_lucas(k)


def test_negative_indices():
    for k in range(1, 200):
        assert fib(-k) == (-1) ** (k + 1) * fib(k)
        assert lucas(-k) == (-1) ** k * lucas(k)


def test_fib_mod():
    for q in (7, 11, 101, 10007):
        for k in range(0, 400, 7):
            assert fib_mod(k, q) == fib(k) % q


def test_gcd_fib3_lucas_examples():
    assert gcd_fib3_lucas(3) == 4
    assert gcd_fib3_lucas(6) == 2
    assert gcd_fib3_lucas(1) == 1


def test_gcd_fib3_lucas_direct():
    for k in range(-300, 301):
        assert gcd_fib3_lucas(k) == gcd(fib(k + 3), lucas(k))


def test_divisor_filter():
    assert divisor_filter(19)
    assert not divisor_filter(2)
    assert not divisor_filter(7)
    with pytest.raises(NotPrime):
        divisor_filter(21)


def test_index_filter():
    assert index_filter(2)
    assert not index_filter(0)
    assert index_filter(-1)


def test_exact_root():
    assert exact_root(2**5, 5) == 2
    assert exact_root(-32, 5) == -2
    assert exact_root(36, 2) == 6
    assert exact_root(-4, 2) is None
    assert exact_root(37, 2) is None


@given(elems, elems)
def test_norm_multiplicative(x, y):
    assert ok_norm(ok_mul(x, y)) == ok_norm(x) * ok_norm(y)


@given(elems, elems, elems)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@given(elems)
def test_conj_involution(x):
    assert x.conj().conj() == x
    assert x * x.conj() == OKElem(x.norm())
    assert x + x.conj() == OKElem(x.trace())


@given(st.integers(-500, 500), st.integers(-500, 500))
def test_power_law(a, b):
    assert ok_pow(EPS, a) * ok_pow(EPS, b) == ok_pow(EPS, a + b)


def test_binet_and_lucas_identity():
    for k in range(-300, 301):
        f, l = fib_lucas(k)
        assert ok_pow(EPS, k) == OKElem(fib(k - 1), f)
        assert ok_pow(EPS, k) + ok_pow(EPSBAR, k) == OKElem(l)
        assert l * l - 5 * f * f == 4 * (-1) ** k


def test_product_identity_grid():
    for a in range(-60, 61):
        for b in range(-60, 61):
            assert fib(a) * lucas(b) == fib(a + b) + (-1) ** (b % 2) * fib(a - b)


# ---------------------------------------------------------------- K'

def test_kprime_basics():
    assert SQRT6 * SQRT6 == KPrimeElem(6)
    assert kprime_norm_to_K(DELTA) == KPrimeElem(-1)
    assert MU.norm_to_K() == KPrimeElem(1)
    assert KPrimeElem.from_ok(SQRT5) * KPrimeElem.from_ok(SQRT5) == KPrimeElem(5)


def test_kappa_norm():
    assert kappa(-2).norm_to_Q() == -5
    assert kappa(-1).norm_to_Q() == -5


def test_phi_product():
    assert PHI1 * PHI2 == -KPrimeElem.from_ok(SQRT5)
    assert abs(PHI1.norm_to_Q()) == 5


def test_kprime_inverse():
    for x in (DELTA, MU, PHI1, KPrimeElem(3, 1, 2, -1)):
        assert x * x.inverse() == KPrimeElem(1)
        assert (x / x) == KPrimeElem(1)


def test_kprime_embedding_matches_floats():
    x = KPrimeElem(1, 2, 3, 4)
    r5, r6 = 5**0.5, 6**0.5
    assert x.embedding(1, 1) == pytest.approx(1 + 2 * r5 + 3 * r6 + 4 * r5 * r6)
    assert x.embedding(-1, 1) == pytest.approx(1 - 2 * r5 + 3 * r6 - 4 * r5 * r6)
