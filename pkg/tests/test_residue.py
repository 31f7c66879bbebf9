import random

import pytest
from sympy import primerange
from sympy.ntheory import discrete_log

from fibsift.errors import ResidueCharTwo, ZeroElement
from fibsift.galois_sieve import q_set, s_set
from fibsift.okarith import EPS, SQRT5, OKElem
from fibsift.residue import (
    Fq2, discrete_log_modp, ideals_above, is_square, list_Q_primes, mult_order, primitive_root, reduce_ok,
    split_in_K, sqrt_mod_prime,
)


def test_split_examples():
    s = split_in_K(11)
    assert s.degree == 1 and s.theta5 in (4, 7)
    assert split_in_K(7).degree == 2
    five = split_in_K(5)
    assert five.ramified and five.theta5 == 0


def test_ideals_carry_opposite_roots():
    for q in primerange(7, 400):
        ideals = ideals_above(q)
        if q % 5 in (1, 4):
            a, b = ideals
            assert (a.theta5 + b.theta5) % q == 0
            assert a.theta5**2 % q == 5 % q
            e = reduce_ok(EPS, a)
            assert (e * e - e - 1) % q == 0
        else:
            assert [i.degree for i in ideals] == [2]


def test_reduce_examples():
    s = split_in_K(11)
    assert reduce_ok(EPS, s) == 8
    assert reduce_ok(SQRT5, s) == 4
    e = reduce_ok(EPS, split_in_K(7))
    assert isinstance(e, Fq2)
    assert e * e == e + 1


def test_reduce_char_two():
    with pytest.raises(ResidueCharTwo):
        reduce_ok(EPS, split_in_K(2))


def test_reduction_is_homomorphism():
    rng = random.Random(1)
    for q in (11, 19, 29, 7, 13, 101):
        for ideal in ideals_above(q):
            for _ in range(30):
                x = OKElem(rng.randint(-999, 999), rng.randint(-999, 999))
                y = OKElem(rng.randint(-999, 999), rng.randint(-999, 999))
                rx, ry = reduce_ok(x, ideal), reduce_ok(y, ideal)
                if isinstance(rx, Fq2):
                    assert reduce_ok(x * y, ideal) == rx * ry
                    assert reduce_ok(x + y, ideal) == rx + ry
                else:
                    assert reduce_ok(x * y, ideal) == rx * ry % q
                    assert reduce_ok(x + y, ideal) == (rx + ry) % q


def test_index_two_is_conjugate():
    for q in (11, 29, 31, 41):
        a, b = ideals_above(q)
        x = OKElem(3, 7)
        assert reduce_ok(x, a, 2) == reduce_ok(x, b)
        assert reduce_ok(x.conj(), a) == reduce_ok(x, b)


def test_mult_order_examples():
    assert mult_order(9, 11) == 5
    assert mult_order(1, 11) == 1
    assert mult_order(10, 11) == 2
    with pytest.raises(ZeroElement):
        mult_order(0, 11)


def test_mult_order_divides_group_order():
    for q in (7, 13, 101):
        for a in range(1, q):
            o = mult_order(a, q)
            assert (q - 1) % o == 0 and pow(a, o, q) == 1
    e = reduce_ok(EPS, split_in_K(7))
    assert 48 % mult_order(e) == 0


def test_is_square_examples():
    assert is_square(3, 11)
    assert not is_square(2, 11)
    assert is_square(0, 11)
    assert {a for a in range(1, 11) if is_square(a, 11)} == {1, 3, 4, 5, 9}


def test_sqrt_mod_prime():
    for q in (13, 17, 29, 41, 10007):
        for a in range(1, 50):
            r = sqrt_mod_prime(a, q)
            if r is None:
                assert not is_square(a, q)
            else:
                assert r * r % q == a % q


def test_discrete_log_examples():
    q, p = 29, 7
    g = primitive_root(q)
    assert discrete_log_modp(g, g, p, q) == 1
    assert discrete_log_modp(pow(g, p, q), g, p, q) == 0
    for a in range(1, q):
        assert discrete_log_modp(a, g, p, q) == discrete_log(q, a, g) % p


def test_discrete_log_additive():
    rng = random.Random(2)
    for q, p in ((71, 7), (211, 7), (331, 11)):
        g = primitive_root(q)
        for _ in range(40):
            a, b = rng.randint(1, q - 1), rng.randint(1, q - 1)
            lhs = discrete_log_modp(a * b % q, g, p, q)
            assert lhs == (discrete_log_modp(a, g, p, q) + discrete_log_modp(b, g, p, q)) % p


def test_q_set_counts():
    assert len(list_Q_primes(300, 2520)) == 25
    assert len(q_set()) == 25
    assert len(s_set()) == 15
    assert list_Q_primes(6, 1) == []


def test_q_set_membership():
    for ideal in q_set():
        assert ideal.q not in (2, 3, 5)
        assert ideal.norm < 300
        assert 2520 % mult_order(reduce_ok(EPS * EPS, ideal), ideal.q) == 0
