import random
from math import isqrt

import pytest
from sympy import primerange

from fibsift.errors import BadCharacteristic, BadIdeal, NotGoodReduction
from fibsift.frey import (
    FreyCurve, bq, count_points_aq, disc_conductor_data, frey_curve, reduce_frey, trace_bsgs, trace_charsum, trace_fq,
    trace_naive,
)
from fibsift.okarith import EPS, OKElem, fib
from fibsift.residue import ideals_above, is_square, mult_order, reduce_ok, split_in_K


def _legendre_trace(a, b, q):
    # independent oracle: a_q = -sum over x of (x^3 + a x^2 + b x / q)
    total = 0
    for x in range(q):
        v = (x**3 + a * x * x + b * x) % q
        if v:
            total += 1 if pow(v, (q - 1) // 2, q) == 1 else -1
    return -total


def test_frey_curve_examples():
    assert frey_curve(2).x == OKElem(1, 5)
    assert frey_curve(0).x == OKElem(0, 2)
    x = frey_curve(-1).x
    assert x == EPS * EPS and x.is_unit()


def test_frey_identity():
    for m in range(-50, 51):
        assert frey_curve(m).check_identity()


def test_disc_conductor():
    for m in range(-50, 51):
        d = disc_conductor_data(m)
        assert d["y_part"] == fib(2 * m) + 2
    assert disc_conductor_data(2)["y_part"] == 5
    assert disc_conductor_data(2)["conductor_is_level"]
    assert disc_conductor_data(-1)["y_part"] == 1
    assert disc_conductor_data(-1)["conductor_is_level"]
    assert not disc_conductor_data(3)["conductor_is_level"]


def test_reduce_example():
    rc = reduce_frey(2, split_in_K(11))
    assert rc.reduction_type == "good"
    assert rc.a2 == 5 and rc.a4 == 6
    assert reduce_frey(frey_curve(2), split_in_K(11)) == rc


def test_multiplicative_reduction_rule():
    seen = 0
    for q in primerange(7, 200):
        for ideal in ideals_above(q):
            if ideal.degree != 1:
                continue
            for m in range(mult_order(reduce_ok(EPS * EPS, ideal), q)):
                rc = reduce_frey(m, ideal)
                x = reduce_ok(frey_curve(m).x, ideal)
                if (x * x - 6) % q == 0:
                    seen += 1
                    want = "split" if is_square(-x, q) else "nonsplit"
                    assert rc.reduction_type == want
                    assert bq(m, ideal) == (q + 1 if want == "split" else -q - 1)
    assert seen > 0


def test_bad_characteristic():
    with pytest.raises(BadCharacteristic):
        reduce_frey(2, split_in_K(5))
    with pytest.raises(BadIdeal):
        bq(2, split_in_K(5))


def test_count_points_examples():
    assert count_points_aq(reduce_frey(2, split_in_K(11))).a_q == -4
    assert bq(2, split_in_K(11)) == -4
    assert trace_fq(0, 1, 7) == 0
    assert _legendre_trace(5, 6, 11) == -4


def test_not_good_reduction():
    for q in primerange(7, 200):
        for ideal in ideals_above(q):
            if ideal.degree != 1:
                continue
            for m in range(q):
                rc = reduce_frey(m, ideal)
                if rc.reduction_type != "good":
                    with pytest.raises(NotGoodReduction):
                        count_points_aq(rc)
                    return
    pytest.fail("no bad reduction found")


def test_methods_agree_and_hasse():
    rng = random.Random(5)
    for q in (7, 11, 101, 257, 1009, 1999):
        for _ in range(15):
            a, b = rng.randrange(q), rng.randrange(1, q)
            if (a * a - 4 * b) % q == 0:
                continue
            t = _legendre_trace(a, b, q)
            assert trace_charsum(a, b, q) == t
            assert trace_naive(a, b, q) == t
            assert t * t <= 4 * q
            if q > 229:
                assert trace_bsgs(a, b, q) == t


def test_bsgs_large_field():
    rng = random.Random(6)
    for q in (100003, 1000003):
        for _ in range(5):
            a, b = rng.randrange(q), rng.randrange(1, q)
            if (a * a - 4 * b) % q == 0:
                continue
            t = trace_bsgs(a, b, q)
            assert t == trace_charsum(a, b, q)
            assert abs(t) <= 2 * isqrt(q) + 2


def test_bq_periodic():
    for q in (11, 19, 29, 59, 7, 13):
        for ideal in ideals_above(q):
            o = mult_order(reduce_ok(EPS * EPS, ideal), ideal.q)
            for m in range(-5, 10):
                assert bq(m, ideal) == bq(m + o, ideal)


def test_conjugate_index_is_conjugate_curve():
    for q in (11, 29, 31, 41, 59):
        a, b = ideals_above(q)
        for m in range(-4, 8):
            assert bq(m, a, 2) == bq(m, b)
            conj = FreyCurve(m, frey_curve(m).x.conj())
            rc = reduce_frey(conj, a)
            if rc.reduction_type == "good":
                assert count_points_aq(rc).a_q == bq(m, b)


def test_inert_trace_hasse():
    for q in (7, 13, 17):
        ideal = split_in_K(q)
        for m in range(-3, 5):
            rc = reduce_frey(m, ideal)
            if rc.reduction_type == "good":
                a = count_points_aq(rc).a_q
                assert a * a <= 4 * q * q
