from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from fibsift.certreal import CertReal, certify, cmax, cmin
from fibsift.errors import Indeterminate

fracs = st.fractions(min_value=Fraction(-10**6), max_value=Fraction(10**6), max_denominator=10**6)
pos = st.fractions(min_value=Fraction(1, 10**4), max_value=Fraction(10**6), max_denominator=10**6)


def _hp(x):
    with mpmath.workprec(2000):
        return mpmath.mpf(x.numerator) / x.denominator


def test_exact_encloses():
    third = CertReal.exact(Fraction(1, 3))
    assert third.contains(Fraction(1, 3))
    assert third.width > 0
    assert CertReal.exact(7).width == 0


@given(fracs, fracs)
def test_arithmetic_encloses(a, b):
    A, B = CertReal.exact(a, 64), CertReal.exact(b, 64)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    if b != 0:
        assert (A / B).contains(a / b)


@given(pos)
def test_transcendental_encloses(a):
    A = CertReal.exact(a, 80)
    with mpmath.workprec(600):
        x = _hp(a)
        for got, want in ((A.log(), mpmath.log(x)), (A.sqrt(), mpmath.sqrt(x))):
            lo, hi = mpmath.mpf(got.iv[0]), mpmath.mpf(got.iv[1])
            assert lo <= want <= hi


@settings(max_examples=50)
@given(pos, pos)
def test_widening_precision_never_flips(a, b):
    x, y = CertReal.exact(a, 53).log(), CertReal.exact(b, 53).log()
    try:
        low = x < y
    except Indeterminate:
        return
    assert (CertReal.exact(a, 512).log() < CertReal.exact(b, 512).log()) == low


def test_comparison_indeterminate_on_overlap():
    x = CertReal.interval(1, 2)
    with pytest.raises(Indeterminate):
        _ = x < CertReal.interval("1.5", 3)
    assert x < 3
    assert x > 0


def test_cmax_cmin():
    a, b = CertReal.interval(1, 3), CertReal.interval(2, 4)
    m = cmax(a, b)
    assert m.lower == 2 and m.upper == 4
    n = cmin(a, b)
    assert n.lower == 1 and n.upper == 3


def test_floor_and_hull():
    f = CertReal.interval("2.5", "2.7").floor()
    assert f.lower == f.upper == 2
    h = CertReal.exact(1).hull(5)
    assert h.lower == 1 and h.upper == 5


def test_json_roundtrip():
    x = CertReal.exact(2).sqrt()
    y = CertReal.from_json(x.to_json())
    assert y.iv == x.iv


def test_certify_doubles_precision():
    calls = []

    def fn(prec):
        calls.append(prec)
        a = CertReal.exact(1, prec) + CertReal.exact(Fraction(1, 2**300), prec)
        if not (a > 1):
            raise AssertionError
        return prec

    assert certify(fn, 64) >= 512
    assert calls[0] == 64


def test_certify_gives_up():
    def fn(prec):
        raise Indeterminate("never")
    with pytest.raises(Indeterminate):
        certify(fn, 64, max_prec=256)
