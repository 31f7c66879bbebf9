from fractions import Fraction
from math import log, sqrt

import mpmath
import pytest

from fibsift.certreal import CertReal
from fibsift.errors import NotAlgebraicDescriptor, PositivityFailed, PreconditionViolated, SmallY
from fibsift.linforms import (
    CORRECTED_A1, height_quadratic, lambda_upper, laurent_bound, matveev_bound, mignotte_bound,
)
from fibsift.okarith import DELTA, EPS, SQRT5, KPrimeElem, ok_pow

PHI = (1 + sqrt(5)) / 2


def _q(x):
    return Fraction(x).limit_denominator(10**9)


# ---------------------------------------------------------------- heights

def test_height_examples():
    assert height_quadratic(SQRT5).h.contains(CertReal.exact(5).log() / 2)
    assert abs(height_quadratic(EPS).h.mid - log(PHI) / 2) < 1e-15
    h = height_quadratic(SQRT5 * ok_pow(EPS, 4)).h
    assert abs(h.mid - 0.5 * log(7.5 + 3.5 * sqrt(5))) < 1e-14
    assert h < Fraction(1365, 1000)


def test_height_rationals_and_kprime():
    assert height_quadratic(Fraction(3, 2)).h.contains(CertReal.exact(3).log())
    assert height_quadratic(0).h.upper == 0
    d = height_quadratic(DELTA)
    assert d.degree == 4
    assert abs(d.h.mid - log(sqrt(5) + sqrt(6)) / 2) < 1e-14
    assert height_quadratic(KPrimeElem.from_ok(EPS)).degree == 2


def test_height_is_galois_invariant():
    for x in (SQRT5 * ok_pow(EPS, 3), ok_pow(EPS, 7) + 4):
        assert abs(height_quadratic(x).h.mid - height_quadratic(x.conj()).h.mid) < 1e-14


def test_height_rejects_bad_descriptor():
    with pytest.raises(NotAlgebraicDescriptor):
        height_quadratic(1.5)
    with pytest.raises(NotAlgebraicDescriptor):
        height_quadratic("sqrt5")


# ---------------------------------------------------------------- Matveev

def _matveev_instance(**kw):
    A = [_q(log(5)), _q(log(PHI)), _q(2 * log(19))]
    args = dict(n0=3, D=2, chi=1, A=A, b=[1, -2, 10**11])
    args.update(kw)
    return matveev_bound(**args)


def test_matveev_constants():
    rep = _matveev_instance()
    C = rep.constants["C(n0)"]
    closed = CertReal.exact(2**18 * 3**2 * 5) * CertReal.e() ** 4
    assert abs((C - closed).mid) < 1e-40
    assert C < Fraction(645, 100) * 10**8
    assert rep.constants["C0"] < Fraction(285, 10)


def test_matveev_linear_in_omega():
    a = _matveev_instance()
    A = [_q(log(5)) * 2, _q(log(PHI)), _q(2 * log(19))]
    b = _matveev_instance(A=A, b=[1, -2, 10**11])
    # B is set by the b_3 term, so only Omega changes
    assert b.constants["B"].iv == a.constants["B"].iv
    ratio = b.constants["log|Lambda| >"] / a.constants["log|Lambda| >"]
    assert abs(ratio.mid - 2) < 1e-30


def test_matveev_preconditions():
    with pytest.raises(PreconditionViolated):
        _matveev_instance(b=[1, -2, 0])
    with pytest.raises(PreconditionViolated):
        _matveev_instance(A=[1, 1])
    with pytest.raises(PreconditionViolated):
        _matveev_instance(chi=3)
    with pytest.raises(PreconditionViolated):
        _matveev_instance(A=[_q(log(5)), Fraction(1, 100), _q(2 * log(19))], heights=[1, 1, 1])


# ---------------------------------------------------------------- Mignotte

A1 = _q((5.7 + 3) / 2 * log(5))
A2 = _q(8.7 * log(19))
A3 = _q(6.7 * log(PHI))


def test_mignotte_generic_instance():
    rep = mignotte_bound(A1, A2, A3, 1, 10**11, 2 * 10**11, 1, 1, L=485, m=20, rho="5.7", chi=2)
    assert rep.constants["S_i"] == [16297, 27266, 146572]
    assert rep.constants["positivity"].certainly_positive()


def test_mignotte_positivity_discriminates():
    with pytest.raises(PositivityFailed):
        mignotte_bound(A1, A2, A3, 1, 10**11, 2 * 10**11, 1, 1, L=6, m=3, rho="5.7", chi=2)
    rep = mignotte_bound(A1, A2, A3, 1, 10**11, 2 * 10**11, 1, 1, L=6, m=3, rho="5.7", chi=2,
                         require_positive=False)
    assert rep.verdict == "hypotheses fail"


def test_mignotte_preconditions():
    base = (A1, A2, A3, 1, 10**11, 2 * 10**11, 1, 1)
    with pytest.raises(PreconditionViolated):
        mignotte_bound(*base, L=5, m=20, rho="5.7", chi=2)
    with pytest.raises(PreconditionViolated):
        mignotte_bound(*base, L=485, m=2, rho="5.7", chi=2)
    with pytest.raises(PreconditionViolated):
        mignotte_bound(*base, L=485, m=20, rho="2", chi=2)
    with pytest.raises(PreconditionViolated):
        mignotte_bound(A1, A2, Fraction(1, 2), 1, 10**11, 2 * 10**11, 1, 1, L=485, m=20, rho="5.7", chi=2)


# ---------------------------------------------------------------- Laurent

def test_laurent_generic():
    rep = laurent_bound(2, 23, 1, 40, 60, 10, 1, 10**6)
    c = rep.constants
    assert c["sigma"].contains(1)
    assert c["lambda"].contains(CertReal.exact(23).log())
    assert c["C"].certainly_positive()
    assert not c["log|Lambda| >="].certainly_positive()


def test_laurent_preconditions():
    with pytest.raises(PreconditionViolated):
        laurent_bound(2, 23, 1, 1, 60, 10, 1, 10**6)          # h too small
    with pytest.raises(PreconditionViolated):
        laurent_bound(2, 23, Fraction(1, 4), 40, 60, 10, 1, 10**6)
    with pytest.raises(PreconditionViolated):
        laurent_bound(2, 1, 1, 40, 60, 10, 1, 10**6)
    with pytest.raises(PreconditionViolated):
        laurent_bound(2, 23, 1, 40, 60, Fraction(1, 2), 1, 10**6)
    with pytest.raises(PreconditionViolated):
        laurent_bound(2, 23, 1, 40, 1, 1, 1, 10**6)             # a1 a2 < lambda^2
    with pytest.raises(PreconditionViolated):
        laurent_bound(2, 23, 1, 40, 1000, 1000, 1, 10**6, alphas=((1, 1, 1), (400, 0, 1)))


# ---------------------------------------------------------------- upper bound for Lambda

def test_lambda_upper():
    b = lambda_upper(19, 5)
    assert b.contains(Fraction(21, 10) / 19**5)
    assert lambda_upper(19, 7) < b
    assert lambda_upper(-19, 5).contains(Fraction(21, 10) / 19**5)
    with pytest.raises(SmallY):
        lambda_upper(18, 5)


def test_lambda_upper_consistency():
    # y^p = F_{2n} + 2 exactly gives Lambda = log(eps^(-2n) sqrt5 (F_{2n} + 2)) > 0, tiny
    from fibsift.okarith import fib
    with mpmath.workprec(400):
        for n in (20, 35, 60):
            y_p = fib(2 * n) + 2
            lam = mpmath.log(y_p) + mpmath.log(mpmath.sqrt(5)) - 2 * n * mpmath.log((1 + mpmath.sqrt(5)) / 2)
            assert 0 < lam < 2.1 / mpmath.mpf(y_p)


# ---------------------------------------------------------------- pipelines

def test_matveev_pipeline(linforms_reports):
    rep = linforms_reports["matveev-pipeline"]
    assert rep.all_passed, rep.failed()
    assert rep.verdict == "p < 3.6e12"


def test_mignotte_pipeline(linforms_reports):
    rep = linforms_reports["mignotte-pipeline"]
    assert rep.all_passed, rep.failed()
    c = rep.constants
    assert (c["S1"], c["S2"], c["S3"]) == (16297, 27266, 146572)
    assert c["S"] == 190136
    assert c["r max"] == 43 and c["|u| max"] == 94


def test_three_logs_failures_are_the_known_ones(linforms_reports):
    rep = linforms_reports["laurent-three-logs"]
    assert set(rep.failed()) == {
        "a1 = 2562 dominates rho|log alpha1| - log|alpha1| + 2D h(alpha1)",
        "C < 0.029 (r = 1, y = 19, p = 1e11)",
    }
    assert rep.constants["failing r"] == []
    need = rep.constants["a1 required (height bound)"]
    assert 2563 < need.lower and need.upper < 2564
    corrected = linforms_reports[f"laurent-three-logs-a1-{CORRECTED_A1}"]
    assert corrected.failed() == ["C < 0.029 (r = 1, y = 19, p = 1e11)"]
    assert corrected.constants["failing r"] == []


def test_corner_C_value(linforms_reports):
    C = linforms_reports["laurent-three-logs"].constants["C (r=1, y=19, p=1e11)"]
    assert abs(C.mid - 0.0290301) < 1e-6


def test_two_logs(linforms_reports):
    rep = linforms_reports["laurent-two-logs"]
    assert rep.all_passed, rep.failed()
    assert rep.constants["mu = 1 alone suffices"] is False
    assert rep.constants["failing pieces"] == []
