import pytest
from sympy import primerange

from fibsift.certificates import replay
from fibsift.errors import InconsistentSystem, PreconditionViolated
from fibsift.okarith import DELTA, EPS, MU, PHI1, PHI2, KPrimeElem, kappa
from fibsift.unit_eq import (
    DELTA_KPRIME, ModulusState, NBoundReport, _final_test, binom_certificate, binom_rows, binom_solver,
    descent_data, descent_identities, disc_bound, disc_value, final_sieve, final_sieve_step, height_chain,
    load_fixtures, n_elimination, ndigits,
)


def test_identities():
    ids = descent_identities()
    assert all(ids.values()), [k for k, v in ids.items() if not v]


def test_unit_decompositions():
    eps = KPrimeElem.from_ok(EPS)
    assert eps ** -4 + DELTA == -(eps ** -2) * MU * PHI1
    assert eps ** -2 + DELTA == eps ** -1 * DELTA * PHI2


def test_kappa_and_discriminant():
    assert DELTA_KPRIME == 14400 == 2**6 * 3**2 * 5**2
    for m0 in (-2, -1):
        assert kappa(m0).norm_to_Q() in (-5, 19)
        d = descent_data(m0)
        assert d.kappa == kappa(m0)
    assert descent_data(-2).exponents == (-2, 0, 1)
    assert descent_data(-1).exponents == (-1, 1, 0)
    with pytest.raises(PreconditionViolated):
        descent_data(2)


def test_binom_examples():
    assert binom_solver(7, -2, 1) == {(0, 1)}
    assert binom_solver(7, -1, 2) == {(1, 0)}
    with pytest.raises(InconsistentSystem):
        binom_solver(7, -2, 2)
    with pytest.raises(InconsistentSystem):
        binom_solver(7, -1, 1)


def test_binom_rows_satisfy_conditions():
    for r in binom_rows(11, -2):
        q = r["q"]
        assert (q - 1) % 11 == 0
        assert pow(5, (q - 1) // 2, q) == 1 and pow(6, (q - 1) // 2, q) == 1


def test_binom_certificates_small_range():
    for p in primerange(5, 60):
        for m0 in (-2, -1):
            c = binom_certificate(p, m0)
            assert c.outcome == "concluded"
            assert replay(c)


def test_binom_replay_detects_tampering():
    c = binom_certificate(13, -1)
    c.witnesses[0]["rhs"][0] = (c.witnesses[0]["rhs"][0] + 1) % 13
    assert not replay(c)


def test_disc_bound_examples():
    assert disc_bound(7, -2) == {2: 42, 3: 14, 5: 20, 7: 28}
    assert disc_bound(7, -1, as_stated=True) == {2: 42, 3: 14, 5: 14, 7: 28, 19: 6}
    # the exact norm of kappa is -5 for both classes
    assert disc_bound(7, -1) == disc_bound(7, -2)


def test_disc_bound_tower_formula():
    for p in (5, 7, 11, 13):
        for m0 in (-2, -1):
            nk = abs(int(kappa(m0).norm_to_Q()))
            assert disc_value(disc_bound(p, m0)) == p ** (4 * p) * nk ** (p - 1) * DELTA_KPRIME**p


def test_disc_bound_preconditions():
    with pytest.raises(PreconditionViolated):
        disc_bound(4, -2)
    with pytest.raises(PreconditionViolated):
        disc_bound(7, 2)


def test_height_chain_monotone():
    a = height_chain(101, -2, 50, 100)
    b = height_chain(101, -2, 50, 200)
    assert isinstance(a, NBoundReport)
    assert b.Y_bound > a.Y_bound
    assert b.log10_n_bound > a.log10_n_bound


def test_height_chain_closed_form_grid():
    for A1 in (2, 3, 10, 100, 10**4, 10**8):
        for A2 in (1, 10, 10**3, 10**6):
            assert height_chain(97, -1, A1, A2).fixed_point_ok


def test_height_chain_rejects_nonpositive():
    with pytest.raises(PreconditionViolated):
        height_chain(7, -2, 0, 1)


def test_final_sieve_p83():
    for m0 in (-2, -1):
        certs, state = final_sieve(83, m0)
        assert [c.m for c in certs] == [3, 5, 7]
        assert all(replay(c) for c in certs)
        assert state.extra == {3: 1, 5: 1, 7: 1}
        assert state.value == ModulusState(83, m0).value * 105


def test_final_test_never_drops_true_class():
    for p in (83, 101):
        for m0 in (-2, -1):
            cert, _ = final_sieve_step(ModulusState(p, m0), 3)
            for w in cert.witnesses:
                assert w["m"] != m0
                q = w["q"]
                # F_{2n} mod q depends on n mod q - 1 since q = +-1 (mod 5)
                assert _final_test(m0 % (q - 1), q, (q - 1) // p) in (0, 1)


def test_final_sieve_preconditions():
    with pytest.raises(PreconditionViolated):
        final_sieve_step(ModulusState(83, -2), 83)
    with pytest.raises(PreconditionViolated):
        final_sieve_step(ModulusState(83, -2), 9)


def test_final_replay_detects_tampering():
    cert, _ = final_sieve_step(ModulusState(83, -1), 5)
    cert.witnesses[0]["value"] += 1
    assert not replay(cert)


def test_n_elimination():
    fx = {(f["p"], f["m0"]): f for f in load_fixtures()}
    assert n_elimination(79, -2, fx[(79, -2)]["log10_n_bound"])["verdict"] == "n = m0"
    assert n_elimination(79, -1, fx[(79, -1)]["log10_n_bound"])["verdict"] == "n = m0"
    assert n_elimination(4999, -2, fx[(4999, -2)]["log10_n_bound"])["verdict"] == "needs-sieve"
    assert n_elimination(83, -2, 3.0)["verdict"] == "n = m0"
    rep = height_chain(83, -2, 10, 10)
    assert n_elimination(83, -2, rep)["verdict"] == "n = m0"


def test_fixture_provenance():
    for f in load_fixtures():
        assert f["provenance"]
        assert f["m0"] in (-2, -1)


def test_ndigits():
    for n in (1, 9, 10, 99, 100, 10**50 - 1, 10**50):
        assert ndigits(n) == len(str(n))
    assert ndigits(7 * 10**4400) == 4401
    assert ndigits(10**5000 - 1) == 5000
