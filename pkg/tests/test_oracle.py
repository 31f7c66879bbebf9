import pytest

from fibsift.certificates import replay
from fibsift.errors import PreconditionViolated
from fibsift.okarith import fib
from fibsift.oracle import THEOREM_INDICES, brute_force_oracle, oracle_certificate, solution_indices


def test_k200_indices():
    sols = brute_force_oracle(200)
    assert solution_indices(sols) == THEOREM_INDICES == {1, 2, 3, 4, 9}
    rows = {(k, s): (y, p) for k, s, y, p in sols}
    assert rows[(9, 1)] == (6, 2)
    assert rows[(9, -1)] == (2, 5)
    assert rows[(3, 1)] == (2, 2)
    assert rows[(3, -1)] == (0, 2)
    assert rows[(1, -1)] == (-1, 3)


def test_every_row_is_exact():
    for k, s, y, p in brute_force_oracle(120):
        assert y**p == fib(k) + 2 * s


def test_k9_same_set():
    assert solution_indices(brute_force_oracle(9)) == THEOREM_INDICES
    with pytest.raises(PreconditionViolated):
        brute_force_oracle(8)


def test_trivial_rows():
    plain = brute_force_oracle(60)
    full = brute_force_oracle(60, include_trivial=True)
    extra = [r for r in full if r not in plain]
    assert (4, 1, 5, 1) in extra
    assert all(p == 1 for *_, p in extra)
    assert solution_indices(full) == THEOREM_INDICES


def test_certificate_replay():
    c = oracle_certificate(50)
    assert c.outcome == "concluded"
    assert replay(c)
    c.witnesses[0]["y"] += 1
    assert not replay(c)
