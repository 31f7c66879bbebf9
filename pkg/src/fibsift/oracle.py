"""Exhaustive search for F_k +- 2 = y^p over a range of indices.

Independent of every sieve in the package: each candidate is settled by exact
integer root extraction, so the output is the ground truth the sieves are
checked against.
"""

from __future__ import annotations

from sympy import primerange

from .certificates import SieveCertificate, register
from .errors import PreconditionViolated
from .okarith import exact_root, fib

__all__ = ["brute_force_oracle", "oracle_certificate", "THEOREM_INDICES"]

THEOREM_INDICES = frozenset({1, 2, 3, 4, 9})


def _exponents(v: int):
    """2 and the odd primes up to log2|v| (at least 3, so that -1 = (-1)^3 is seen)."""
    top = max(abs(v).bit_length(), 3)
    yield 2
    yield from primerange(3, top + 1)


def _power_of_five(v: int) -> bool:
    v = abs(v)
    if v < 5:
        return False
    while v % 5 == 0:
        v //= 5
    return v == 1


def brute_force_oracle(k_max: int, include_trivial: bool = False) -> list[tuple[int, int, int, int]]:
    """All (k, sign, y, p) with F_k + 2*sign = y^p, |k| <= k_max, p = 2 or an odd prime.

    Values in {-1, 0, 1} are perfect powers for every p and are reported once,
    with the smallest exponent that works.  With ``include_trivial`` the rows
    F_k + 2 = +-5^m (k even, m >= 1) are added with p = 1: these are the
    pseudo-solutions that share a Frey curve of the right conductor.
    """
    if k_max < 9:
        raise PreconditionViolated("k_max", "k_max >= 9 required")
    out = []
    for k in range(-k_max, k_max + 1):
        f = fib(k)
        for sign in (1, -1):
            v = f + 2 * sign
            if include_trivial and sign == 1 and k % 2 == 0 and _power_of_five(v):
                out.append((k, sign, v, 1))
            for p in _exponents(v):
                y = exact_root(v, p)
                if y is None:
                    continue
                out.append((k, sign, y, p))
                if abs(v) <= 1:
                    break
    return out


def solution_indices(sols) -> set[int]:
    return {abs(k) for k, _, _, p in sols if p >= 2}


def oracle_certificate(k_max: int) -> SieveCertificate:
    sols = brute_force_oracle(k_max)
    idx = solution_indices(sols)
    rows = [{"k": k, "sign": s, "y": y, "p": p} for k, s, y, p in sols]
    outcome = "concluded" if idx == THEOREM_INDICES else f"survives:{sorted(idx - THEOREM_INDICES)}"
    return SieveCertificate("oracle", None, k_max, None, rows, outcome, {"indices": sorted(idx)})


@register("oracle")
def _replay_oracle(cert: SieveCertificate) -> bool:
    for w in cert.witnesses:
        if w["y"] ** w["p"] != fib(w["k"]) + 2 * w["sign"]:
            return False
    fresh = oracle_certificate(cert.m)
    return fresh.witnesses == cert.witnesses and fresh.outcome == cert.outcome
