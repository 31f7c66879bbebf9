"""Sieves on the mod-p Galois representation of the Frey curve.

* irreducibility for p in {5, 7, 13} by a witness ideal whose Frobenius
  polynomial is irreducible mod p;
* irreducibility for the remaining p via resultants against t^12 - 1;
* the three-curve sieve B_m(E) over the residue classes mod M0 = 2520;
* inductive enlargement of the modulus from M0 to M1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm, prod

from sympy import isprime, primerange

from .certificates import SieveCertificate, register
from .errors import BadGcd, NoWitness, PreconditionViolated, WitnessSearchExhausted
from .frey import bq, count_points_aq, reduce_frey
from .okarith import EPS, EPSBAR, ok_norm, ok_pow
from .residue import SplitData, ideals_above, is_square, list_Q_primes, mult_order, reduce_ok

__all__ = [
    "M0", "Q_SET", "S_SET", "M_SET", "compute_B_irred", "resultant_t12",
    "irreducibility_small_p", "irreducibility_resultant", "three_curve_sieve",
    "three_curve_certificate", "ModulusChain", "m1_enlarge", "strip_primes",
    "q_set", "s_set", "m_set",
]

M0 = 2520
THREE_CURVES = (2, -2, -1)


@lru_cache(maxsize=1)
def q_set() -> tuple[SplitData, ...]:
    return tuple(list_Q_primes(300, M0))


@lru_cache(maxsize=1)
def s_set() -> tuple[SplitData, ...]:
    return tuple(i for i in q_set() if i.q % 24 not in (1, 5, 19, 23))


@lru_cache(maxsize=1)
def m_set() -> tuple[int, ...]:
    return tuple(m for m in range(M0 + 1) if m % 12 in (2, 4, 7, 8, 10, 11))


Q_SET, S_SET, M_SET = q_set, s_set, m_set


def strip_primes(n: int, primes) -> int:
    """n with every factor from ``primes`` removed (absolute value)."""
    n = abs(n)
    if n == 0:
        return 0
    for ell in primes:
        while n % ell == 0:
            n //= ell
    return n


def ideal_from_key(q: int, idx: int) -> SplitData:
    return ideals_above(q)[idx - 1]


# ---------------------------------------------------------------- trace tables

@lru_cache(maxsize=None)
def _period_table(ideal: SplitData) -> tuple[int, tuple]:
    """(ord eps^2, per residue r: (reduction type, b_q(r)))."""
    o = mult_order(reduce_ok(EPS * EPS, ideal), ideal.q)
    rows = []
    for r in range(o):
        rc = reduce_frey(r, ideal)
        rows.append((rc.reduction_type, bq(r, ideal)))
    return o, tuple(rows)


def _row(ideal: SplitData, m: int):
    o, rows = _period_table(ideal)
    return rows[m % o]


# ---------------------------------------------------------------- irreducibility

def compute_B_irred() -> int:
    """lcm of |Norm(N_s(eps) - 1)| over s in {(12, 0), (0, 12)}."""
    twisted = (ok_pow(EPS, 12), ok_pow(EPSBAR, 12))
    return lcm(*(abs(ok_norm(t - 1)) for t in twisted))


def resultant_t12(a: int, n: int) -> int:
    """Res(t^2 - a t + n, t^12 - 1) = n^12 - V_12 + 1 with V the Lucas sequence of (a, n)."""
    v0, v1 = 2, a
    for _ in range(11):
        v0, v1 = v1, a * v1 - n * v0
    return n**12 - v1 + 1


def _irreducible_mod_p(a: int, n: int, p: int) -> bool:
    disc = (a * a - 4 * n) % p
    return disc != 0 and not is_square(disc, p)


def irreducibility_small_p(p: int) -> SieveCertificate:
    if p not in (5, 7, 13):
        raise PreconditionViolated("p", f"small-p branch covers 5, 7, 13; got {p}")
    witnesses = []
    for m in m_set():
        for ideal in q_set():
            kind, a = _row(ideal, m)
            if kind == "good" and _irreducible_mod_p(a, ideal.norm, p):
                witnesses.append({"m": m, "q": ideal.q, "idx": ideal.ideal_index, "a_q": a,
                                  "norm": ideal.norm})
                break
        else:
            raise NoWitness(f"no irreducibility witness for m={m}, p={p}", m=m, p=p)
    return SieveCertificate("irreducibility-small-p", p, None, None, witnesses, "eliminated",
                            {"count": len(witnesses)})


@register("irreducibility-small-p")
def _replay_small_p(cert: SieveCertificate) -> bool:
    p = cert.p
    if sorted(w["m"] for w in cert.witnesses) != list(m_set()):
        return False
    for w in cert.witnesses:
        ideal = ideal_from_key(w["q"], w["idx"])
        if ideal not in q_set():
            return False
        rc = reduce_frey(w["m"], ideal)
        if rc.reduction_type != "good":
            return False
        a = count_points_aq(rc).a_q
        if a != w["a_q"] or not _irreducible_mod_p(a, ideal.norm, p):
            return False
    return cert.outcome == "eliminated"


def _resultant_gcd(m: int) -> tuple[int, list]:
    g = 0
    rows = []
    for ideal in s_set():
        kind, a = _row(ideal, m)
        if kind != "good":
            # q | y is excluded for the ideals of S, so this residue class is impossible
            rows.append({"q": ideal.q, "idx": ideal.ideal_index, "type": kind})
            continue
        r = resultant_t12(a, ideal.norm)
        g = gcd(g, r)
        rows.append({"q": ideal.q, "idx": ideal.ideal_index, "a_q": a, "res": r})
    return g, rows


def irreducibility_resultant(m: int) -> SieveCertificate:
    """gcd of the resultants over S; no prime factor 11 or >= 17 may remain."""
    if m % 12 not in (2, 4, 7, 8, 10, 11):
        raise PreconditionViolated("m", f"{m} is not in the admissible index classes")
    g, rows = _resultant_gcd(m)
    rest = strip_primes(g, (2, 3, 5, 7, 13))
    if g == 0 or rest != 1:
        bad = sorted(_prime_factors(rest)) if rest else []
        raise BadGcd(m, bad)
    return SieveCertificate("irreducibility-resultant", None, m, None, rows, "eliminated",
                            {"gcd": g, "r": 1})


def _prime_factors(n: int) -> set[int]:
    from sympy import factorint
    return set(factorint(n))


@register("irreducibility-resultant")
def _replay_resultant(cert: SieveCertificate) -> bool:
    g, rows = _resultant_gcd(cert.m)
    return (rows == cert.witnesses and g == cert.meta.get("gcd")
            and g != 0 and strip_primes(g, (2, 3, 5, 7, 13)) == 1)


# ---------------------------------------------------------------- three curves

def _curve_traces(E) -> dict:
    """a_q(E) for q in the sieve set; E is an index m0 or a mapping (q, idx) -> a_q."""
    if isinstance(E, int):
        out = {}
        for ideal in q_set():
            kind, a = _row(ideal, E)
            if kind != "good":
                raise PreconditionViolated("E", f"E_{E} has bad reduction at {ideal}")
            out[ideal.key()] = a
        return out
    return dict(E)


def three_curve_sieve(m: int, E) -> int:
    """B_m(E) = gcd{ b_q(m) - a_q(E) : q in the sieve set }."""
    traces = _curve_traces(E)
    g = 0
    for ideal in q_set():
        g = gcd(g, _row(ideal, m)[1] - traces[ideal.key()])
    return g


def three_curve_certificate(m0: int) -> SieveCertificate:
    """B_m(E_{m0}) for every m in the admissible classes; zeros are survivors."""
    traces = _curve_traces(m0)
    rows, zeros, bad = [], [], []
    for m in m_set():
        g = three_curve_sieve(m, traces)
        rows.append({"m": m, "B": g})
        if g == 0:
            zeros.append(m)
        elif strip_primes(g, (2, 3)) != 1:
            bad.append(m)
    outcome = "eliminated" if not bad and not zeros else (
        f"survives:{','.join(map(str, zeros))}" if not bad else "survives:large-prime")
    return SieveCertificate("three-curve", None, None, m0, rows, outcome,
                            {"zeros": zeros, "large_prime": bad})


@register("three-curve")
def _replay_three_curve(cert: SieveCertificate) -> bool:
    fresh = three_curve_certificate(cert.m0)
    return fresh.witnesses == cert.witnesses and fresh.outcome == cert.outcome


# ---------------------------------------------------------------- M0 -> M1

@dataclass(frozen=True)
class ModulusChain:
    ell_bound: int = 10_000
    m0_modulus: int = M0

    @property
    def ells(self) -> tuple[int, ...]:
        return tuple(primerange(11, self.ell_bound))

    def L(self, i: int) -> int:
        return self.m0_modulus * prod(self.ells[:i])

    @property
    def M1(self) -> int:
        return self.L(len(self.ells))


def _divides(d: int, modulus: int) -> bool:
    return modulus % d == 0


def _aux_primes(ell: int, L_prev: int):
    """Primes q = 1 (mod 5) with ell | q-1 and q-1 | ell*L_prev, ascending."""
    d = 5
    while True:
        if _divides(d, L_prev):
            q = ell * d + 1
            if isprime(q):
                yield q
        d += 5


def _bq_at(m: int, ideal: SplitData) -> int:
    return bq(m % (ideal.q - 1), ideal)


def m1_enlarge(m0: int, i: int, chain: ModulusChain | None = None, max_q: int = 400) -> SieveCertificate:
    """Step i of the chain: show n = m0 (mod L_{i-1}) forces n = m0 (mod L_i)."""
    chain = chain or ModulusChain()
    ell = chain.ells[i - 1]
    L_prev = chain.L(i - 1)
    L_i = ell * L_prev
    pending = {j: 0 for j in range(1, ell)}
    used = []
    for count, q in enumerate(_aux_primes(ell, L_prev)):
        if not pending or count >= max_q:
            break
        for ideal in ideals_above(q):
            a_e = _bq_at(m0, ideal)
            vals = []
            for j in list(pending):
                b = _bq_at(m0 + j * L_prev, ideal)
                vals.append([j, b])
                pending[j] = gcd(pending[j], b - a_e)
                if pending[j] != 0 and strip_primes(pending[j], (2, 3)) == 1:
                    del pending[j]
            used.append({"q": q, "idx": ideal.ideal_index, "a_E": a_e, "b": vals})
            if not pending:
                break
    if pending:
        j = min(pending)
        raise WitnessSearchExhausted(f"step {i} (ell={ell}) left m = m0 + {j}*L", m=m0 + j * L_prev)
    return SieveCertificate("m1-step", None, i, m0, used, "eliminated",
                            {"ell": ell, "L_prev": L_prev, "L": L_i})


@register("m1-step")
def _replay_m1(cert: SieveCertificate) -> bool:
    ell = cert.meta["ell"]
    L_prev = cert.meta["L_prev"]
    chain = ModulusChain()
    if ell != chain.ells[cert.m - 1] or L_prev != chain.L(cert.m - 1):
        return False
    g = {j: 0 for j in range(1, ell)}
    for w in cert.witnesses:
        q = w["q"]
        if q % 5 != 1 or (q - 1) % ell or (ell * L_prev) % (q - 1) or not isprime(q):
            return False
        ideal = ideal_from_key(q, w["idx"])
        a_e = _bq_at(cert.m0, ideal)
        if a_e != w["a_E"]:
            return False
        for j, b in w["b"]:
            if _bq_at(cert.m0 + j * L_prev, ideal) != b:
                return False
            g[j] = gcd(g[j], b - a_e)
    return all(v != 0 and strip_primes(v, (2, 3)) == 1 for v in g.values())
