"""Descent to K' = Q(sqrt5, sqrt6), the congruence solver for the exponents of
the descent, the discriminant and height bounds for |n|, and the final sieve
that grows the modulus M' until it exceeds the bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import log10

from sympy import isprime

from .certificates import SieveCertificate, register
from .certreal import DEFAULT_PREC, CertReal
from .errors import InconsistentSystem, InsufficientPrimes, PreconditionViolated, WitnessSearchExhausted
from .galois_sieve import ModulusChain
from .okarith import DELTA, EPS, MU, PHI1, PHI2, SQRT5, KPrimeElem, fib_mod, kappa, ok_pow
from .residue import discrete_log_modp, kprime_degree_one_prime, primitive_root, reduce_kprime

__all__ = [
    "DELTA_KPRIME", "DescentData", "descent_data", "descent_identities", "binom_rows", "binom_solver",
    "binom_certificate", "disc_bound", "NBoundReport", "height_chain", "ModulusState", "final_sieve_step",
    "final_sieve", "n_elimination", "load_fixtures",
]

DELTA_KPRIME = 14400          # absolute discriminant of K'


def _kp(x) -> KPrimeElem:
    return KPrimeElem.coerce(x)


@dataclass(frozen=True)
class DescentData:
    m0: int
    kappa: KPrimeElem
    units: tuple            # (eps, delta, mu)
    phi: tuple              # (phi1, phi2)

    @property
    def true_index(self) -> int:
        return 1 if self.m0 == -2 else 2

    @property
    def exponents(self) -> tuple[int, int, int]:
        """(a, b, c) in eps^(2 m0) + sqrt5 + sqrt6 = +-eps^a delta^b mu^c phi_i."""
        return (-2, 0, 1) if self.m0 == -2 else (-1, 1, 0)


def descent_data(m0: int) -> DescentData:
    if m0 not in (-2, -1):
        raise PreconditionViolated("m0", f"{m0} not in {{-2, -1}}")
    return DescentData(m0, kappa(m0), (_kp(EPS), DELTA, MU), (PHI1, PHI2))


def _lhs(m0: int) -> KPrimeElem:
    return _kp(ok_pow(EPS, 2 * m0)) + DELTA


def descent_identities() -> dict[str, bool]:
    """The exact identities the descent relies on."""
    eps = _kp(EPS)
    out = {
        "phi1 phi2 = -sqrt5": PHI1 * PHI2 == -_kp(SQRT5),
        "eps^-4 + sqrt5 + sqrt6 = -eps^-2 mu phi1": _lhs(-2) == -(eps ** -2) * MU * PHI1,
        "eps^-2 + sqrt5 + sqrt6 = eps^-1 delta phi2": _lhs(-1) == (eps ** -1) * DELTA * PHI2,
        "N(eps) = eps^2": eps.norm_to_K() == eps * eps,
        "N(delta) = -1": DELTA.norm_to_K() == KPrimeElem(-1),
        "N(mu) = 1": MU.norm_to_K() == KPrimeElem(1),
        "N(phi_i) = 5 up to sign": all(abs(f.norm_to_Q()) == 5 for f in (PHI1, PHI2)),
    }
    for m0 in (-2, -1):
        out[f"Norm(kappa), m0={m0}, in {{-5, 19}}"] = kappa(m0).norm_to_Q() in (-5, 19)
    return out


# ---------------------------------------------------------------- Lemma 12.1 solver

@lru_cache(maxsize=1)
def _m1() -> int:
    return ModulusChain().M1


def _admissible_q(p: int, count: int, e_limit: int = 10**6):
    """Primes q = p e + 1 with (q - 1) | lcm(M1, p) and 5, 6 squares mod q."""
    M2 = _m1() if _m1() % p == 0 else _m1() * p
    cof = M2 // p
    found = []
    for e in range(1, e_limit):
        if cof % e:
            continue
        q = p * e + 1
        if not isprime(q):
            continue
        ideal = kprime_degree_one_prime(q)
        if ideal is None:
            continue
        found.append(ideal)
        if len(found) == count:
            return found
    raise InsufficientPrimes(f"only {len(found)} admissible q for p={p}")


def _row(p: int, m0: int, ideal) -> dict:
    q = ideal.q
    g = primitive_root(q)

    def lg(x):
        return discrete_log_modp(reduce_kprime(x, ideal), g, p, q)

    eps = _kp(EPS)
    base = lg(_lhs(m0)) - m0 * lg(eps)
    return {"q": q, "theta5": ideal.theta5, "theta6": ideal.theta6, "g": g,
            "L_delta": lg(DELTA), "L_mu": lg(MU),
            "rhs": [(base - lg(PHI1)) % p, (base - lg(PHI2)) % p]}


def binom_rows(p: int, m0: int, num_primes: int = 5) -> list[dict]:
    if p < 5 or not isprime(p):
        raise PreconditionViolated("p", f"{p} is not a prime >= 5")
    return [_row(p, m0, ideal) for ideal in _admissible_q(p, num_primes)]


def _solve2(rows: list[tuple[int, int, int]], p: int) -> set[tuple[int, int]]:
    """All (b, c) mod p with x b + y c = z for every row (x, y, z)."""
    rows = [(x % p, y % p, z % p) for x, y, z in rows]
    pivot = next((r for r in rows if r[0] or r[1]), None)
    if pivot is None:
        if any(z for _, _, z in rows):
            return set()
        return {(b, c) for b in range(p) for c in range(p)}
    x, y, z = pivot
    if x:
        inv = pow(x, -1, p)
        cand = {((z - y * c) * inv % p, c) for c in range(p)}
    else:
        inv = pow(y, -1, p)
        cand = {(b, z * inv % p) for b in range(p)}
    return {(b, c) for b, c in cand if all((xx * b + yy * c - zz) % p == 0 for xx, yy, zz in rows)}


def binom_solver(p: int, m0: int, i: int, num_primes: int = 5, rows: list | None = None) -> set:
    """Solutions (b, c) mod p of the stacked congruences for phi_i; raises on inconsistency."""
    if i not in (1, 2):
        raise PreconditionViolated("i", "i must be 1 or 2")
    rows = rows if rows is not None else binom_rows(p, m0, num_primes)
    sol = _solve2([(r["L_delta"], r["L_mu"], r["rhs"][i - 1]) for r in rows], p)
    if not sol:
        err = InconsistentSystem(f"no (b, c) mod {p} for m0={m0}, i={i}")
        err.rows = rows
        raise err
    return sol


def _binom_outcome(p: int, m0: int, rows: list) -> tuple[str, dict]:
    d = descent_data(m0)
    res = {}
    for i in (1, 2):
        try:
            res[i] = sorted(binom_solver(p, m0, i, rows=rows))
        except InconsistentSystem:
            res[i] = []
    want = d.exponents[1:]
    ok = res[d.true_index] == [want] and res[3 - d.true_index] == []
    return ("concluded" if ok else "survives:unexpected-solutions"), res


def binom_certificate(p: int, m0: int, num_primes: int = 5) -> SieveCertificate:
    rows = binom_rows(p, m0, num_primes)
    outcome, res = _binom_outcome(p, m0, rows)
    return SieveCertificate("binom", p, None, m0, rows, outcome,
                            {"solutions_i1": [list(s) for s in res[1]],
                             "solutions_i2": [list(s) for s in res[2]]})


@register("binom")
def _replay_binom(cert: SieveCertificate) -> bool:
    p, m0 = cert.p, cert.m0
    M2 = _m1() if _m1() % p == 0 else _m1() * p
    for r in cert.witnesses:
        q = r["q"]
        if not isprime(q) or (q - 1) % p or M2 % (q - 1):
            return False
        ideal = kprime_degree_one_prime(q)
        if ideal is None or (ideal.theta5, ideal.theta6) != (r["theta5"], r["theta6"]):
            return False
        if _row(p, m0, ideal) != r:
            return False
    outcome, _ = _binom_outcome(p, m0, cert.witnesses)
    return outcome == cert.outcome


# ---------------------------------------------------------------- discriminants

def disc_bound(p: int, m0: int, as_stated: bool = False) -> dict[int, int]:
    """Exponents of a divisor bound for the discriminant of K' (kappa^(1/p)).

    The tower formula gives Norm(p^p kappa^(p-1)) * 14400^p.  Norm(kappa) is
    computed exactly; ``as_stated=True`` instead uses 19 for m0 = -1.
    """
    if p < 5 or not isprime(p):
        raise PreconditionViolated("p", f"{p} is not a prime >= 5")
    if m0 not in (-2, -1):
        raise PreconditionViolated("m0", f"{m0} not in {{-2, -1}}")
    nk = abs(kappa(m0).norm_to_Q())
    if as_stated:
        nk = 5 if m0 == -2 else 19
    out: dict[int, int] = {2: 6 * p, 3: 2 * p, 5: 2 * p}
    out[p] = out.get(p, 0) + 4 * p
    from sympy import factorint
    for ell, e in factorint(int(Fraction(nk))).items():
        out[ell] = out.get(ell, 0) + e * (p - 1)
    return dict(sorted(out.items()))


def disc_value(exps: dict[int, int]) -> int:
    v = 1
    for ell, e in exps.items():
        v *= ell**e
    return v


# ---------------------------------------------------------------- heights

@dataclass
class NBoundReport:
    p: int
    m0: int
    A1: CertReal
    A2: CertReal
    Y_bound: CertReal
    n_bound: CertReal          # bound for |n| log eps ... divided out: bound for |n|
    log10_n_bound: CertReal
    fixed_point_ok: bool
    provenance: str = "inputs"

    def to_json(self) -> dict:
        return {"p": self.p, "m0": self.m0, "A1": self.A1.to_json(), "A2": self.A2.to_json(),
                "Y_bound": self.Y_bound.to_json(), "log10_n_bound": self.log10_n_bound.to_json(),
                "fixed_point_ok": self.fixed_point_ok, "provenance": self.provenance}


def height_chain(p: int, m0: int, A1, A2, prec: int = DEFAULT_PREC, provenance: str = "inputs") -> NBoundReport:
    """Y <= 2 A1 log A1 + 2 A2 + 10 log 2, then |n| log eps <= p Y + log 2 + log(sqrt5 + sqrt6)/2.

    Works in logarithms so that bounds like 10^400000 stay representable.
    """
    A1, A2 = CertReal.exact(A1, prec), CertReal.exact(A2, prec)
    if not (A1.certainly_positive() and A2.certainly_positive()):
        raise PreconditionViolated("A", "A1, A2 must be positive")
    log2 = CertReal.exact(2, prec).log()
    Y = 2 * A1 * A1.log() + 2 * A2 + 10 * log2
    # f(Y) = Y - A2 - 3 log 2 - A1 log(Y + 4 log 2) is increasing past A1 - 4 log 2;
    # f(Y_bound) > 0 there means every Y obeying the inequality lies below Y_bound
    f = Y - A2 - 3 * log2 - A1 * (Y + 4 * log2).log()
    try:
        fixed = bool(f > 0 and Y > A1 - 4 * log2)
    except Exception:
        fixed = False
    sqrt5, sqrt6 = CertReal.exact(5, prec).sqrt(), CertReal.exact(6, prec).sqrt()
    logeps = ((1 + sqrt5) / 2).log()
    nlog = (p * Y + log2 + (sqrt5 + sqrt6).log() / 2) / logeps     # bound for |n|
    log10n = nlog.log() / CertReal.exact(10, prec).log()
    return NBoundReport(p, m0, A1, A2, Y, nlog, log10n, fixed, provenance)


# ---------------------------------------------------------------- final sieve

@dataclass
class ModulusState:
    """M' = M1 * prod ell^extra; n = m0 (mod M') is known."""
    p: int
    m0: int
    extra: dict = field(default_factory=dict)

    @property
    def value(self) -> int:
        v = _m1()
        for ell, e in self.extra.items():
            v *= ell**e
        return v

    def grown(self, ell: int) -> "ModulusState":
        ex = dict(self.extra)
        ex[ell] = ex.get(ell, 0) + 1
        return ModulusState(self.p, self.m0, dict(sorted(ex.items())))

    @property
    def log10(self) -> float:
        return _log10(self.value)


def _log10(n: int) -> float:
    s = max(n.bit_length() - 64, 0)
    return log10(n >> s) + s * log10(2)


def ndigits(n: int) -> int:
    """Decimal digit count without converting to a string."""
    d = int(_log10(n)) + 1
    while 10 ** (d - 1) > n:
        d -= 1
    while 10**d <= n:
        d += 1
    return d


def _ord(n: int, ell: int) -> int:
    r = 0
    while n % ell == 0:
        n //= ell
        r += 1
    return r


def _crt(a: int, m: int, b: int, n: int) -> int:
    """x = a (mod m), x = b (mod n), gcd(m, n) = 1."""
    return (a + m * ((b - a) * pow(m, -1, n) % n)) % (m * n)


def _final_test(n_mod: int, q: int, exponent: int) -> int:
    return pow((fib_mod(2 * n_mod, q) + 2) % q, exponent, q)


def _final_qs(p: int, ell: int, r: int, modulus: int, max_q: int):
    """q = k p ell^(r+1) + 1, q = +-1 (mod 5), k p ell^r | p M', ell not dividing k."""
    pm = modulus * p
    base = p * ell**r
    count = 0
    k = 0
    while count < max_q:
        k += 1
        if k % ell == 0 or pm % (k * base):
            continue
        q = k * p * ell ** (r + 1) + 1
        if q % 5 in (1, 4) and isprime(q):
            count += 1
            yield k, q


def final_sieve_step(state: ModulusState, ell: int, max_q: int = 200) -> tuple[SieveCertificate, ModulusState]:
    """Show n = m0 (mod ell M') from n = m0 (mod M')."""
    p, m0 = state.p, state.m0
    if not (3 <= ell < 10**4 and isprime(ell) and ell != p):
        raise PreconditionViolated("ell", f"ell={ell} must be a prime in [3, 10^4), ell != p")
    M = state.value
    r = _ord(M, ell)
    ellr = ell**r
    pending = [m0 + t * ellr for t in range(1, ell)]
    witnesses = []
    for k, q in _final_qs(p, ell, r, M, max_q):
        if not pending:
            break
        cof = k * p
        left = []
        for m in pending:
            n_mod = _crt(m0 % cof, cof, m % (ellr * ell), ellr * ell)
            val = _final_test(n_mod, q, k * ell ** (r + 1))
            if val in (0, 1):
                left.append(m)
            else:
                witnesses.append({"m": m, "q": q, "k": k, "n_mod": n_mod, "value": val})
        pending = left
    if pending:
        raise WitnessSearchExhausted(f"ell={ell}: m={pending[0]} survives {max_q} primes", m=pending[0], p=p)
    new = state.grown(ell)
    cert = SieveCertificate("final", p, ell, m0, witnesses, "eliminated",
                            {"ell": ell, "r": r, "extra": {str(a): b for a, b in state.extra.items()},
                             "modulus_digits": ndigits(M)})
    return cert, new


def final_sieve(p: int, m0: int, ells=(3, 5, 7), state: ModulusState | None = None) -> tuple[list, ModulusState]:
    state = state or ModulusState(p, m0)
    certs = []
    for ell in ells:
        cert, state = final_sieve_step(state, ell)
        certs.append(cert)
    return certs, state


@register("final")
def _replay_final(cert: SieveCertificate) -> bool:
    p, m0 = cert.p, cert.m0
    ell, r = cert.meta["ell"], cert.meta["r"]
    state = ModulusState(p, m0, {int(a): int(b) for a, b in cert.meta.get("extra", {}).items()})
    M = state.value
    if _ord(M, ell) != r:
        return False
    ellr = ell**r
    need = set(m0 + t * ellr for t in range(1, ell))
    for w in cert.witnesses:
        q, k, m = w["q"], w["k"], w["m"]
        if q != k * p * ell ** (r + 1) + 1 or q % 5 not in (1, 4) or not isprime(q):
            return False
        if k % ell == 0 or (M * p) % (k * p * ellr):
            return False
        n_mod = _crt(m0 % (k * p), k * p, m % (ellr * ell), ellr * ell)
        if n_mod != w["n_mod"]:
            return False
        val = _final_test(n_mod, q, k * ell ** (r + 1))
        if val in (0, 1) or val != w["value"]:
            return False
        need.discard(m)
    return not need and cert.outcome == "eliminated"


# ---------------------------------------------------------------- conclusion

def n_elimination(p: int, m0: int, bound, modulus_log10: float | None = None,
                  state: ModulusState | None = None) -> dict:
    """n = m0 follows once |n| <= B with B + 2 < M' and n = m0 (mod M').

    ``bound`` is an NBoundReport or a log10 upper bound for |n|.
    """
    if isinstance(bound, NBoundReport):
        lb = bound.log10_n_bound.upper
    else:
        lb = float(bound)
    if modulus_log10 is None:
        st = state or ModulusState(p, m0)
        modulus_log10 = st.log10
    # log10 margin of one unit covers the +2
    if lb + 1e-9 < modulus_log10 - 1e-9 and modulus_log10 > 1:
        return {"p": p, "m0": m0, "verdict": "n = m0", "log10_bound": lb, "log10_modulus": modulus_log10}
    return {"p": p, "m0": m0, "verdict": "needs-sieve", "log10_bound": lb, "log10_modulus": modulus_log10,
            "log10_growth_needed": lb - modulus_log10}


def load_fixtures(path=None) -> list[dict]:
    """|n| bound fixtures: reported values keyed by (p, m0), with provenance labels."""
    import json
    from importlib.resources import files
    if path is None:
        text = files("fibsift").joinpath("data/n_bounds.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)
