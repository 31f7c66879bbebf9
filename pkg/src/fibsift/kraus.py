"""Kraus-style elimination with auxiliary primes q = kp + 1.

For a split q the value t = eps^(2n) mod q_1 is pinned down by y^p mod q,
which lies in the order-k subgroup of p-th powers.  Comparing traces of the
two reductions G_t, H_t with those of E_{m0} mod p shrinks the candidate set
for t; an empty set rules out m0 = 2, and a singleton {eps_1^(2 m0)} forces
n = m0 (mod p) for m0 in {-2, -1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from sympy import isprime

from .certificates import SieveCertificate, register
from .errors import PreconditionViolated, SearchExhausted
from .frey import trace_fq
from .galois_sieve import ModulusChain
from .unit_eq import ndigits
from .residue import SplitData, ideals_above, is_square, primitive_root, sqrt_mod_prime

__all__ = [
    "KrausContext", "kraus_context", "ypowers_set", "tset", "sset", "rset",
    "kraus_criterion", "default_modulus",
]

A4 = 6


@lru_cache(maxsize=1)
def default_modulus() -> int:
    return ModulusChain().M1


@dataclass(frozen=True)
class KrausContext:
    p: int
    k: int
    q: int
    theta1: int
    eps1: int
    a1: int          # a_{q_1}(E_{m0})
    a2: int          # a_{q_2}(E_{m0})
    m0: int

    @property
    def theta2(self) -> int:
        return (-self.theta1) % self.q

    def cond_I(self) -> bool:
        return self.q == self.k * self.p + 1 and isprime(self.q) and self.q % 5 in (1, 4)

    def cond_II(self) -> bool:
        pm2 = {2 % self.p, -2 % self.p}
        return self.a1 % self.p not in pm2 or self.a2 % self.p not in pm2

    def cond_III(self) -> bool:
        return pow(self.eps1, 2 * self.k, self.q) != 1


def _trace_g(t: int, theta: int, q: int) -> int:
    return trace_fq(2 * (t + theta) % q, A4, q)


def kraus_context(p: int, k: int, m0: int) -> KrausContext | None:
    """Context for q = kp + 1, or None if (I) fails."""
    q = k * p + 1
    if q % 5 not in (1, 4) or not isprime(q):
        return None
    ideal: SplitData = ideals_above(q)[0]
    th = ideal.theta5
    eps1 = (1 + th) * pow(2, -1, q) % q
    t0 = pow(eps1, 2 * m0, q)
    a1 = _trace_g(t0, th, q)
    a2 = _trace_g(pow(t0, -1, q), -th % q, q)
    return KrausContext(p, k, q, th, eps1, a1, a2, m0)


def ypowers_set(ctx: KrausContext) -> set[int]:
    """The k distinct p-th powers in F_q^*."""
    omega = pow(primitive_root(ctx.q), ctx.p, ctx.q)
    out, w = set(), 1
    for _ in range(ctx.k):
        out.add(w)
        w = w * omega % ctx.q
    return out


def tset(ctx: KrausContext) -> set[int]:
    """Square roots t of T^2 + (2 - w) theta_1 T - 1 over w in the p-th powers."""
    q = ctx.q
    inv2 = pow(2, -1, q)
    out = set()
    for w in ypowers_set(ctx):
        b = (2 - w) * ctx.theta1 % q
        d = sqrt_mod_prime((b * b + 4) % q, q)
        if d is None:
            continue
        for t in {(-b + d) * inv2 % q, (-b - d) * inv2 % q}:
            assert t != 0  # P_w(0) = -1
            if is_square(t, q):
                out.add(t)
    return out


def sset(ctx: KrausContext, m0: int | None = None, modulus: int | None = None) -> set[int]:
    m0 = ctx.m0 if m0 is None else m0
    modulus = default_modulus() if modulus is None else modulus
    q = ctx.q
    v = (q - 1) // gcd(q - 1, 2 * modulus)
    base_inv = pow(pow(ctx.eps1, 2 * m0, q), -1, q)
    return {t for t in tset(ctx) if pow(t * base_inv % q, v, q) == 1}


def rset(ctx: KrausContext, m0: int | None = None, modulus: int | None = None) -> set[int]:
    """Members of S whose curves G_t, H_t match the traces of E_{m0} mod p (A4 = 6)."""
    q, p = ctx.q, ctx.p
    out = set()
    for t in sset(ctx, m0, modulus):
        if (_trace_g(t, ctx.theta1, q) - ctx.a1) % p:
            continue
        if (_trace_g(pow(t, -1, q), ctx.theta2, q) - ctx.a2) % p:
            continue
        out.add(t)
    return out


def _witness(ctx: KrausContext, modulus: int) -> dict:
    return {
        "q": ctx.q, "k": ctx.k, "theta1": ctx.theta1, "a1": ctx.a1, "a2": ctx.a2,
        "T": sorted(tset(ctx)), "S": sorted(sset(ctx, modulus=modulus)),
        "R": sorted(rset(ctx, modulus=modulus)),
    }


def _success(ctx: KrausContext, modulus: int) -> bool:
    if not (ctx.cond_I() and ctx.cond_II()):
        return False
    r = rset(ctx, modulus=modulus)
    if ctx.m0 == 2:
        return not r
    if not ctx.cond_III():
        return False
    target = pow(ctx.eps1, 2 * ctx.m0, ctx.q)
    return all(t == target for t in r)


def kraus_criterion(p: int, m0: int, k_bound: int = 2000, modulus: int | None = None) -> SieveCertificate:
    """First q = kp + 1 (k ascending) settling (p, m0); m0 = 2 is eliminated, else n = m0 (mod p)."""
    if p < 5 or not isprime(p):
        raise PreconditionViolated("p", f"{p} is not a prime >= 5")
    if m0 not in (2, -2, -1):
        raise PreconditionViolated("m0", f"{m0} not in {{2, -2, -1}}")
    modulus = default_modulus() if modulus is None else modulus
    for k in range(1, k_bound + 1):
        ctx = kraus_context(p, k, m0)
        if ctx is None or not ctx.cond_II():
            continue
        if _success(ctx, modulus):
            outcome = "eliminated" if m0 == 2 else "concluded"
            meta = {"A4": A4, "modulus_digits": ndigits(modulus)}
            if modulus != default_modulus():
                meta["modulus"] = modulus
            return SieveCertificate("kraus", p, None, m0, [_witness(ctx, modulus)], outcome, meta)
    raise SearchExhausted(f"no q = kp+1 with k <= {k_bound} settles p={p}, m0={m0}", p=p)


@register("kraus")
def _replay_kraus(cert: SieveCertificate) -> bool:
    (w,) = cert.witnesses
    p, m0 = cert.p, cert.m0
    modulus = cert.meta.get("modulus", default_modulus())
    if w["q"] != w["k"] * p + 1:
        return False
    ctx = kraus_context(p, w["k"], m0)
    if ctx is None or ctx.theta1 != w["theta1"] or (ctx.a1, ctx.a2) != (w["a1"], w["a2"]):
        return False
    if _witness(ctx, modulus) != w:
        return False
    want = "eliminated" if m0 == 2 else "concluded"
    return _success(ctx, modulus) and cert.outcome == want
