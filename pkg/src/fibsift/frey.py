"""The Frey curve E_m : Y^2 = X^3 + 2x X^2 + 6X with x = eps^(2m) + sqrt5.

Reduction at prime ideals of O_K, traces of Frobenius, and the hybrid trace
b_q(m) that agrees with a_q at good reduction and with +-(Norm q + 1) at
multiplicative reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .errors import BadCharacteristic, BadIdeal, NotGoodReduction
from .okarith import EPS, SQRT5, OKElem, fib, ok_pow
from .residue import Fq2, SplitData, factor_cached, is_square, mult_order, reduce_ok, sqrt_mod_prime

__all__ = [
    "FreyCurve", "ReducedCurve", "TraceResult", "frey_curve", "disc_conductor_data",
    "reduce_frey", "count_points_aq", "bq", "trace_fq", "frey_x_mod",
    "trace_charsum", "trace_bsgs", "trace_naive", "LEVEL",
    "CHARSUM_LIMIT",
]

# Character sums are used up to this field size; beyond it BSGS with the twist.
CHARSUM_LIMIT = 2_000_000

# (2)^7 (3) (sqrt5), as (generator description, exponent) pairs
LEVEL = (("2", 7), ("3", 1), ("sqrt5", 1))


@dataclass(frozen=True, slots=True)
class FreyCurve:
    m: int
    x: OKElem

    @property
    def a2(self) -> OKElem:
        return 2 * self.x

    @property
    def a4(self) -> OKElem:
        return OKElem(6)

    def check_identity(self) -> bool:
        lhs = self.x * self.x - 6
        rhs = SQRT5 * ok_pow(EPS, 2 * self.m) * (fib(2 * self.m) + 2)
        return lhs == rhs


@dataclass(frozen=True, slots=True)
class ReducedCurve:
    ideal: SplitData
    a2: object
    a4: object
    reduction_type: str  # "good", "split" or "nonsplit"

    @property
    def field_size(self) -> int:
        return self.ideal.norm


@dataclass(frozen=True, slots=True)
class TraceResult:
    a_q: int
    field_size: int
    method: str = field(default="", compare=False)


def frey_curve(m: int) -> FreyCurve:
    return FreyCurve(m, ok_pow(EPS, 2 * m) + SQRT5)


def disc_conductor_data(m: int) -> dict:
    """Discriminant of E_m both from the Weierstrass formula and in factored form.

    For Y^2 = X^3 + a2 X^2 + a4 X the discriminant is 16 a4^2 (a2^2 - 4 a4).
    """
    c = frey_curve(m)
    a2, a4 = c.a2, c.a4
    standard = 16 * a4 * a4 * (a2 * a2 - 4 * a4)
    y_part = fib(2 * m) + 2
    factored = 2**8 * 3**2 * ok_pow(EPS, 2 * m) * SQRT5 * y_part
    if standard != factored:
        raise AssertionError(f"discriminant identity fails at m={m}")
    return {
        "m": m,
        "discriminant": standard,
        "y_part": y_part,
        "level": LEVEL,
        "conductor_is_level": _unit_or_sqrt5_power(y_part),
    }


def _unit_or_sqrt5_power(v: int) -> bool:
    # y-part contributes nothing beyond (sqrt5) when it is +-1 or +-5^k
    v = abs(v)
    while v and v % 5 == 0:
        v //= 5
    return v == 1


def frey_x_mod(m: int, ideal: SplitData):
    """Reduction of x = eps^(2m) + sqrt5 at ``ideal`` without forming eps^(2m)."""
    e = reduce_ok(EPS, ideal)
    s5 = reduce_ok(SQRT5, ideal)
    if isinstance(e, Fq2):
        return e ** (2 * m) + s5
    return (pow(e, 2 * m, ideal.q) + s5) % ideal.q


def _check_char(ideal: SplitData):
    if ideal.q in (2, 3, 5):
        raise BadCharacteristic(f"residue characteristic {ideal.q} divides 30")


def reduce_frey(curve: FreyCurve | int, ideal: SplitData, ideal_index: int | None = None) -> ReducedCurve:
    _check_char(ideal)
    if ideal_index is not None and ideal_index != ideal.ideal_index:
        ideal = ideal.conjugate()
    if isinstance(curve, FreyCurve):
        x = reduce_ok(curve.x, ideal)
    else:
        x = frey_x_mod(curve, ideal)
    return _reduced_from_x(x, ideal)


def _reduced_from_x(x, ideal: SplitData) -> ReducedCurve:
    q = ideal.q
    if isinstance(x, Fq2):
        d = x * x - 6
        zero = d.is_zero()
        a2, a4 = 2 * x, Fq2(6, 0, q)
    else:
        zero = (x * x - 6) % q == 0
        a2, a4 = 2 * x % q, 6
    if not zero:
        return ReducedCurve(ideal, a2, a4, "good")
    split = is_square(-x, q) if not isinstance(x, Fq2) else is_square(-x)
    return ReducedCurve(ideal, a2, a4, "split" if split else "nonsplit")


# ---------------------------------------------------------------- point counting

@lru_cache(maxsize=8)
def _chi_table(q: int) -> np.ndarray:
    chi = np.full(q, -1, dtype=np.int8)
    xs = np.arange(1, (q - 1) // 2 + 1, dtype=np.int64)
    chi[(xs * xs) % q] = 1
    chi[0] = 0
    return chi


def trace_charsum(a: int, b: int, q: int) -> int:
    """a_q of Y^2 = X^3 + aX^2 + bX over F_q as minus the Legendre-symbol sum."""
    chi = _chi_table(q)
    total = 0
    step = 1 << 20
    for start in range(0, q, step):
        x = np.arange(start, min(q, start + step), dtype=np.int64)
        f = (x + a) % q
        f = (f * x + b) % q
        f = (f * x) % q
        total += int(chi[f].sum(dtype=np.int64))
    return -total


def trace_naive(a, b, q: int) -> int:
    """Count points by enumerating every (X, Y); for tiny fields and testing only."""
    if isinstance(a, Fq2) or isinstance(b, Fq2):
        elems = [Fq2(u, v, q) for u in range(q) for v in range(q)]
        a = a if isinstance(a, Fq2) else Fq2(a % q, 0, q)
        b = b if isinstance(b, Fq2) else Fq2(b % q, 0, q)
        sq = {}
        for y in elems:
            y2 = y * y
            sq[y2] = sq.get(y2, 0) + 1
        pts = 1
        for x in elems:
            pts += sq.get(x * x * x + a * x * x + b * x, 0)
        return q * q + 1 - pts
    sq = [0] * q
    for y in range(q):
        sq[y * y % q] += 1
    pts = 1 + sum(sq[(x * x * x + a * x * x + b * x) % q] for x in range(q))
    return q + 1 - pts


# Affine arithmetic on Y^2 = X^3 + aX^2 + bX; None is the point at infinity.

def _add(P, Q, a, b, q):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % q == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a * x1 + b) * pow(2 * y1, -1, q) % q
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, q) % q
    x3 = (lam * lam - a - x1 - x2) % q
    return x3, (lam * (x1 - x3) - y1) % q


def _mul(k, P, a, b, q):
    R = None
    if k < 0:
        k = -k
        P = (P[0], -P[1] % q)
    while k:
        if k & 1:
            R = _add(R, P, a, b, q)
        P = _add(P, P, a, b, q)
        k >>= 1
    return R


def _some_multiple(P, a, b, q, lo, hi):
    """Some M in [lo, hi] with M*P = O, by baby-step giant-step."""
    w = hi - lo
    s = isqrt(w) + 1
    baby = {}
    R = None
    for j in range(s + 1):
        if R is None:
            baby.setdefault(None, j)
        else:
            baby.setdefault(R[0], (j, R[1]))
        R = _add(R, P, a, b, q)
    step = _mul(s, P, a, b, q)
    G = _mul(lo, P, a, b, q)
    for i in range(s + 2):
        base = lo + i * s
        if G is None:
            return base
        hit = baby.get(G[0])
        if hit is not None:
            j, yj = hit
            # G = +-jP; G = jP means (base - j)P = O, G = -jP means (base + j)P = O
            m = base - j if G[1] == yj else base + j
            if m > 0:
                return m
        G = _add(G, step, a, b, q)
    return None


def _point_order(P, a, b, q, multiple):
    order = multiple
    for ell, e in factor_cached(multiple):
        for _ in range(e):
            if _mul(order // ell, P, a, b, q) is None:
                order //= ell
            else:
                break
    return order


def _points_with_x(a, b, q, want_square):
    """Deterministic x = 1, 2, ... whose f(x) is a nonzero (non)square."""
    for x in range(1, q):
        f = (x * x * x + a * x * x + b * x) % q
        if f == 0:
            continue
        if (pow(f, (q - 1) // 2, q) == 1) == want_square:
            yield x, f


def trace_bsgs(a: int, b: int, q: int, max_points: int = 40) -> int:
    """a_q via BSGS on E and its quadratic twist (Mestre).

    Orders of points on E constrain N = q+1-a_q, orders on the twist constrain
    2q+2-N; points are added until one candidate N remains in the Hasse range.
    """
    r = isqrt(4 * q)
    lo, hi = q + 1 - r - 1, q + 1 + r + 1
    d = next(z for z in range(2, q) if pow(z, (q - 1) // 2, q) == q - 1)
    at, bt = d * a % q, d * d * b % q
    l1 = l2 = 1
    gen_e = _points_with_x(a, b, q, True)
    gen_t = _points_with_x(a, b, q, False)
    for _ in range(max_points):
        cands = [n for n in range(lo + (-lo) % l1, hi + 1, l1)
                 if (2 * q + 2 - n) % l2 == 0 and abs(q + 1 - n) <= 2 * isqrt(q) + 1]
        cands = [n for n in cands if (q + 1 - n) ** 2 <= 4 * q]
        if len(cands) == 1:
            return q + 1 - cands[0]
        if not cands:
            break
        for gen, ca, cb, which in ((gen_e, a, b, 1), (gen_t, at, bt, 2)):
            nxt = next(gen, None)
            if nxt is None:
                continue
            x, f = nxt
            if which == 1:
                P = (x, sqrt_mod_prime(f, q))
            else:
                # d*y^2 = f(x) maps to (d x, d^2 y) on Y^2 = X^3 + da X^2 + d^2 b X
                y = sqrt_mod_prime(f * pow(d, -1, q) % q, q)
                P = (d * x % q, d * d * y % q)
            mlt = _some_multiple(P, ca, cb, q, lo if which == 1 else 2 * q + 2 - hi,
                                 hi if which == 1 else 2 * q + 2 - lo)
            if mlt is None:
                continue
            o = _point_order(P, ca, cb, q, mlt)
            if which == 1:
                l1 = l1 * o // gcd(l1, o)
            else:
                l2 = l2 * o // gcd(l2, o)
    return trace_charsum(a, b, q)


@lru_cache(maxsize=1 << 16)
def trace_fq(a: int, b: int, q: int, method: str = "auto") -> int:
    """Trace of Frobenius of Y^2 = X^3 + aX^2 + bX over F_q (q odd prime, good reduction)."""
    a %= q
    b %= q
    if method == "auto":
        method = "charsum" if q <= CHARSUM_LIMIT else "bsgs"
    if method == "charsum":
        return trace_charsum(a, b, q)
    if method == "bsgs":
        return trace_bsgs(a, b, q)
    if method == "naive":
        return trace_naive(a, b, q)
    raise ValueError(f"unknown method {method!r}")


def count_points_aq(rc: ReducedCurve, method: str = "auto") -> TraceResult:
    if rc.reduction_type != "good":
        raise NotGoodReduction(f"{rc.reduction_type} reduction at {rc.ideal}")
    q = rc.ideal.q
    if isinstance(rc.a2, Fq2) or isinstance(rc.a4, Fq2):
        return TraceResult(_trace_fq2(rc.a2, rc.a4), q * q, "naive-fq2")
    if method == "auto":
        method = "charsum" if q <= CHARSUM_LIMIT else "bsgs"
    return TraceResult(trace_fq(rc.a2, rc.a4, q, method), q, method)


@lru_cache(maxsize=1 << 14)
def _trace_fq2(a2: Fq2, a4: Fq2) -> int:
    return trace_naive(a2, a4, a2.q)


def bq(m: int, ideal: SplitData, ideal_index: int | None = None) -> int:
    """Hybrid trace b_q(m) of E_m at a prime ideal not dividing 30."""
    if ideal.q in (2, 3, 5):
        raise BadIdeal(f"ideal above {ideal.q} divides the level")
    rc = reduce_frey(m, ideal, ideal_index)
    if rc.reduction_type == "good":
        return count_points_aq(rc).a_q
    n = rc.ideal.norm
    return n + 1 if rc.reduction_type == "split" else -n - 1


def bq_table(ideal: SplitData) -> tuple[int, list[int]]:
    """(ord of eps^2, [b_q(m) for m in range(ord)]) since b_q(m) is periodic in m."""
    o = mult_order(reduce_ok(EPS * EPS, ideal), ideal.q)
    return o, [bq(m, ideal) for m in range(o)]
