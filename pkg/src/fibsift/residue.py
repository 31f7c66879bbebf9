"""Residue fields of O_K and O_K' at small primes.

Split primes q = +-1 (mod 5) give two ideals with residue field F_q, on which
sqrt5 maps to theta and -theta respectively.  Inert primes give F_{q^2},
realised here as F_q[s]/(s^2 - 5).  Field elements of F_q are plain ints;
elements of F_{q^2} are :class:`Fq2` instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

from sympy import factorint, isprime, primerange
from sympy import primitive_root as _sympy_primitive_root
from sympy.ntheory import sqrt_mod

from .errors import BadModulus, NotPrime, ResidueCharTwo, ZeroElement
from .okarith import EPS, KPrimeElem, OKElem

__all__ = [
    "Fq2", "SplitData", "ResidueCtx", "split_in_K", "ideals_above", "reduce_ok",
    "reduce_kprime", "mult_order", "is_square", "discrete_log_modp",
    "list_Q_primes", "primitive_root", "sqrt_mod_prime", "factor_cached",
]


@lru_cache(maxsize=4096)
def factor_cached(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(n).items()))


@lru_cache(maxsize=4096)
def primitive_root(q: int) -> int:
    """Least primitive root of the prime q."""
    return int(_sympy_primitive_root(q))


def sqrt_mod_prime(a: int, q: int) -> int | None:
    """A square root of a modulo the odd prime q, or None."""
    a %= q
    if a == 0:
        return 0
    if pow(a, (q - 1) // 2, q) != 1:
        return None
    return int(sqrt_mod(a, q))


@dataclass(frozen=True, slots=True)
class Fq2:
    """a + b*s in F_q[s]/(s^2 - 5), q inert in Q(sqrt 5)."""

    a: int
    b: int
    q: int

    def _lift(self, other):
        if isinstance(other, Fq2):
            return other
        if isinstance(other, int):
            return Fq2(other % self.q, 0, self.q)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Fq2((self.a + other.a) % self.q, (self.b + other.b) % self.q, self.q)

    __radd__ = __add__

    def __neg__(self):
        return Fq2(-self.a % self.q, -self.b % self.q, self.q)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        q = self.q
        return Fq2((self.a * other.a + 5 * self.b * other.b) % q,
                   (self.a * other.b + self.b * other.a) % q, q)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Fq2(1, 0, self.q)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Fq2":
        n = (self.a * self.a - 5 * self.b * self.b) % self.q
        if n == 0:
            raise ZeroElement("inverse of zero in F_{q^2}")
        ni = pow(n, -1, self.q)
        return Fq2(self.a * ni % self.q, -self.b * ni % self.q, self.q)

    def __truediv__(self, other):
        other = self._lift(other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and self.a == other % self.q
        if isinstance(other, Fq2):
            return (self.a, self.b, self.q) == (other.a, other.b, other.q)
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def frobenius(self) -> "Fq2":
        return Fq2(self.a, -self.b % self.q, self.q)


@dataclass(frozen=True, slots=True)
class SplitData:
    """A prime ideal of O_K above q together with its residue-field embedding.

    ``theta5`` is the image of sqrt5 for this ideal (degree 1 only); the two
    ideals above a split q carry theta and -theta.  ``theta6`` is an optional
    square root of 6, used when the ideal is extended to a degree-1 prime of K'.
    """

    q: int
    degree: int
    theta5: int | None = None
    ideal_index: int = 1
    theta6: int | None = None

    @property
    def norm(self) -> int:
        return self.q ** self.degree

    @property
    def field_order(self) -> int:
        return self.norm

    @property
    def ramified(self) -> bool:
        return self.q == 5

    def key(self) -> tuple[int, int]:
        return (self.q, self.ideal_index)

    def conjugate(self) -> "SplitData":
        if self.degree != 1 or self.q == 5:
            return self
        return SplitData(self.q, 1, (-self.theta5) % self.q, 3 - self.ideal_index, self.theta6)

    def reduce(self, x: OKElem):
        return reduce_ok(x, self)

    def __str__(self):
        if self.degree == 2:
            return f"({self.q})"
        return f"q={self.q}[theta={self.theta5}]"


ResidueCtx = SplitData  # the ideal carries everything needed to reduce into its residue field


def ideals_above(q: int) -> list[SplitData]:
    """All prime ideals of O_K above the rational prime q, index 1 first."""
    if not isprime(q):
        raise NotPrime(f"{q} is not prime")
    if q == 5:
        return [SplitData(5, 1, 0, 1)]
    if q == 2:
        return [SplitData(2, 2)]
    r = q % 5
    if r in (1, 4):
        t = sqrt_mod_prime(5, q)
        t = min(t, q - t)
        return [SplitData(q, 1, t, 1), SplitData(q, 1, q - t, 2)]
    return [SplitData(q, 2)]


def split_in_K(q: int) -> SplitData:
    """Splitting data of q in K; for split q the index-1 ideal is returned."""
    return ideals_above(q)[0]


def reduce_ok(x: OKElem, ideal: SplitData, ideal_index: int | None = None):
    """Image of x in the residue field of ``ideal`` (int for F_q, Fq2 for F_{q^2})."""
    q = ideal.q
    if q == 2:
        raise ResidueCharTwo("eps = (1 + sqrt5)/2 needs 2 invertible")
    if ideal_index is not None and ideal_index != ideal.ideal_index:
        ideal = ideal.conjugate()
    inv2 = (q + 1) // 2
    if ideal.degree == 1:
        eps = (1 + ideal.theta5) * inv2 % q
        return (x.a + x.b * eps) % q
    return Fq2((x.a + x.b * inv2) % q, x.b * inv2 % q, q)


def reduce_kprime(x: KPrimeElem, ideal: SplitData) -> int:
    """Image of x in F_q at the degree-1 prime of K' given by (theta5, theta6)."""
    q = ideal.q
    if ideal.degree != 1 or ideal.theta6 is None:
        raise ValueError("reduce_kprime needs a degree-1 prime with theta6")
    t5, t6 = ideal.theta5, ideal.theta6
    total = 0
    for c, basis in zip(x.coords(), (1, t5, t6, t5 * t6)):
        num, den = c.numerator, c.denominator
        if den % q == 0:
            raise ZeroDivisionError(f"denominator {den} not invertible mod {q}")
        total += num * pow(den, -1, q) * basis
    return total % q


def _group_order(a, q: int | None) -> tuple[int, int]:
    if isinstance(a, Fq2):
        return a.q * a.q - 1, a.q
    if q is None:
        raise ValueError("modulus required for integer field elements")
    return q - 1, q


def _is_one(a) -> bool:
    return a == 1


def _pow(a, e: int, q: int):
    if isinstance(a, Fq2):
        return a ** e
    return pow(a, e, q)


def mult_order(a, q: int | None = None) -> int:
    """Multiplicative order of a nonzero element of F_q or F_{q^2}."""
    n, q = _group_order(a, q)
    if (isinstance(a, Fq2) and a.is_zero()) or (not isinstance(a, Fq2) and a % q == 0):
        raise ZeroElement("zero has no multiplicative order")
    if not isinstance(a, Fq2):
        a %= q
    order = n
    for ell, e in factor_cached(n):
        for _ in range(e):
            if _is_one(_pow(a, order // ell, q)):
                order //= ell
            else:
                break
    return order


def is_square(a, q: int | None = None) -> bool:
    """Euler's criterion; 0 counts as a square."""
    n, q = _group_order(a, q)
    if isinstance(a, Fq2):
        if a.is_zero():
            return True
        return a ** (n // 2) == 1
    a %= q
    if a == 0:
        return True
    return pow(a, n // 2, q) == 1


def discrete_log_modp(a: int, varrho: int, p: int, q: int) -> int:
    """L mod p where a = varrho^L in F_q^*, for p | q - 1.

    Only the projection to Z/pZ is computed: a^((q-1)/p) lies in the subgroup of
    order p generated by varrho^((q-1)/p), where baby-step giant-step finds it.
    """
    if (q - 1) % p:
        raise BadModulus(f"{p} does not divide {q} - 1")
    a %= q
    if a == 0:
        raise ZeroElement("log of zero")
    cof = (q - 1) // p
    g = pow(varrho, cof, q)
    h = pow(a, cof, q)
    if g == 1:
        raise BadModulus(f"{varrho} is not a primitive root mod {q}")
    m = isqrt(p - 1) + 1
    baby = {}
    cur = 1
    for j in range(m):
        baby.setdefault(cur, j)
        cur = cur * g % q
    step = pow(g, -m, q)
    gamma = h
    for i in range(m + 1):
        j = baby.get(gamma)
        if j is not None:
            return (i * m + j) % p
        gamma = gamma * step % q
    raise AssertionError("discrete log not found; varrho is not a generator")


def list_Q_primes(norm_bound: int, order_divisor: int) -> list[SplitData]:
    """Prime ideals q of O_K, q not dividing 2*3*sqrt5, Norm(q) < norm_bound,
    with the order of eps^2 in the residue field dividing ``order_divisor``.

    Sorted by (norm, q, ideal_index).
    """
    out = []
    for q in primerange(7, norm_bound):
        for ideal in ideals_above(q):
            if ideal.norm >= norm_bound:
                continue
            e2 = reduce_ok(EPS * EPS, ideal)
            if order_divisor % mult_order(e2, q) == 0:
                out.append(ideal)
    out.sort(key=lambda i: (i.norm, i.q, i.ideal_index))
    return out


def admissible_split_ideals(q: int) -> list[SplitData]:
    """Both degree-1 ideals above a split q (empty if q is not split)."""
    if q % 5 not in (1, 4) or not isprime(q):
        return []
    return ideals_above(q)


def kprime_degree_one_prime(q: int) -> SplitData | None:
    """A degree-1 prime of K' above q (5 and 6 both squares mod q), or None."""
    if q <= 5 or gcd(q, 30) != 1:
        return None
    t5 = sqrt_mod_prime(5, q)
    t6 = sqrt_mod_prime(6, q)
    if t5 is None or t6 is None:
        return None
    return SplitData(q, 1, min(t5, q - t5), 1, min(t6, q - t6))
