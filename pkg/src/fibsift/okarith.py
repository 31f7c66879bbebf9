"""Exact arithmetic in Z[eps] = O_K, K = Q(sqrt 5), and in K' = Q(sqrt 5, sqrt 6).

Elements of O_K are stored in the basis {1, eps} with eps = (1 + sqrt 5)/2,
so every algebraic integer has integer coordinates and sqrt 5 = -1 + 2 eps.
Elements of K' are stored with rational coordinates over {1, sqrt5, sqrt6, sqrt30}.

Also houses the Fibonacci / Lucas machinery and the congruence filters that
restrict a solution of F_{2n} + 2 = y^p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import integer_nthroot, isprime

from .errors import NonUnitNegativePower, NotPrime

__all__ = [
    "OKElem", "KPrimeElem", "EPS", "EPSBAR", "SQRT5", "ONE",
    "SQRT6", "DELTA", "MU", "PHI1", "PHI2",
    "ok_mul", "ok_norm", "ok_pow", "fib_lucas", "fib", "lucas", "fib_mod",
    "gcd_fib3_lucas", "divisor_filter", "index_filter", "exact_root",
    "kprime_mul", "kprime_norm_to_K", "kprime_norm_to_Q", "kappa",
]


@dataclass(frozen=True, slots=True)
class OKElem:
    """a + b*eps with eps^2 = eps + 1."""

    a: int
    b: int = 0

    @classmethod
    def coerce(cls, x) -> "OKElem":
        if isinstance(x, OKElem):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        return NotImplemented

    def __add__(self, other):
        other = OKElem.coerce(other)
        if other is NotImplemented:
            return other
        return OKElem(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return OKElem(-self.a, -self.b)

    def __sub__(self, other):
        other = OKElem.coerce(other)
        if other is NotImplemented:
            return other
        return OKElem(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = OKElem.coerce(other)
        if other is NotImplemented:
            return other
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        bb = b1 * b2
        return OKElem(a1 * a2 + bb, a1 * b2 + a2 * b1 + bb)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return ok_pow(self, k)

    def __eq__(self, other):
        other = OKElem.coerce(other)
        if other is NotImplemented:
            return other
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def conj(self) -> "OKElem":
        """Galois conjugate: eps -> 1 - eps."""
        return OKElem(self.a + self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a + self.a * self.b - self.b * self.b

    def trace(self) -> int:
        return 2 * self.a + self.b

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def sqrt5_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates (u, v) with self = u + v*sqrt5."""
        return Fraction(2 * self.a + self.b, 2), Fraction(self.b, 2)

    def __float__(self):
        return self.a + self.b * 1.6180339887498949

    def __repr__(self):
        return f"OKElem({self.a}, {self.b})"


ONE = OKElem(1, 0)
EPS = OKElem(0, 1)
EPSBAR = EPS.conj()
SQRT5 = OKElem(-1, 2)


def ok_mul(x: OKElem, y: OKElem) -> OKElem:
    return x * y


def ok_norm(x: OKElem) -> int:
    return x.norm()


def ok_pow(x: OKElem, k: int) -> OKElem:
    """Exact power; negative exponents are allowed for units only."""
    if k < 0:
        n = x.norm()
        if abs(n) != 1:
            raise NonUnitNegativePower(f"{x!r} has norm {n}, not a unit")
        # x^{-1} = conj(x) / norm(x) and norm(x) = +-1
        inv = x.conj() if n == 1 else -x.conj()
        return ok_pow(inv, -k)
    if x == EPS:
        f_prev, f_k = fib(k - 1), fib(k)
        return OKElem(f_prev, f_k)
    result = ONE
    base = x
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def _fib_pair(k: int) -> tuple[int, int]:
    """(F_k, F_{k+1}) for k >= 0 by fast doubling."""
    if k == 0:
        return 0, 1
    f, g = _fib_pair(k >> 1)
    c = f * (2 * g - f)
    d = f * f + g * g
    if k & 1:
        return d, c + d
    return c, d


def fib_lucas(k: int) -> tuple[int, int]:
    """Return (F_k, L_k) for any integer k."""
    n = abs(k)
    f, g = _fib_pair(n)
    lu = 2 * g - f
    if k < 0:
        if n % 2 == 0:
            f = -f
        else:
            lu = -lu
    return f, lu


def fib(k: int) -> int:
    return fib_lucas(k)[0]


def lucas(k: int) -> int:
    return fib_lucas(k)[1]


def fib_mod(k: int, q: int) -> int:
    """F_k mod q for k >= 0 (fast doubling with reductions)."""
    if k < 0:
        raise ValueError("fib_mod expects a non-negative index")
    f, g = 0, 1
    for bit in bin(k)[2:]:
        c = f * ((2 * g - f) % q) % q
        d = (f * f + g * g) % q
        if bit == "1":
            f, g = d, (c + d) % q
        else:
            f, g = c, d
    return f


def gcd_fib3_lucas(k: int) -> int:
    """gcd(F_{k+3}, L_k) by its closed form (4, 2 or 1 according to k mod 6)."""
    r = k % 6
    if r == 3:
        return 4
    if r == 0:
        return 2
    return 1


_DIVISOR_RESIDUES = frozenset({1, 5, 19, 23})
_INDEX_RESIDUES = frozenset({2, 4, 7, 8, 10, 11})


def divisor_filter(q: int) -> bool:
    """Can the prime q divide y in F_{2n} + 2 = y^p?"""
    if not isprime(q):
        raise NotPrime(f"{q} is not prime")
    return q % 24 in _DIVISOR_RESIDUES


def index_filter(n: int) -> bool:
    """Admissible residue of n modulo 12 for a solution of F_{2n} + 2 = y^p."""
    return n % 12 in _INDEX_RESIDUES


def exact_root(v: int, p: int) -> int | None:
    """Integer y with y**p == v, or None.  Negative v only for odd p."""
    if p < 1:
        raise ValueError("exponent must be positive")
    if v < 0:
        if p % 2 == 0:
            return None
        r = exact_root(-v, p)
        return None if r is None else -r
    r, exact = integer_nthroot(v, p)
    return r if exact else None


# ---------------------------------------------------------------------------
# K' = Q(sqrt5, sqrt6)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, slots=True)
class KPrimeElem:
    """c0 + c1*sqrt5 + c2*sqrt6 + c3*sqrt30 with rational coordinates."""

    c0: Fraction
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)
    c3: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("c0", "c1", "c2", "c3"):
            object.__setattr__(self, name, _frac(getattr(self, name)))

    @classmethod
    def from_ok(cls, x: OKElem) -> "KPrimeElem":
        u, v = x.sqrt5_coords()
        return cls(u, v)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, KPrimeElem):
            return x
        if isinstance(x, OKElem):
            return cls.from_ok(x)
        if isinstance(x, (int, Fraction)):
            return cls(x)
        return NotImplemented

    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.c0, self.c1, self.c2, self.c3

    def __add__(self, other):
        other = KPrimeElem.coerce(other)
        if other is NotImplemented:
            return other
        return KPrimeElem(*(x + y for x, y in zip(self.coords(), other.coords())))

    __radd__ = __add__

    def __neg__(self):
        return KPrimeElem(-self.c0, -self.c1, -self.c2, -self.c3)

    def __sub__(self, other):
        other = KPrimeElem.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = KPrimeElem.coerce(other)
        if other is NotImplemented:
            return other
        a0, a1, a2, a3 = self.coords()
        b0, b1, b2, b3 = other.coords()
        return KPrimeElem(
            a0 * b0 + 5 * a1 * b1 + 6 * a2 * b2 + 30 * a3 * b3,
            a0 * b1 + a1 * b0 + 6 * (a2 * b3 + a3 * b2),
            a0 * b2 + a2 * b0 + 5 * (a1 * b3 + a3 * b1),
            a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = KPrimeElem(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        other = KPrimeElem.coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __eq__(self, other):
        other = KPrimeElem.coerce(other)
        if other is NotImplemented:
            return other
        return self.coords() == other.coords()

    def __hash__(self):
        return hash(self.coords())

    def sigma5(self) -> "KPrimeElem":
        """sqrt5 -> -sqrt5, sqrt6 fixed."""
        return KPrimeElem(self.c0, -self.c1, self.c2, -self.c3)

    def sigma6(self) -> "KPrimeElem":
        """sqrt6 -> -sqrt6, sqrt5 fixed (generator of Gal(K'/K))."""
        return KPrimeElem(self.c0, self.c1, -self.c2, -self.c3)

    def conjugates(self) -> list["KPrimeElem"]:
        return [self, self.sigma5(), self.sigma6(), self.sigma5().sigma6()]

    def norm_to_K(self) -> "KPrimeElem":
        y = self * self.sigma6()
        assert y.c2 == 0 and y.c3 == 0
        return y

    def norm_to_Q(self) -> Fraction:
        y = self.norm_to_K()
        return y.c0 * y.c0 - 5 * y.c1 * y.c1

    def inverse(self) -> "KPrimeElem":
        n = self.norm_to_Q()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in K'")
        others = self.sigma5() * self.sigma6() * self.sigma5().sigma6()
        return KPrimeElem(*(c / n for c in others.coords()))

    def embedding(self, s5: int = 1, s6: int = 1) -> float:
        """Real embedding with sqrt5 -> s5*sqrt(5), sqrt6 -> s6*sqrt(6)."""
        r5, r6 = s5 * 5 ** 0.5, s6 * 6 ** 0.5
        return float(self.c0) + float(self.c1) * r5 + float(self.c2) * r6 + float(self.c3) * r5 * r6

    def __repr__(self):
        return f"KPrimeElem({self.c0}, {self.c1}, {self.c2}, {self.c3})"


SQRT6 = KPrimeElem(0, 0, 1, 0)
DELTA = KPrimeElem(0, 1, 1, 0)                       # sqrt5 + sqrt6
MU = KPrimeElem(5, 0, 2, 0)                          # 5 + 2 sqrt6
_HALF = Fraction(1, 2)
PHI1 = KPrimeElem(-2, 1, _HALF, -_HALF)              # -2 + sqrt5 + ((1 - sqrt5)/2) sqrt6
PHI2 = KPrimeElem(-2, 1, -_HALF, _HALF)


def kprime_mul(x: KPrimeElem, y: KPrimeElem) -> KPrimeElem:
    return x * y


def kprime_norm_to_K(x: KPrimeElem) -> KPrimeElem:
    return x.norm_to_K()


def kprime_norm_to_Q(x: KPrimeElem) -> Fraction:
    return x.norm_to_Q()


def kappa(m0: int) -> KPrimeElem:
    """(eps^{2 m0} + sqrt5 + sqrt6) * (sqrt6 - sqrt5)."""
    base = KPrimeElem.from_ok(ok_pow(EPS, 2 * m0)) + DELTA
    return base * (SQRT6 - KPrimeElem(0, 1))

