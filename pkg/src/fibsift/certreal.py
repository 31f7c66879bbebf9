"""Certified real intervals on top of mpmath's outward-rounded interval kernel.

A :class:`CertReal` is a closed interval [lo, hi] with a working precision in
bits.  Arithmetic rounds outward, so the true value of any expression built
from exact inputs lies inside the result.  Comparisons return a bool only when
the intervals are disjoint and raise :class:`Indeterminate` otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, TypeVar

from mpmath.libmp import from_int, from_man_exp, from_rational, mpf_floor, mpf_lt, round_ceiling, round_floor, to_float, to_str
from mpmath.libmp import libmpi as _mpi

from .errors import Indeterminate

__all__ = ["CertReal", "certify", "DEFAULT_PREC", "MAX_PREC", "as_cert", "cmax", "cmin"]

DEFAULT_PREC = 256
MAX_PREC = 4096

T = TypeVar("T")


class CertReal:
    __slots__ = ("iv", "prec")

    def __init__(self, iv, prec: int = DEFAULT_PREC):
        self.iv = iv
        self.prec = prec

    # ------------------------------------------------------------ construction

    @classmethod
    def exact(cls, x, prec: int = DEFAULT_PREC) -> "CertReal":
        """Smallest representable interval containing the rational (or decimal string) x."""
        if isinstance(x, CertReal):
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            f = from_int(x)
            if x.bit_length() <= prec:
                return cls((f, f), prec)
            return cls((from_int(x, prec, round_floor), from_int(x, prec, round_ceiling)), prec)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, float):
            x = Fraction(x)
        if isinstance(x, Fraction):
            n, d = x.numerator, x.denominator
            return cls((from_rational(n, d, prec, round_floor),
                        from_rational(n, d, prec, round_ceiling)), prec)
        raise TypeError(f"cannot certify {type(x).__name__}")

    @classmethod
    def interval(cls, lo, hi, prec: int = DEFAULT_PREC) -> "CertReal":
        a, b = cls.exact(lo, prec), cls.exact(hi, prec)
        if mpf_lt(b.iv[1], a.iv[0]):
            raise ValueError("empty interval")
        return cls((a.iv[0], b.iv[1]), prec)

    @classmethod
    def e(cls, prec: int = DEFAULT_PREC) -> "CertReal":
        return cls.exact(1, prec).exp()

    def _lift(self, other) -> "CertReal":
        if isinstance(other, CertReal):
            return other
        return CertReal.exact(other, self.prec)

    def _p(self, other: "CertReal") -> int:
        return max(self.prec, other.prec)

    # ------------------------------------------------------------ arithmetic

    def __add__(self, other):
        o = self._lift(other)
        p = self._p(o)
        return CertReal(_mpi.mpi_add(self.iv, o.iv, p), p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        p = self._p(o)
        return CertReal(_mpi.mpi_sub(self.iv, o.iv, p), p)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return CertReal(_mpi.mpi_neg(self.iv, self.prec), self.prec)

    def __mul__(self, other):
        o = self._lift(other)
        p = self._p(o)
        return CertReal(_mpi.mpi_mul(self.iv, o.iv, p), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.contains_zero():
            raise Indeterminate("division by an interval containing zero")
        p = self._p(o)
        return CertReal(_mpi.mpi_div(self.iv, o.iv, p), p)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, other):
        if isinstance(other, int):
            return CertReal(_mpi.mpi_pow_int(self.iv, other, self.prec), self.prec)
        o = self._lift(other)
        if not self.certainly_positive():
            raise Indeterminate("real power of a non-positive interval")
        p = self._p(o)
        return CertReal(_mpi.mpi_pow(self.iv, o.iv, p), p)

    def log(self) -> "CertReal":
        if not self.certainly_positive():
            raise Indeterminate("log of an interval not certainly positive")
        return CertReal(_mpi.mpi_log(self.iv, self.prec), self.prec)

    def exp(self) -> "CertReal":
        return CertReal(_mpi.mpi_exp(self.iv, self.prec), self.prec)

    def sqrt(self) -> "CertReal":
        if mpf_lt(self.iv[0], from_int(0)):
            raise Indeterminate("sqrt of an interval reaching below zero")
        return CertReal(_mpi.mpi_sqrt(self.iv, self.prec), self.prec)

    def __abs__(self):
        return CertReal(_mpi.mpi_abs(self.iv, self.prec), self.prec)

    def floor(self) -> "CertReal":
        """Enclosure of floor(x) over the interval."""
        return CertReal((mpf_floor(self.iv[0]), mpf_floor(self.iv[1])), self.prec)

    def hull(self, other) -> "CertReal":
        o = self._lift(other)
        lo = o.iv[0] if mpf_lt(o.iv[0], self.iv[0]) else self.iv[0]
        hi = self.iv[1] if mpf_lt(o.iv[1], self.iv[1]) else o.iv[1]
        return CertReal((lo, hi), self._p(o))

    def with_prec(self, prec: int) -> "CertReal":
        return CertReal(self.iv, prec)

    # ------------------------------------------------------------ comparison

    def contains_zero(self) -> bool:
        z = from_int(0)
        return not mpf_lt(z, self.iv[0]) and not mpf_lt(self.iv[1], z)

    def certainly_positive(self) -> bool:
        return mpf_lt(from_int(0), self.iv[0])

    def _cmp(self, other, fn):
        o = self._lift(other)
        r = fn(self.iv, o.iv)
        if r is None:
            raise Indeterminate(f"cannot order {self} and {o}")
        return r

    def __lt__(self, other):
        return self._cmp(other, _mpi.mpi_lt)

    def __le__(self, other):
        return self._cmp(other, _mpi.mpi_le)

    def __gt__(self, other):
        return self._cmp(other, _mpi.mpi_gt)

    def __ge__(self, other):
        return self._cmp(other, _mpi.mpi_ge)

    def contains(self, x) -> bool:
        o = self._lift(x)
        return not mpf_lt(o.iv[0], self.iv[0]) and not mpf_lt(self.iv[1], o.iv[1])

    # ------------------------------------------------------------ views

    @property
    def lower(self) -> float:
        return to_float(self.iv[0], rnd=round_floor)

    @property
    def upper(self) -> float:
        return to_float(self.iv[1], rnd=round_ceiling)

    @property
    def mid(self) -> float:
        return to_float(_mpi.mpi_mid(self.iv, self.prec))

    @property
    def width(self) -> float:
        return to_float(_mpi.mpi_delta(self.iv, self.prec), rnd=round_ceiling)

    def to_json(self) -> dict:
        """Endpoints as exact (mantissa, exponent) pairs plus a readable preview."""
        def exact(f):
            sign, man, exp, _ = f
            return [int(-man if sign else man), int(exp)]
        return {"lo": exact(self.iv[0]), "hi": exact(self.iv[1]), "prec": self.prec,
                "approx": [to_str(self.iv[0], 15), to_str(self.iv[1], 15)]}

    @classmethod
    def from_json(cls, d: dict) -> "CertReal":
        prec = int(d.get("prec", DEFAULT_PREC))
        lo = from_man_exp(int(d["lo"][0]), int(d["lo"][1]))
        hi = from_man_exp(int(d["hi"][0]), int(d["hi"][1]))
        return cls((lo, hi), prec)

    def __repr__(self):
        return f"CertReal([{to_str(self.iv[0], 12)}, {to_str(self.iv[1], 12)}])"

    __str__ = __repr__


def as_cert(x, prec: int = DEFAULT_PREC) -> CertReal:
    return CertReal.exact(x, prec)


def cmax(*xs: CertReal) -> CertReal:
    """Interval enclosure of max over the arguments."""
    lo, hi = xs[0].iv
    for c in xs[1:]:
        if mpf_lt(lo, c.iv[0]):
            lo = c.iv[0]
        if mpf_lt(hi, c.iv[1]):
            hi = c.iv[1]
    return CertReal((lo, hi), max(c.prec for c in xs))


def cmin(*xs: CertReal) -> CertReal:
    return -cmax(*(-c for c in xs))


def certify(fn: Callable[[int], T], prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC) -> T:
    """Evaluate fn(prec), doubling the precision after each Indeterminate."""
    while True:
        try:
            return fn(prec)
        except Indeterminate:
            if prec >= max_prec:
                raise
            prec *= 2
