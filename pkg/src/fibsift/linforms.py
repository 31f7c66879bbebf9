"""Certified evaluation of lower bounds for linear forms in logarithms.

Three theorem evaluators (Matveev's general bound, Mignotte's three-log bound
and Laurent's two-log bound) work on :class:`CertReal` inputs and return a
:class:`BoundReport` with every named intermediate constant.  Three pipelines
apply them to

    Lambda = p log y + log sqrt5 - 2n log eps,   0 < Lambda < 2.1 / y^p,

with y >= 19.  The pipelines never fix y: quantities that grow like log y are
carried as coefficients of log y, and any remaining dependence on y goes
through u = 1/log y, which ranges over [0, 1/log 19].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, log as flog

from .certificates import SieveCertificate, register
from .certreal import DEFAULT_PREC, CertReal, certify, cmax
from .errors import Indeterminate, NotAlgebraicDescriptor, PositivityFailed, PreconditionViolated, SmallY
from .okarith import KPrimeElem, OKElem

__all__ = [
    "LogHeight", "BoundReport", "height_quadratic", "matveev_bound", "mignotte_bound",
    "laurent_bound", "lambda_upper", "matveev_pipeline", "mignotte_pipeline",
    "laurent_pipeline_three_logs", "laurent_pipeline_two_logs", "run_all", "linforms_certificates",
]


def _x(v, prec):
    return CertReal.exact(v, prec)


class _K:
    """Certified constants at one precision."""

    def __init__(self, prec: int):
        self.prec = prec
        one = _x(1, prec)
        self.e = one.exp()
        self.sqrt5 = _x(5, prec).sqrt()
        self.sqrt6 = _x(6, prec).sqrt()
        self.log2 = _x(2, prec).log()
        self.log5 = _x(5, prec).log()
        self.log19 = _x(19, prec).log()
        self.eps = (one + self.sqrt5) / 2
        self.logeps = self.eps.log()

    def c(self, v):
        return _x(v, self.prec)


# ---------------------------------------------------------------- reports

@dataclass
class BoundReport:
    theorem: str
    inputs: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)   # (claim, passed)
    verdict: str = ""

    def check(self, claim: str, passed: bool) -> bool:
        self.checks.append((claim, bool(passed)))
        return passed

    def claim_lt(self, claim: str, value: CertReal, bound) -> bool:
        """Record value < bound, decided on the upper endpoint of value."""
        try:
            ok = value < bound
        except Indeterminate:
            ok = False
        return self.check(claim, ok)

    def claim_gt(self, claim: str, value: CertReal, bound) -> bool:
        try:
            ok = value > bound
        except Indeterminate:
            ok = False
        return self.check(claim, ok)

    @property
    def all_passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def failed(self) -> list[str]:
        return [c for c, ok in self.checks if not ok]

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, CertReal):
                return v.to_json()
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            if isinstance(v, Fraction):
                return str(v)
            return v
        return {"theorem": self.theorem, "inputs": enc(self.inputs), "constants": enc(self.constants),
                "checks": [[c, ok] for c, ok in self.checks], "verdict": self.verdict}

    def table(self) -> str:
        lines = [f"[{self.theorem}] verdict: {self.verdict}"]
        for k, v in self.constants.items():
            if isinstance(v, CertReal):
                lines.append(f"  {k:<28} in [{v.lower:.10g}, {v.upper:.10g}]")
            else:
                lines.append(f"  {k:<28} = {v}")
        for c, ok in self.checks:
            lines.append(f"  {'PASS' if ok else 'FAIL'}  {c}")
        return "\n".join(lines)


# ---------------------------------------------------------------- heights

@dataclass
class LogHeight:
    degree: int
    leading: int
    conjugates: tuple
    h: CertReal


def _embed(x: KPrimeElem, s5: int, s6: int, k: _K) -> CertReal:
    c0, c1, c2, c3 = (k.c(c) for c in x.coords())
    r5, r6 = k.sqrt5 * s5, k.sqrt6 * s6
    return c0 + c1 * r5 + c2 * r6 + c3 * r5 * r6


def _charpoly(x: KPrimeElem) -> list[Fraction]:
    poly = [KPrimeElem(1)]
    for s5 in (1, -1):
        for s6 in (1, -1):
            c = x
            if s5 < 0:
                c = c.sigma5()
            if s6 < 0:
                c = c.sigma6()
            new = [KPrimeElem(0)] * (len(poly) + 1)
            for i, a in enumerate(poly):
                new[i] = new[i] + a
                new[i + 1] = new[i + 1] - a * c
            poly = new
    out = []
    for a in poly:
        c0, c1, c2, c3 = a.coords()
        assert c1 == c2 == c3 == 0
        out.append(c0)
    return out


def height_quadratic(alpha, prec: int = DEFAULT_PREC) -> LogHeight:
    """Absolute logarithmic height of an element of Q, Q(sqrt5) or Q(sqrt5, sqrt6)."""
    k = _K(prec)
    if isinstance(alpha, bool) or not isinstance(alpha, (int, Fraction, OKElem, KPrimeElem)):
        raise NotAlgebraicDescriptor(f"unsupported descriptor {type(alpha).__name__}")
    if isinstance(alpha, (int, Fraction)):
        f = Fraction(alpha)
        if f == 0:
            return LogHeight(1, 1, (k.c(0),), k.c(0))
        h = k.c(max(abs(f.numerator), f.denominator)).log()
        return LogHeight(1, f.denominator, (k.c(f),), h)
    x = KPrimeElem.from_ok(alpha) if isinstance(alpha, OKElem) else alpha
    if x == KPrimeElem(0):
        return LogHeight(1, 1, (k.c(0),), k.c(0))
    conj = [x, x.sigma5(), x.sigma6(), x.sigma5().sigma6()]
    degree = len(set(conj))
    cp = _charpoly(x)
    den = 1
    for c in cp:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in cp]
    g = 0
    for v in ints:
        g = _gcd(g, v)
    lead = abs(ints[0] // g)           # a0^(4/degree)
    embs = tuple(_embed(x, s5, s6, k) for s5 in (1, -1) for s6 in (1, -1))
    total = k.c(lead).log()
    for v in embs:
        total = total + cmax(k.c(1), abs(v)).log()
    a0 = round(lead ** (degree / 4))
    distinct = []
    for c, v in zip(conj, embs):
        if c not in [d for d, _ in distinct]:
            distinct.append((c, v))
    return LogHeight(degree, a0, tuple(v for _, v in distinct), total / 4)


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)


# ---------------------------------------------------------------- Matveev

def matveev_bound(n0: int, D: int, chi: int, A: list, b: list, prec: int = DEFAULT_PREC,
                  heights: list | None = None, logs: list | None = None) -> BoundReport:
    """log|Lambda| > -C(n0) C0 W0 D^2 Omega, all constants as displayed in the theorem."""
    k = _K(prec)
    if chi not in (1, 2):
        raise PreconditionViolated("chi", "chi must be 1 (real field) or 2")
    if len(A) != n0 or len(b) != n0:
        raise PreconditionViolated("n0", "need n0 values of A_i and b_i")
    A = [k.c(a) for a in A]
    b = [k.c(v) for v in b]
    for i, a in enumerate(A):
        if not a.certainly_positive():
            raise PreconditionViolated(f"A_{i + 1}", "must be positive")
    if b[-1].contains_zero():
        raise PreconditionViolated("b_n0", "b_{n0} must be non-zero")
    if heights is not None or logs is not None:
        for i, a in enumerate(A):
            need = []
            if heights is not None:
                need.append(D * k.c(heights[i]))
            if logs is not None:
                need.append(abs(k.c(logs[i])))
            # equality is typical here (A_i = D h(alpha_i)), so only a certain failure counts
            if (a - cmax(*need)).upper < 0:
                raise PreconditionViolated(f"A_{i + 1}", "A_i < max(D h(alpha_i), |log alpha_i|)")
    e = k.e
    C = (k.c(Fraction(16, factorial(n0) * chi)) * e**n0 * (2 * n0 + 1 + 2 * chi) * (n0 + 2)
         * k.c(4 * n0 + 4) ** (n0 + 1) * (e * n0 / 2) ** chi)
    logeD = (e * D).log()
    C0 = ((e ** k.c(Fraction(44, 10) * n0 + 7)) * k.c(n0) ** k.c(Fraction(11, 2)) * D**2 * logeD).log()
    B = cmax(k.c(1), *(abs(bi) * ai / A[-1] for ai, bi in zip(A, b)))
    W0 = (k.c(Fraction(3, 2)) * e * B * D * logeD).log()
    Omega = A[0]
    for a in A[1:]:
        Omega = Omega * a
    lower = -(C * C0 * W0 * D**2 * Omega)
    rep = BoundReport("matveev", {"n0": n0, "D": D, "chi": chi, "A": A, "b": b},
                      {"C(n0)": C, "C0": C0, "B": B, "W0": W0, "Omega": Omega, "log|Lambda| >": lower})
    rep.verdict = "lower-bound"
    return rep


def matveev_pipeline(prec: int = DEFAULT_PREC, p_bound: str = "3.6e12") -> BoundReport:
    """alpha = (sqrt5, eps, y), b = (1, -2n, p), D = 2, chi = 1, y >= 19 kept symbolic."""
    k = _K(prec)
    D, n0, chi = 2, 3, 1
    e = k.e
    rep = BoundReport("matveev-pipeline", {"D": D, "n0": n0, "chi": chi,
                                           "A": "(log 5, log eps, 2 log y)", "B": "p"})
    # the generic evaluator at a sample point fixes C(3), C0 and the shape of W0
    sample = matveev_bound(n0, D, chi, [k.log5, k.logeps, 2 * k.log19], [1, -2, 10**11], prec,
                           heights=[k.log5 / 2, k.logeps / 2, k.log19], logs=[k.log5 / 2, k.logeps, k.log19])
    C3, C0 = sample.constants["C(n0)"], sample.constants["C0"]
    C0_shown = ((e ** k.c(Fraction(202, 10))) * k.c(3) ** k.c(Fraction(11, 2)) * 4 * (4 * e).log()).log()
    closed = k.c(2**18 * 3**2 * 5) * e**4
    w = (3 * e * (2 * e).log()).log()            # W0 = w + log p
    coeff = C3 * C0 * D**2 * 2 * k.log5 * k.logeps   # log Lambda > -coeff (w + log p) log y
    rep.constants.update({"C(3)": C3, "2^18 3^2 5 e^4": closed, "C0": C0, "C0 with log(4e)": C0_shown,
                          "W0 - log p": w, "coefficient": coeff})
    rep.check("C(3) equals 2^18*3^2*5*e^4", C3.contains(closed) or closed.contains(C3)
              or abs(C3 - closed).upper < 1e-60)
    rep.claim_lt("C(3) < 6.45e8", C3, "6.45e8")
    rep.claim_lt("C0 < 28.5", C0, "28.5")
    rep.claim_lt("C0 (log(4e) as displayed) < 28.5", C0_shown, "28.5")
    rep.claim_lt("W0 < 2.63 + log p", w, "2.63")
    K1 = k.c("6.45e8") * k.c("28.5") * D**2 * 2 * k.log5 * k.logeps
    rep.constants["coefficient from rounded constants"] = K1
    rep.claim_lt("coefficient < 1.139e11", K1, "1.139e11")
    # B = p: the other ratios |b_i| A_i / A_3 stay below p since 2n log eps < p log y + log sqrt5
    rep.claim_lt("|b_1| A_1 / A_3 <= log5/(2 log 19) < p", k.log5 / (2 * k.log19), 5)
    p5 = k.c(5)
    tail = (k.c("2.1").log()) / ((k.c("2.63") + p5.log()) * k.log19)
    rep.claim_lt("1.139e11 + log 2.1/((2.63 + log p) log y) < 1.14e11",
                 k.c("1.139e11") + tail, "1.14e11")
    pb = k.c(p_bound)
    g = pb / (k.c("2.63") + pb.log())
    rep.constants["g(p_bound) = p/(2.63 + log p)"] = g
    # g is increasing, so g(p) < 1.14e11 forces p < p_bound
    rep.claim_gt(f"g({p_bound}) > 1.14e11, hence p < {p_bound}", g, "1.14e11")
    rep.verdict = f"p < {p_bound}" if rep.all_passed else "incomplete"
    return rep


# ---------------------------------------------------------------- Mignotte

def _ifloor(x: CertReal) -> int:
    f = x.floor()
    lo, hi = int(f.lower), int(f.upper)
    if lo != hi:
        raise Indeterminate(f"floor of {x} is not determined")
    return lo


def mignotte_bound(a1, a2, a3, b1, b2, b3, d1, d3, L: int, m: int, rho, chi, D: int = 2,
                   prec: int = DEFAULT_PREC, require_positive: bool = True) -> BoundReport:
    """Three-log lower bound for concrete a_i and b_i (all real case)."""
    k = _K(prec)
    a1, a2, a3, rho, chi = (k.c(v) for v in (a1, a2, a3, rho, chi))
    b1, b2, b3 = (k.c(v) for v in (b1, b2, b3))
    if m < 3:
        raise PreconditionViolated("m", "m >= 3 required")
    if L < D + 4:
        raise PreconditionViolated("L", "L >= D + 4 required")
    if not (rho >= k.e):
        raise PreconditionViolated("rho", "rho >= e required")
    if not (chi.certainly_positive() and chi <= 2):
        raise PreconditionViolated("chi", "0 < chi <= 2 required")
    Omega = a1 * a2 * a3
    a = cmax(-a1, -a2, -a3) * -1
    if not (Omega >= Fraction(5, 2)):
        raise PreconditionViolated("Omega", "Omega >= 2.5 required")
    if not (a >= Fraction(62, 100)):
        raise PreconditionViolated("a", "min a_i >= 0.62 required")
    K = _ifloor(m * Omega * L)
    c1 = cmax((chi * m * L) ** k.c(Fraction(2, 3)), (k.c(2 * m * L) / a).sqrt())
    c2 = cmax(k.c(2) ** k.c(Fraction(1, 3)) * k.c(m * L) ** k.c(Fraction(2, 3)), L * (k.c(m) / a).sqrt())
    c3 = k.c(6 * m * m) ** k.c(Fraction(1, 3)) * L
    cs = (c1, c2, c3)
    R_ = [_ifloor(c * a2 * a3) for c in cs]
    S_ = [_ifloor(c * a1 * a3) for c in cs]
    T_ = [_ifloor(c * a1 * a2) for c in cs]
    R, S, T = sum(R_) + 1, sum(S_) + 1, sum(T_) + 1
    c = cmax(k.c(R) / (L * a2 * a3), k.c(S) / (L * a1 * a3), k.c(T) / (L * a1 * a2))
    g = k.c(Fraction(1, 4)) - k.c(Fraction(K * K * L, 12 * R * S * T))
    B = (k.e**3 * c * c * Omega * Omega * L * L / (4 * K * K * k.c(d1) * k.c(d3))
         * (b1 / a2 + b2 / a1) * (b3 / a2 + b2 / a3))
    logrho = rho.log()
    pos = ((k.c(K * L) / 2 + k.c(L) / 4 - 1 - k.c(Fraction(2 * K, 3 * L))) * logrho
           - (D + 1) * k.c(L).log() - 3 * g * L * L * c * Omega
           - D * (K - 1) * B.log() - 2 * k.c(K).log() + 2 * D * k.c("1.36").log())
    tau1 = k.c((R_[0] + 1) * (S_[0] + 1) * (T_[0] + 1))
    M = cmax(k.c(R_[0] + S_[0] + 1), k.c(S_[0] + T_[0] + 1), k.c(R_[0] + T_[0] + 1), chi * tau1.sqrt())
    main = (k.c(K * L) + k.c(3 * K * L).log()) * logrho
    rep = BoundReport("mignotte", {"a": (a1, a2, a3), "b": (b1, b2, b3), "d1": d1, "d3": d3, "L": L, "m": m,
                                   "rho": rho, "chi": chi, "D": D})
    rep.constants.update({"Omega": Omega, "K": K, "c1": c1, "c2": c2, "c3": c3,
                          "R_i": R_, "S_i": S_, "T_i": T_, "R": R, "S": S, "T": T, "c": c, "g": g, "B": B,
                          "positivity": pos, "M": M,
                          "r0 bound": k.c((R_[0] + 1) * (T_[0] + 1)) / (M - T_[0]),
                          "s0 bound": k.c((S_[0] + 1) * (T_[0] + 1)) / (M - T_[0]),
                          "|r1 s1|/gcd bound": k.c((R_[0] + 1) * (S_[0] + 1)) / (M - max(R_[0], S_[0])),
                          "|s1 t1|/gcd bound": k.c((S_[0] + 1) * (T_[0] + 1)) / (M - max(S_[0], T_[0])),
                          "|r1 t2|/gcd bound": k.c((R_[0] + 1) * (T_[0] + 1)) / (M - max(R_[0], T_[0])),
                          "log Lambda > -": main})
    ok = rep.claim_gt("positivity condition", pos, 0)
    if require_positive and not ok:
        raise PositivityFailed(f"positivity quantity {pos} is not positive")
    rep.verdict = "main-bound or degenerate" if ok else "hypotheses fail"
    return rep


def mignotte_pipeline(L: int = 485, m: int = 20, rho: str = "5.7", chi: int = 2,
                      p_lo: str = "1e11", p_hi: str = "3.6e12", prec: int = DEFAULT_PREC) -> BoundReport:
    """Mignotte with alpha = (sqrt5, y, eps), b = (1, p, 2n) over y >= 19 and p in [p_lo, p_hi].

    Quantities proportional to log y are tracked as coefficients X' = X / log y;
    floors contribute a term in [-u, 0] with u = 1/log y in [0, 1/log 19].
    """
    k = _K(prec)
    D = 2
    rho_c, chi_c = k.c(rho), k.c(chi)
    u = CertReal.interval(0, 1, prec) / k.log19            # 1/log y
    drop = CertReal.interval(-1, 0, prec) * u               # floor(x log y)/log y - x
    P = CertReal.interval(p_lo, p_hi, prec)
    a1 = (rho_c + 3) / 2 * k.log5
    a2c = rho_c + 3                                         # a2 = a2c log y
    a3 = (rho_c + 1) * k.logeps
    rep = BoundReport("mignotte-pipeline", {"L": L, "m": m, "rho": rho, "chi": chi, "p": [p_lo, p_hi],
                                            "y": ">= 19"})
    # which a_i is smallest: a2 >= a2c log 19
    if not (a3 < a1 and a1 < a2c * k.log19):
        raise PreconditionViolated("a", "expected a3 < a1 < a2")
    a = a3
    Omc = a1 * a2c * a3                                     # Omega / log y
    kappa = m * L * Omc
    Kc = kappa + drop                                       # K / log y
    c1 = cmax((chi_c * m * L) ** k.c(Fraction(2, 3)), (k.c(2 * m * L) / a).sqrt())
    c2 = cmax(k.c(2) ** k.c(Fraction(1, 3)) * k.c(m * L) ** k.c(Fraction(2, 3)), L * (k.c(m) / a).sqrt())
    c3 = k.c(6 * m * m) ** k.c(Fraction(1, 3)) * L
    cs = (c1, c2, c3)
    Rc = [c * a2c * a3 for c in cs]                         # R_i / log y before flooring
    Tc = [c * a1 * a2c for c in cs]
    S_ = [_ifloor(c * a1 * a3) for c in cs]
    Ri = [r + drop for r in Rc]
    Ti = [t + drop for t in Tc]
    R = Ri[0] + Ri[1] + Ri[2] + u
    S = sum(S_) + 1
    T = Ti[0] + Ti[1] + Ti[2] + u
    c = cmax(R / (L * a2c * a3), k.c(S) / (L * a1 * a3), T / (L * a1 * a2c))
    g = k.c(Fraction(1, 4)) - Kc * Kc * L / (12 * R * S * T)
    # b3 = 2n with 2n log eps < p log y + log sqrt5
    invP = 1 / P
    b3p = (1 + u * invP * k.log5 / 2) / k.logeps           # bounds 2n / (p log y)
    Bp2 = (k.e**3 * c * c * (Omc / Kc) ** 2 * L * L / 4
           * (u * invP / a2c + 1 / a1) * (b3p / a2c + 1 / a3))   # B / p^2 (d1 = d3 = 1)
    logB = Bp2.log() + 2 * P.log()
    logrho = rho_c.log()
    loglogy_u = CertReal.interval(0, 1, prec) * (k.log19.log() / k.log19)  # log(log y)/log y
    logK_u = Kc.log() * u + loglogy_u
    positive = (Kc * L / 2 + k.c(L) / 4 * u) * logrho + 2 * D * k.c("1.36").log() * u
    negative = ((u + 2 * Kc / (3 * L)) * logrho + (D + 1) * k.c(L).log() * u + 3 * g * L * L * c * Omc
                + D * (Kc - u) * logB + 2 * logK_u)
    M = cmax(Ri[0] + (S_[0] + 1) * u, (S_[0] + 1) * u + Ti[0], Ri[0] + Ti[0] + u,
             chi_c * ((Ri[0] + u) * (Ti[0] + u) * (S_[0] + 1)).sqrt())
    frog1 = (S_[0] + 1) * (Ti[0] + u) / (M - Ti[0])
    r_bound = (Ri[0] + u) * (S_[0] + 1) / (M - cmax(Ri[0], (S_[0]) * u))
    u_bound = (S_[0] + 1) * (Ti[0] + u) / (M - cmax(Ti[0], S_[0] * u))
    main = (Kc * L + (3 * Kc * L).log() * u + 3 * loglogy_u) * logrho + k.c("2.1").log() * u
    rep.constants.update({
        "a1": a1, "a2 / log y": a2c, "a3": a3, "Omega / log y": Omc, "mL Omega / log y": kappa,
        "K / log y": Kc, "c1": c1, "c2": c2, "c3": c3,
        "R1 / log y": Ri[0], "R2 / log y": Ri[1], "R3 / log y": Ri[2],
        "S1": S_[0], "S2": S_[1], "S3": S_[2],
        "T1 / log y": Ti[0], "T2 / log y": Ti[1], "T3 / log y": Ti[2],
        "R / log y": R, "S": S, "T / log y": T, "c": c, "g": g, "B / p^2": Bp2,
        "positive part / log y": positive, "negative part / log y": negative,
        "M / log y": M, "(S1+1)(T1+1)/(M-T1)": frog1, "r bound": r_bound, "|u| bound": u_bound,
        "main bound / log y": main,
    })
    rep.claim_gt("1904870 log y < K", kappa - 1 / k.log19, 1904870)
    rep.check("K <= 1904871 log y", kappa <= 1904871)
    rep.claim_lt("c1 < 721.996", c1, "721.996")
    rep.claim_lt("c2 < 1207.96", c2, "1207.96")
    rep.claim_lt("c3 < 6493.5", c3, "6493.5")
    for i, bound in enumerate((20252, 33883, 182142)):
        rep.claim_lt(f"R{i + 1} < {bound} log y", Rc[i], bound)
    rep.check("S1, S2, S3 = 16297, 27266, 146572", S_ == [16297, 27266, 146572])
    for i, bound in enumerate((43977, 73576, 395514)):
        rep.claim_lt(f"T{i + 1} < {bound} log y", Tc[i], bound)
    rep.claim_lt("R < 236277 log y + 1", R - u, 236277)
    rep.check("S = 190136", S == 190136)
    rep.claim_lt("T < 513067 log y + 1", T - u, 513067)
    rep.claim_lt("c < 17.37", c, "17.37")
    rep.claim_lt("g < 0.244", g, "0.244")
    rep.claim_lt("B < 0.3 p^2", Bp2, "0.3")
    rep.claim_gt("(KL/2 + L/4) log rho + 4 log 1.36 > 8.03e8 log y", positive, "8.03e8")
    rep.claim_lt("negative part < 8.021e8 log y", negative, "8.021e8")
    pos_ok = rep.claim_gt("positivity condition holds", positive - negative, 0)
    rep.claim_gt("M > 7.6e6 log y", M, "7.6e6")
    rep.claim_lt("(S1+1)(T1+1)/(M-T1) < 95", frog1, 95)
    rep.claim_lt("(KL + log(3KL)) log rho + log 2.1 < 5e9 log y", main, "5e9")
    rep.claim_lt("r <= 43", r_bound, 44)
    rep.claim_lt("|u| <= 94", u_bound, 95)
    rep.claim_gt("frog2 contradicted: p_lo > main bound", k.c(p_lo) - main, 0)
    rep.claim_gt("frog1 contradicted: p_lo > 95", k.c(p_lo), 95)
    rep.constants["r max"] = int(r_bound.upper) if r_bound.upper < 1e9 else None
    rep.constants["|u| max"] = int(u_bound.upper) if u_bound.upper < 1e9 else None
    if not pos_ok:
        rep.verdict = "hypotheses fail"
    elif rep.all_passed:
        rep.verdict = "degenerate-(18): u + 2r|n| = tp with r <= 43, |u| <= 94"
    else:
        rep.verdict = "degenerate-(18) (with failed sub-claims)"
    return rep


# ---------------------------------------------------------------- Laurent

def _laurent_constants(k: _K, rho, mu, h, a1, a2):
    sigma = (1 + 2 * mu - mu * mu) / 2
    lam = sigma * rho.log()
    H = h / lam + 1 / sigma
    root = (1 + 1 / (4 * H * H)).sqrt()
    omega = 2 * (1 + root)
    theta = root + 1 / (2 * H)
    inner = (omega * omega / 9
             + 8 * lam * omega ** k.c(Fraction(5, 4)) * theta ** k.c(Fraction(1, 4)) / (3 * (a1 * a2).sqrt() * H.sqrt())
             + k.c(Fraction(4, 3)) * (1 / a1 + 1 / a2) * lam * omega / H)
    C = mu / (lam**3 * sigma) * (omega / 6 + inner.sqrt() / 2) ** 2
    Cp = (C * sigma * omega * theta / (lam**3 * mu)).sqrt()
    return sigma, lam, H, omega, theta, C, Cp


def laurent_bound(D, rho, mu, h, a1, a2, b1, b2, prec: int = DEFAULT_PREC,
                  alphas: tuple | None = None) -> BoundReport:
    """Two-log lower bound; ``alphas`` = ((|log a1|, log|a1|, h1), (...)) enables the a_i check."""
    k = _K(prec)
    rho, mu, h, a1, a2, b1, b2 = (k.c(v) for v in (rho, mu, h, a1, a2, b1, b2))
    if not (rho > 1):
        raise PreconditionViolated("rho", "rho > 1 required")
    if not (mu >= Fraction(1, 3) and mu <= 1):
        raise PreconditionViolated("mu", "1/3 <= mu <= 1 required")
    sigma, lam, H, omega, theta, C, Cp = _laurent_constants(k, rho, mu, h, a1, a2)
    need_h = cmax(D * ((b1 / a2 + b2 / a1).log() + lam.log() + k.c("1.75")) + k.c("0.06"), lam, D * k.log2 / 2)
    if not (h >= need_h):
        raise PreconditionViolated("h", f"h = {h} below required {need_h}")
    for name, ai in (("a1", a1), ("a2", a2)):
        if not (ai >= 1):
            raise PreconditionViolated(name, "a_i >= 1 required")
    if alphas is not None:
        for name, ai, (abslog, logabs, ht) in zip(("a1", "a2"), (a1, a2), alphas):
            need = rho * k.c(abslog) - k.c(logabs) + 2 * D * k.c(ht)
            if not (ai >= need):
                raise PreconditionViolated(name, f"{name} below rho|log alpha| - log|alpha| + 2D h(alpha)")
    if not (a1 * a2 >= lam * lam):
        raise PreconditionViolated("a1a2", "a1 a2 >= lambda^2 required")
    hs = h + lam / sigma
    value = -C * hs * hs * a1 * a2 - (omega * theta).sqrt() * hs - (Cp * hs * hs * a1 * a2).log()
    rep = BoundReport("laurent", {"D": D, "rho": rho, "mu": mu, "h": h, "a1": a1, "a2": a2, "b1": b1, "b2": b2},
                      {"sigma": sigma, "lambda": lam, "H": H, "omega": omega, "theta": theta, "C": C, "C'": Cp,
                       "log|Lambda| >=": value})
    rep.verdict = "lower-bound"
    return rep


def lambda_upper(y: int, p: int, prec: int = DEFAULT_PREC) -> CertReal:
    """2.1 / y^p, valid for |y| >= 19."""
    if abs(y) < 19:
        raise SmallY(f"|y| = {abs(y)} < 19")
    return CertReal.exact(Fraction(21, 10), prec) / CertReal.exact(abs(y), prec) ** p


def _geometric_pieces(lo: float, hi: float, n: int) -> list[tuple[Fraction, Fraction]]:
    ratio = (hi / lo) ** (1.0 / n)
    cuts = [Fraction(lo)] + [Fraction(round(lo * ratio**i)) for i in range(1, n)] + [Fraction(hi)]
    return [(cuts[i], cuts[i + 1]) for i in range(n)]


def _cover(lo, hi, test, n: int = 16, max_depth: int = 14) -> tuple[bool, int, list]:
    """Certify test(piece) on a geometric partition of [lo, hi], splitting failures."""
    stack = [(a, b, 0) for a, b in reversed(_geometric_pieces(float(lo), float(hi), n))]
    done, failures = 0, []
    while stack:
        a, b, depth = stack.pop()
        res = test(a, b)
        if res:
            done += 1
            continue
        if depth >= max_depth or b - a < 2:
            failures.append((a, b))
            continue
        mid = Fraction(round((a * b) ** 0.5 if a > 0 else (a + b) / 2))
        if not (a < mid < b):
            mid = (a + b) / 2
        stack.append((mid, b, depth + 1))
        stack.append((a, mid, depth + 1))
    return not failures, done, failures


def laurent_pipeline_three_logs(a1: str | int = 2562, r_max: int = 43, u_max: int = 94,
                                p_lo: str = "9.1e10", p_hi: str = "3.6e12",
                                prec: int = DEFAULT_PREC) -> BoundReport:
    """Two-log form p log(y / eps^(t/r)) + log(5^(1/2) eps^(u/r)) with mu = 1, rho = e^4.

    For each r <= r_max the contradiction p log y > -lower bound + log 2.1 is certified on a
    partition of [p_lo, p_hi]; y >= 19 enters only through u = 1/log y as described above.
    """
    k = _K(prec)
    rho = k.e**4
    mu = k.c(1)
    a1c = k.c(a1)
    umax = 1 / k.log19
    name = "laurent-three-logs" if str(a1) == "2562" else f"laurent-three-logs-a1-{a1}"
    rep = BoundReport(name, {"a1": a1, "r_max": r_max, "|u|_max": u_max, "p": [p_lo, p_hi],
                                             "rho": "e^4", "mu": 1})
    # a1 must dominate rho|log alpha1| - log|alpha1| + 2D h(alpha1), alpha1 = 5^(1/2) eps^(u/r), D = 2r
    worst, worst_at = None, None
    for r in range(1, r_max + 1):
        for uu in (u_max, -u_max):
            lg = k.log5 / 2 + k.c(Fraction(uu, r)) * k.logeps
            val = (rho * abs(lg) - lg + 2 * (2 * r) * (k.log5 / 2 + k.c(Fraction(abs(uu), 2 * r)) * k.logeps))
            if worst is None or val.upper > worst.upper:
                worst, worst_at = val, (r, uu)
    rep.constants["a1 required (height bound)"] = worst
    rep.constants["a1 required at (r, u)"] = list(worst_at)
    rep.check(f"a1 = {a1} dominates rho|log alpha1| - log|alpha1| + 2D h(alpha1)", a1c >= worst
              if not worst.contains(a1c) else False)
    # corner constants: r = 1, y = 19, p = 1e11
    r = 1
    h0 = 2 * r * k.c("1e11").log()
    a2_0 = 6 * r * k.log19 + 1
    _, lam, _, _, _, C0, Cp0 = _laurent_constants(k, rho, mu, h0, a1c, a2_0)
    rep.constants.update({"lambda": lam, "C (r=1, y=19, p=1e11)": C0, "C' (r=1, y=19, p=1e11)": Cp0})
    rep.claim_lt("C < 0.029 (r = 1, y = 19, p = 1e11)", C0, "0.029")
    rep.claim_lt("C' < 0.044 (r = 1, y = 19, p = 1e11)", Cp0, "0.044")
    rep.check("lambda = 4", lam.contains(4))

    def piece_ok(r, a, b):
        try:
            P = CertReal.interval(a, b, prec)
            D = 2 * r
            h = D * P.log()
            a2min = 6 * r * k.log19 + 1
            need_h = D * ((1 / a2min + P / a1c).log() + lam.log() + k.c("1.75")) + k.c("0.06")
            if not (h.lower > need_h.upper and h.lower > lam.upper):
                return False
            _, _, _, omega, theta, C, Cp = _laurent_constants(k, rho, mu, h, a1c, a2min)
            hs = h + lam
            t1 = C * hs * hs * a1c * (6 * r + umax)
            t2 = (omega * theta).sqrt() * hs * umax
            t3 = cmax(k.c(0), (Cp * hs * hs * a1c).log() * umax + a2min.log() / k.log19)
            total = t1 + t2 + t3 + k.c("2.1").log() * umax
            return P.lower > total.upper
        except Indeterminate:
            return False

    pieces = 0
    bad = []
    for r in range(1, r_max + 1):
        ok, n, fails = _cover(Fraction(p_lo), Fraction(p_hi), lambda a, b, r=r: piece_ok(r, a, b))
        pieces += n
        if not ok:
            bad.append(r)
    rep.constants["certified pieces"] = pieces
    rep.check(f"contradiction for every r <= {r_max} and p in [{p_lo}, {p_hi}]", not bad)
    rep.constants["failing r"] = bad
    rep.verdict = f"p < {p_lo}" if not bad else "incomplete"
    if not bad and not rep.all_passed:
        rep.verdict += " (with failed sub-claims)"
    return rep


def laurent_pipeline_two_logs(rho: int = 23, p_lo: str = "5000", p_hi: str = "1e11",
                              mu_grid: tuple | None = None, prec: int = DEFAULT_PREC) -> BoundReport:
    """N = kp + delta, alpha1 = sqrt5 / eps^(2 delta), alpha2 = eps^(2k)/Y, D = 2.

    mu is not fixed by the argument; for each piece of [p_lo, p_hi] the first value in
    ``mu_grid`` giving a contradiction is used and recorded.
    """
    k = _K(prec)
    if mu_grid is None:
        mu_grid = (Fraction(1), Fraction(2, 3), Fraction(1, 2), Fraction(2, 5), Fraction(1, 3))
    rho_c = k.c(rho)
    D = 2
    umax = 1 / k.log19
    a1 = (rho_c - 1) * (k.sqrt5 * k.eps**4).log() + k.c("5.46")
    a2c = k.c("4.04")
    a2_0 = k.c("0.0032") * (rho_c - 1)
    a2min = a2_0 + a2c * k.log19
    rep = BoundReport("laurent-two-logs", {"rho": rho, "p": [p_lo, p_hi], "D": D,
                                           "mu grid": [str(m) for m in mu_grid]})
    # heights of alpha1 for delta = +-1, +-2
    hts = {}
    need = None
    for delta in (1, -1, 2, -2):
        from .okarith import EPS, SQRT5, ok_pow
        alpha = SQRT5 * ok_pow(EPS, -2 * delta)
        ht = height_quadratic(alpha, prec).h
        hts[delta] = ht
        lg = k.log5 / 2 - 2 * delta * k.logeps
        val = rho_c * abs(lg) - lg + 2 * D * ht
        need = val if need is None or val.upper > need.upper else need
    h_bound = ((k.c(15) + 7 * k.sqrt5) / 2).log() / 2
    rep.constants.update({"h(alpha1), delta=-2": hts[-2], "1/2 log(15/2 + 7 sqrt5/2)": h_bound,
                          "a1": a1, "a1 required": need, "a2 at y = 19": a2min})
    rep.check("h(sqrt5 eps^4) = 1/2 log(15/2 + 7 sqrt5/2)", abs(hts[-2] - h_bound).upper < 1e-60)
    rep.claim_lt("h(alpha1) < 1.365", cmax(*hts.values()), "1.365")
    rep.claim_gt("a1 dominates the requirement over delta in {+-1, +-2}", a1 - need, 0)
    # |log alpha2| < 16/p <= 0.0032 and h(alpha2) <= log Y + 0.0016 give a requirement
    # (rho + 1) 0.0032 + 4 (log Y + 0.0016), linear in log Y with slope 4 < 4.04
    req0 = (rho_c + 1) * k.c("0.0032") + 4 * k.c("0.0016")
    rep.claim_gt("a2 dominates its requirement for all Y >= 19", a2min - (req0 + 4 * k.log19), 0)
    rep.claim_lt("16/p < 0.0032 for p > 5000", k.c(16) / k.c(p_lo), "0.00320001")

    used = {}

    def piece_ok(a, b):
        P = CertReal.interval(a, b, prec)
        for mu in mu_grid:
            try:
                muc = k.c(mu)
                sigma = (1 + 2 * muc - muc * muc) / 2
                lam = sigma * rho_c.log()
                h = cmax(D * ((1 / a2min + P / a1).log() + lam.log() + k.c("1.75")) + k.c("0.06"),
                         lam, D * k.log2 / 2)
                if not (a1 * a2min >= lam * lam):
                    continue
                _, _, _, omega, theta, C, Cp = _laurent_constants(k, rho_c, muc, h, a1, a2min)
                hs = h + lam / sigma
                t1 = C * hs * hs * a1 * (a2_0 * umax + a2c)
                t2 = (omega * theta).sqrt() * hs * umax
                t3 = cmax(k.c(0), (Cp * hs * hs * a1).log() * umax + a2min.log() / k.log19)
                total = t1 + t2 + t3 + k.c("2.1").log() * umax
                if P.lower > total.upper:
                    used[(a, b)] = mu
                    return True
            except Indeterminate:
                continue
        return False

    full_grid = mu_grid
    mu_grid = (Fraction(1),)
    only_one, _, _ = _cover(Fraction(p_lo), Fraction(p_hi), piece_ok, n=24, max_depth=4)
    mu_grid = full_grid
    used.clear()
    ok, n, fails = _cover(Fraction(p_lo), Fraction(p_hi), piece_ok, n=24)
    rep.constants["mu = 1 alone suffices"] = only_one
    mus = sorted({str(m) for m in used.values()})
    rep.constants.update({"certified pieces": n, "mu values used": mus,
                          "mu at p_lo": str(used[min(used)]) if used else None,
                          "failing pieces": [[str(a), str(b)] for a, b in fails]})
    rep.check(f"contradiction for all p in [{p_lo}, {p_hi}]", ok)
    rep.verdict = f"p < {p_lo}" if ok and rep.all_passed else "incomplete"
    return rep


# smallest integer above the requirement max over r <= 43, |u| <= 94 (about 2563.87)
CORRECTED_A1 = 2564


def run_all(prec: int = DEFAULT_PREC) -> list[BoundReport]:
    return [
        certify(lambda pr: matveev_pipeline(prec=pr), prec),
        certify(lambda pr: mignotte_pipeline(prec=pr), prec),
        certify(lambda pr: laurent_pipeline_three_logs(prec=pr), prec),
        certify(lambda pr: laurent_pipeline_three_logs(a1=CORRECTED_A1, prec=pr), prec),
        certify(lambda pr: laurent_pipeline_two_logs(prec=pr), prec),
    ]


_PIPELINES = {
    "matveev-pipeline": lambda prec: matveev_pipeline(prec=prec),
    "mignotte-pipeline": lambda prec: mignotte_pipeline(prec=prec),
    "laurent-three-logs": lambda prec: laurent_pipeline_three_logs(prec=prec),
    f"laurent-three-logs-a1-{CORRECTED_A1}":
        lambda prec: laurent_pipeline_three_logs(a1=CORRECTED_A1, prec=prec),
    "laurent-two-logs": lambda prec: laurent_pipeline_two_logs(prec=prec),
}


def linforms_certificates(prec: int = DEFAULT_PREC, reports: list | None = None) -> list[SieveCertificate]:
    reports = reports if reports is not None else run_all(prec)
    out = []
    for rep in reports:
        outcome = "concluded" if rep.all_passed else "survives:" + "; ".join(rep.failed())
        out.append(SieveCertificate("linforms", rep.theorem, None, None, [rep.to_json()], outcome,
                                    {"prec": prec, "verdict": rep.verdict}))
    return out


@register("linforms")
def _replay_linforms(cert: SieveCertificate) -> bool:
    from .certificates import _dec, _enc
    fresh = _PIPELINES[cert.p](cert.meta.get("prec", DEFAULT_PREC))
    (old,) = cert.witnesses
    new = _dec(_enc(fresh.to_json()))        # same normalisation as a stored record
    if [list(c) for c in old["checks"]] != new["checks"]:
        return False
    for name, v in new["constants"].items():
        if isinstance(v, dict) and "lo" in v:
            ov = old["constants"].get(name)
            if ov is None:
                return False
            a, b = CertReal.from_json(v), CertReal.from_json(ov)
            if not (a.contains(b) or b.contains(a)):
                return False
        elif old["constants"].get(name) != v:
            return False
    return True
